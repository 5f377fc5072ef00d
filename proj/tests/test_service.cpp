#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "learnopt/problem.hpp"
#include "learnopt/service.hpp"

namespace {

using namespace learnopt;
using json = nlohmann::ordered_json;

const std::filesystem::path kFixtures = LEARNOPT_FIXTURES;

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    port_ = service_.bind_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { service_.listen_after_bind(); });
    service_.wait_until_ready();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    client_->set_read_timeout(10, 0);
  }
  void TearDown() override {
    service_.stop();
    thread_.join();
  }

  std::string create(const std::string& body) {
    auto res = client_->Post("/sessions", body, "application/json");
    EXPECT_TRUE(res);
    EXPECT_EQ(res->status, 201) << res->body;
    return json::parse(res->body).at("session_id").get<std::string>();
  }

  json get(const std::string& path, int expect = 200) {
    auto res = client_->Get(path);
    EXPECT_TRUE(res);
    EXPECT_EQ(res->status, expect) << path;
    return res->body.empty() ? json() : json::parse(res->body);
  }

  httplib::Result answer(const std::string& id, std::uint64_t query_id, const std::string& a) {
    json body{{"query_id", query_id}, {"answer", a}};
    return client_->Post("/sessions/" + id + "/answer", body.dump(), "application/json");
  }

  // Answers every pending query truthfully with respect to `target` until the
  // session stops asking.
  json drive(const std::string& id, const ConstraintNetwork& target, const Vocabulary& voc) {
    HiddenNetworkOracle truth(target);
    for (int guard = 0; guard < 500; ++guard) {
      auto res = client_->Get("/sessions/" + id + "/query");
      if (res->status == 204) break;
      json q = json::parse(res->body);
      Assignment e(voc.size());
      for (VarId v = 0; v < voc.size(); ++v) {
        if (q["bindings"].contains(voc.names[v])) e.bind(v, q["bindings"][voc.names[v]].get<Value>());
      }
      EXPECT_EQ(q["partial"].get<bool>(), !e.complete());
      auto r = answer(id, q["query_id"].get<std::uint64_t>(), truth.ask(e) == Answer::yes ? "yes" : "no");
      EXPECT_EQ(r->status, 200) << r->body;
    }
    return get("/sessions/" + id);
  }

  Service service_;
  int port_ = 0;
  std::thread thread_;
  std::unique_ptr<httplib::Client> client_;
};

TEST_F(ServiceTest, InteractiveSessionOffersFirstQuery) {
  auto id = create(read_file(kFixtures / "chain3_interactive.json"));
  json state = get("/sessions/" + id);
  EXPECT_EQ(state["status"], "RUNNING");
  EXPECT_EQ(state["lb"], 3);
  EXPECT_EQ(state["ub"], 6);
  EXPECT_EQ(state["basis_size"], 9);
  json q = get("/sessions/" + id + "/query");
  EXPECT_EQ(q["query_id"], 1);
  EXPECT_EQ(q["partial"], false);
  EXPECT_EQ(q["bindings"], (json{{"x1", 1}, {"x2", 1}, {"x3", 1}}));
}

TEST_F(ServiceTest, AnswerProtocolErrors) {
  // A simulated session finishes on its own; nothing is ever pending.
  auto done = create(read_file(kFixtures / "chain3.json"));
  auto r = answer(done, 1, "yes");
  EXPECT_EQ(r->status, 409);
  get("/sessions/" + done + "/query", 204);

  auto id = create(read_file(kFixtures / "chain3_interactive.json"));
  EXPECT_EQ(answer(id, 99, "yes")->status, 409);
  EXPECT_EQ(answer(id, 1, "maybe")->status, 400);
  EXPECT_EQ(answer(id, 1, "yes")->status, 200);
  // Double submission of the same id.
  EXPECT_EQ(answer(id, 1, "yes")->status, 409);

  get("/sessions/nope", 404);
  EXPECT_EQ(client_->Post("/sessions", "{", "application/json")->status, 400);
  EXPECT_EQ(client_->Post("/sessions", R"({"variables": []})", "application/json")->status, 400);
}

TEST_F(ServiceTest, SessionsAreIndependent) {
  auto body = read_file(kFixtures / "chain3_interactive.json");
  auto a = create(body);
  auto b = create(body);
  EXPECT_NE(a, b);
  // Answer "yes" in a only: its basis shrinks, b is untouched.
  json r = json::parse(answer(a, 1, "yes")->body);
  EXPECT_LT(r["basis_size"].get<int>(), 9);
  json sb = get("/sessions/" + b);
  EXPECT_EQ(sb["basis_size"], 9);
  EXPECT_EQ(sb["queries_asked"], 0);  // counted once answered
  EXPECT_EQ(get("/sessions/" + b + "/query")["query_id"], 1);
}

TEST_F(ServiceTest, DriveChain3ToOptimum) {
  auto id = create(read_file(kFixtures / "chain3_interactive.json"));
  ProblemSpec spec = load_problem(kFixtures / "chain3.json");
  json final_state = drive(id, spec.oracle.constraints, spec.vocabulary());
  EXPECT_EQ(final_state["status"], "OPTIMAL");
  EXPECT_EQ(final_state["lb"], 6);
  EXPECT_EQ(final_state["ub"], 6);
  EXPECT_EQ(final_state["e_u"], (json{{"x1", 1}, {"x2", 2}, {"x3", 3}}));

  auto res = client_->Get("/sessions/" + id + "/log");
  ASSERT_EQ(res->status, 200);
  std::istringstream in(res->body);
  auto events = parse_event_log(in);
  ASSERT_FALSE(events.empty());
  EXPECT_EQ(events.front()["event"], "session_start");
  const auto& last = events.back();
  EXPECT_EQ(last["event"], "terminated");
  EXPECT_EQ(last["lb"], final_state["lb"]);
  EXPECT_EQ(last["ub"], final_state["ub"]);
  EXPECT_EQ(last["learned"].size(), final_state["learned_constraints"].size());
  EXPECT_EQ(last["queries"]["total"], final_state["queries_asked"]);
}

TEST_F(ServiceTest, SimulatedSessionRunsToCompletion) {
  auto id = create(read_file(kFixtures / "chain3.json"));
  json s;
  for (int i = 0; i < 100; ++i) {
    s = get("/sessions/" + id);
    if (s["status"] != "RUNNING") break;
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  EXPECT_EQ(s["status"], "OPTIMAL");
  EXPECT_EQ(s["lb"], 6);
}

}  // namespace
