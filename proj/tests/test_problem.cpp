#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "learnopt/bench.hpp"
#include "learnopt/problem.hpp"
#include "support/brute_force.hpp"

namespace {

using namespace learnopt;
using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

const fs::path kFixtures = LEARNOPT_FIXTURES;

json chain3_json() {
  std::ifstream in(kFixtures / "chain3.json");
  return json::parse(in);
}

std::string error_of(const json& j) {
  try {
    parse_problem(j);
  } catch (const ProblemError& e) {
    return e.what();
  }
  return "";
}

TEST(LoadProblem, Chain3Fixture) {
  ProblemSpec spec = load_problem(kFixtures / "chain3.json");
  EXPECT_EQ(spec.name, "chain3");
  EXPECT_EQ(spec.variables.size(), 3u);
  EXPECT_EQ(spec.language.size(), 6u);
  EXPECT_EQ(spec.oracle.kind, OracleSpec::Kind::hidden_network);
  EXPECT_EQ(spec.oracle.constraints, (ConstraintNetwork{{Relation::lt, 0, 1}, {Relation::lt, 1, 2}}));
  EXPECT_EQ(spec.seed, (Assignment{1, 2, 3}));
  EXPECT_EQ(spec.variables[1].domain, (std::vector<Value>{1, 2, 3}));
  EXPECT_EQ(spec.cutoff_seconds, 30.0);
}

TEST(LoadProblem, InteractiveFixture) {
  ProblemSpec spec = load_problem(kFixtures / "chain3_interactive.json");
  EXPECT_EQ(spec.oracle.kind, OracleSpec::Kind::interactive);
  EXPECT_TRUE(spec.oracle.constraints.empty());
  EXPECT_THROW(make_simulated_oracle(spec), ProblemError);
}

TEST(LoadProblem, SeedViolatingTargetIsRejected) {
  json j = chain3_json();
  j["seed_solution"]["x2"] = 1;
  std::string err = error_of(j);
  EXPECT_NE(err.find("oracle.constraints[0]"), std::string::npos) << err;
}

TEST(LoadProblem, EpsilonDefaultsToZero) {
  json j = chain3_json();
  j.erase("epsilon");
  EXPECT_EQ(parse_problem(j).epsilon, 0);
}

TEST(LoadProblem, ErrorsNameTheField) {
  json j = chain3_json();
  j["variables"][1]["domain"] = {{"min", 3}, {"max", 1}};
  EXPECT_NE(error_of(j).find("variables[1]"), std::string::npos) << error_of(j);

  j = chain3_json();
  j["language"].push_back("~");
  EXPECT_NE(error_of(j).find("language"), std::string::npos) << error_of(j);

  j = chain3_json();
  j["objective"]["coefficients"]["y"] = 1;
  EXPECT_NE(error_of(j).find("objective.coefficients"), std::string::npos) << error_of(j);

  j = chain3_json();
  j["oracle"]["constraints"][1]["scope"] = {"x2", "x9"};
  EXPECT_NE(error_of(j).find("oracle.constraints[1]"), std::string::npos) << error_of(j);

  j = chain3_json();
  j["seed_solution"].erase("x3");
  EXPECT_NE(error_of(j).find("seed_solution"), std::string::npos) << error_of(j);

  EXPECT_THROW(load_problem(kFixtures / "does-not-exist.json"), ProblemError);
}

TEST(LoadProblem, ExplicitDomainSets) {
  json j = chain3_json();
  j["variables"][0]["domain"] = {5, 1, 3};
  j["seed_solution"]["x1"] = 1;
  EXPECT_EQ(parse_problem(j).variables[0].domain, (std::vector<Value>{1, 3, 5}));
}

TEST(ProblemSpec, MaximizeIsNegated) {
  json j = chain3_json();
  j["objective"]["sense"] = "maximize";
  j["objective"]["constant"] = 4;
  ProblemSpec spec = parse_problem(j);
  Vocabulary voc = spec.vocabulary();
  EXPECT_EQ(voc.objective.coefficients, (std::vector<Value>{-1, -1, -1}));
  EXPECT_EQ(voc.objective.constant, -4);
  // Stored as written.
  EXPECT_EQ(spec.objective.coefficients, (std::vector<Value>{1, 1, 1}));
}

TEST(ProblemSpec, RoundTrip) {
  auto dir = fs::temp_directory_path() / "learnopt_problem_rt";
  fs::create_directories(dir);
  EXPECT_EQ(parse_problem(to_json(load_problem(kFixtures / "chain3.json"))),
            load_problem(kFixtures / "chain3.json"));
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    ProblemSpec spec = generate_random_instance(seed, 2 + seed % 5, 2 + seed % 4, 0.4);
    spec.epsilon = static_cast<Value>(seed % 3);
    if (seed % 2) spec.node_budget = 1000 * seed;
    if (seed % 3 == 0) spec.objective.sense = Sense::maximize;
    auto path = dir / ("p" + std::to_string(seed) + ".json");
    write_problem(spec, path);
    EXPECT_EQ(load_problem(path), spec) << seed;
  }
  fs::remove_all(dir);
}

TEST(EventLog, JsonlRoundTrip) {
  ProblemSpec spec = load_problem(kFixtures / "chain3.json");
  auto oracle = make_simulated_oracle(spec);
  Session s(spec.session_config(), *oracle);
  s.run();
  std::stringstream buf;
  write_event_log(s.events(), buf);
  auto back = parse_event_log(buf);
  ASSERT_EQ(back.size(), s.events().size());
  EXPECT_EQ(back, s.events());
  auto exchanges = exchanges_from_log(back, spec.vocabulary());
  EXPECT_EQ(exchanges.size(), s.state().queries.total());
}

TEST(Replay, Chain3IsIdentical) {
  ProblemSpec spec = load_problem(kFixtures / "chain3.json");
  auto oracle = make_simulated_oracle(spec);
  Session s(spec.session_config(), *oracle);
  s.run();
  auto report = replay(s.events());
  EXPECT_TRUE(report.identical) << report.first_difference;
  EXPECT_EQ(strip_timing(report.replayed), strip_timing(s.events()));
}

TEST(Replay, DetectsTamperedAnswer) {
  ProblemSpec spec = load_problem(kFixtures / "chain3.json");
  auto oracle = make_simulated_oracle(spec);
  Session s(spec.session_config(), *oracle);
  s.run();
  auto events = s.events();
  for (auto& e : events) {
    if (e["event"] == "answer") {
      e["answer"] = e["answer"] == "yes" ? "no" : "yes";
      break;
    }
  }
  EXPECT_FALSE(replay(events).identical);
}

TEST(Replay, RandomSessionsAreIdentical) {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    ProblemSpec spec = generate_random_instance(seed, 3 + seed % 4, 3 + seed % 3, 0.3);
    spec.epsilon = static_cast<Value>(seed % 2);
    auto oracle = make_simulated_oracle(spec);
    Session s(spec.session_config(), *oracle);
    s.run();
    auto report = replay(s.events());
    EXPECT_TRUE(report.identical) << spec.name << " at " << report.first_difference;
  }
}

}  // namespace
