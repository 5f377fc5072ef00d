#include "learnopt/service.hpp"

#include <sstream>

#include <httplib.h>

namespace learnopt {

using json = nlohmann::ordered_json;

namespace {

std::optional<std::chrono::steady_clock::time_point> deadline_for(const ProblemSpec& spec) {
  return std::chrono::steady_clock::now() +
         std::chrono::duration_cast<std::chrono::steady_clock::duration>(
             Seconds(spec.cutoff_seconds));
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, json{{"error", message}}, status);
}

}  // namespace

ServiceSession::ServiceSession(ProblemSpec spec)
    : spec_(std::move(spec)), vocabulary_(spec_.vocabulary()), interactive_(deadline_for(spec_)) {
  if (spec_.oracle.kind == OracleSpec::Kind::interactive) {
    oracle_ = &interactive_;
  } else {
    simulated_ = make_simulated_oracle(spec_);
    oracle_ = simulated_.get();
  }
  snapshot_ = {{"status", "RUNNING"}};

  worker_ = std::thread([this] {
    try {
      Session session(spec_.session_config(), *oracle_,
                      [this](const Event& e, const SessionState& s) { on_event(e, s); });
      session.run();
    } catch (const std::exception& e) {
      std::lock_guard lock(mutex_);
      error_ = e.what();
      snapshot_["status"] = "ERROR";
      snapshot_["error"] = error_;
    }
    {
      std::lock_guard lock(mutex_);
      finished_ = true;
    }
    interactive_.mark_finished();
  });
}

ServiceSession::~ServiceSession() {
  interactive_.cancel();
  if (worker_.joinable()) worker_.join();
}

void ServiceSession::on_event(const Event& e, const SessionState& s) {
  json learned = json::array();
  for (const auto& c : s.acquisition.learned) learned.push_back(to_string(c, vocabulary_));
  json trace = json::array();
  for (const auto& p : s.trace) {
    trace.push_back({{"iteration", p.iteration},
                     {"lb", p.lb},
                     {"ub", p.ub},
                     {"queries", p.queries},
                     {"elapsed_s", p.elapsed.count()}});
  }
  json snap{{"status", to_string(s.status)},
            {"reason", to_string(s.reason)},
            {"lb", s.lb},
            {"ub", s.ub},
            {"iteration", s.iteration},
            {"learned_constraints", learned},
            {"basis_size", s.acquisition.basis.size()},
            {"queries_asked", s.queries.total()},
            {"trace", trace}};
  if (s.status != Status::running) {
    json el = json::object(), eu = json::object();
    for (VarId v = 0; v < vocabulary_.size(); ++v) {
      if (s.lower_witness.is_bound(v)) el[vocabulary_.names[v]] = s.lower_witness.value(v);
      if (s.upper_witness.is_bound(v)) eu[vocabulary_.names[v]] = s.upper_witness.value(v);
    }
    snap["e_l"] = el;
    snap["e_u"] = eu;
  }
  std::lock_guard lock(mutex_);
  snapshot_ = std::move(snap);
  events_.push_back(e);
}

json ServiceSession::summary() const {
  std::lock_guard lock(mutex_);
  return snapshot_;
}

std::optional<json> ServiceSession::pending_query() const {
  auto p = interactive_.pending();
  if (!p) return std::nullopt;
  json bindings = json::object();
  for (VarId v = 0; v < vocabulary_.size(); ++v) {
    if (p->query.is_bound(v)) bindings[vocabulary_.names[v]] = p->query.value(v);
  }
  return json{{"query_id", p->id}, {"bindings", bindings}, {"partial", !p->query.complete()}};
}

InteractiveOracle::Delivery ServiceSession::answer(std::uint64_t query_id, Answer a,
                                                   std::optional<double> latency_s) {
  return interactive_.deliver(query_id, a, latency_s);
}

std::string ServiceSession::log_jsonl() const {
  std::lock_guard lock(mutex_);
  std::ostringstream out;
  write_event_log(events_, out);
  return out.str();
}

void ServiceSession::wait_until_idle(std::chrono::milliseconds timeout) const {
  interactive_.wait_for_activity(timeout);
}

bool ServiceSession::finished() const {
  std::lock_guard lock(mutex_);
  return finished_;
}

Service::Service() : server_(std::make_unique<httplib::Server>()) { install_routes(); }

Service::~Service() {
  stop();
  std::lock_guard lock(mutex_);
  sessions_.clear();
}

std::shared_ptr<ServiceSession> Service::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

void Service::install_routes() {
  server_->Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    ProblemSpec spec;
    try {
      spec = parse_problem(json::parse(req.body));
    } catch (const json::exception& e) {
      return send_error(res, 400, e.what());
    } catch (const ProblemError& e) {
      return send_error(res, 400, e.what());
    }
    std::shared_ptr<ServiceSession> session;
    try {
      session = std::make_shared<ServiceSession>(std::move(spec));
    } catch (const std::exception& e) {
      return send_error(res, 400, e.what());
    }
    session->wait_until_idle(std::chrono::milliseconds(2000));
    std::string id;
    {
      std::lock_guard lock(mutex_);
      id = "s" + std::to_string(next_id_++);
      sessions_[id] = session;
    }
    send_json(res, json{{"session_id", id}}, 201);
  });

  server_->Get(R"(/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    auto session = find(req.matches[1]);
    if (!session) return send_error(res, 404, "no such session");
    send_json(res, session->summary());
  });

  server_->Get(R"(/sessions/([^/]+)/query)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 auto session = find(req.matches[1]);
                 if (!session) return send_error(res, 404, "no such session");
                 auto q = session->pending_query();
                 if (!q) {
                   res.status = 204;
                   return;
                 }
                 send_json(res, *q);
               });

  server_->Post(R"(/sessions/([^/]+)/answer)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  auto session = find(req.matches[1]);
                  if (!session) return send_error(res, 404, "no such session");
                  std::uint64_t id = 0;
                  Answer a = Answer::no;
                  std::optional<double> latency;
                  try {
                    json body = json::parse(req.body);
                    id = body.at("query_id").get<std::uint64_t>();
                    auto text = body.at("answer").get<std::string>();
                    if (text == "yes") a = Answer::yes;
                    else if (text != "no") return send_error(res, 400, "answer must be yes or no");
                    if (body.contains("latency_s")) latency = body.at("latency_s").get<double>();
                  } catch (const json::exception& e) {
                    return send_error(res, 400, e.what());
                  }
                  switch (session->answer(id, a, latency)) {
                    case InteractiveOracle::Delivery::no_pending:
                      return send_error(res, 409, "no query is pending");
                    case InteractiveOracle::Delivery::stale_id:
                      return send_error(res, 409, "query id does not match the pending query");
                    case InteractiveOracle::Delivery::accepted:
                      break;
                  }
                  // Let the engine reach its next ask point so the reply is current.
                  session->wait_until_idle(std::chrono::milliseconds(2000));
                  send_json(res, session->summary());
                });

  server_->Get(R"(/sessions/([^/]+)/log)", [this](const httplib::Request& req, httplib::Response& res) {
    auto session = find(req.matches[1]);
    if (!session) return send_error(res, 404, "no such session");
    res.set_content(session->log_jsonl(), "application/x-ndjson");
  });
}

bool Service::listen(const std::string& host, int port) { return server_->listen(host, port); }

int Service::bind_any_port(const std::string& host) { return server_->bind_to_any_port(host); }

bool Service::listen_after_bind() { return server_->listen_after_bind(); }

void Service::stop() {
  if (server_->is_running()) server_->stop();
}

void Service::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace learnopt
