#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include <json.hpp>

#include "learnopt/engine.hpp"
#include "learnopt/oracle.hpp"
#include "learnopt/problem.hpp"

namespace httplib {
class Server;
}

namespace learnopt {

// One engine running on its own thread. Interactive sessions block in the
// oracle until an answer is delivered; simulated ones run to completion.
class ServiceSession {
 public:
  explicit ServiceSession(ProblemSpec spec);
  ~ServiceSession();

  ServiceSession(const ServiceSession&) = delete;
  ServiceSession& operator=(const ServiceSession&) = delete;

  nlohmann::ordered_json summary() const;
  std::optional<nlohmann::ordered_json> pending_query() const;
  InteractiveOracle::Delivery answer(std::uint64_t query_id, Answer a,
                                     std::optional<double> latency_s);
  std::string log_jsonl() const;

  // Waits until the engine is blocked on a query or has finished.
  void wait_until_idle(std::chrono::milliseconds timeout) const;
  bool finished() const;

 private:
  void on_event(const Event& e, const SessionState& s);

  ProblemSpec spec_;
  Vocabulary vocabulary_;
  std::unique_ptr<Oracle> simulated_;
  InteractiveOracle interactive_;
  Oracle* oracle_ = nullptr;

  mutable std::mutex mutex_;
  nlohmann::ordered_json snapshot_;
  std::vector<Event> events_;
  bool finished_ = false;
  std::string error_;

  std::thread worker_;
};

// HTTP+JSON session API:
//   POST /sessions               body: problem  -> {session_id}
//   GET  /sessions/{id}                          -> state summary
//   GET  /sessions/{id}/query                    -> pending query, or 204
//   POST /sessions/{id}/answer   {query_id, answer: "yes"|"no"} -> 200, 409 if stale
//   GET  /sessions/{id}/log                      -> JSONL
class Service {
 public:
  Service();
  ~Service();

  // Blocks serving requests until stop().
  bool listen(const std::string& host, int port);
  // Binds to an ephemeral port and returns it; serve with listen_after_bind.
  int bind_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  void install_routes();
  std::shared_ptr<ServiceSession> find(const std::string& id) const;

  std::unique_ptr<httplib::Server> server_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<ServiceSession>> sessions_;
  std::uint64_t next_id_ = 1;
};

}  // namespace learnopt
