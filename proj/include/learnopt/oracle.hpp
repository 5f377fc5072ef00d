#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "learnopt/model.hpp"

namespace learnopt {

enum class Answer { yes, no };

std::string_view to_string(Answer a);

// The user behind ask(e). Implementations only ever see the assignment.
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual Answer ask(const Assignment& e) = 0;

  // True once the oracle can no longer answer (script exhausted, human gone).
  // The engine treats this like the cutoff.
  virtual bool expired() const { return false; }

  // Optional annotation for the most recent answer (human think time).
  virtual std::optional<double> last_latency() const { return std::nullopt; }
};

// Thrown by ask() when no answer will ever come (timeout, cancellation,
// exhausted script). The engine maps it to the cutoff outcome.
class OracleUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown by a scripted replay when the engine poses a query other than the
// recorded one.
class ReplayMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Truthful simulated user over a hidden target network. A partial assignment
// is positive iff it violates no target constraint whose scope is fully bound.
class HiddenNetworkOracle final : public Oracle {
 public:
  explicit HiddenNetworkOracle(ConstraintNetwork target) : target_(std::move(target)) {}
  Answer ask(const Assignment& e) override;

 private:
  ConstraintNetwork target_;
};

struct ScriptedExchange {
  Assignment query;
  Answer answer;
};

class ScriptedOracle final : public Oracle {
 public:
  explicit ScriptedOracle(std::vector<ScriptedExchange> script) : script_(std::move(script)) {}
  Answer ask(const Assignment& e) override;
  bool expired() const override { return next_ >= script_.size(); }
  std::size_t consumed() const { return next_; }

 private:
  std::vector<ScriptedExchange> script_;
  std::size_t next_ = 0;
};

// Single-producer single-consumer handoff between an engine thread (which
// blocks in ask) and whoever collects human answers.
class InteractiveOracle final : public Oracle {
 public:
  struct Pending {
    std::uint64_t id;
    Assignment query;
  };

  enum class Delivery { accepted, no_pending, stale_id };

  explicit InteractiveOracle(std::optional<std::chrono::steady_clock::time_point> deadline = {})
      : deadline_(deadline) {}

  Answer ask(const Assignment& e) override;
  bool expired() const override;

  std::optional<Pending> pending() const;
  Delivery deliver(std::uint64_t query_id, Answer answer, std::optional<double> latency_s = {});

  // Wakes a blocked ask() with OracleUnavailable; later asks fail at once.
  void cancel();

  // Blocks until a query is pending, or `done` is set by mark_finished, or
  // the timeout elapses.
  void wait_for_activity(std::chrono::milliseconds timeout) const;
  void mark_finished();

  // Latency annotations for delivered answers, in delivery order.
  std::vector<std::optional<double>> latencies() const;
  std::optional<double> last_latency() const override;

 private:
  mutable std::mutex mutex_;
  mutable std::condition_variable cv_;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  std::optional<Pending> pending_;
  std::optional<Answer> inbox_;
  std::uint64_t next_id_ = 1;
  bool cancelled_ = false;
  bool finished_ = false;
  bool timed_out_ = false;
  std::vector<std::optional<double>> latencies_;
};

}  // namespace learnopt
