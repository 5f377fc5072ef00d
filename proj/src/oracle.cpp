#include "learnopt/oracle.hpp"

namespace learnopt {

std::string_view to_string(Answer a) { return a == Answer::yes ? "yes" : "no"; }

Answer HiddenNetworkOracle::ask(const Assignment& e) {
  return violates_any(target_, e) ? Answer::no : Answer::yes;
}

Answer ScriptedOracle::ask(const Assignment& e) {
  if (next_ >= script_.size()) throw OracleUnavailable("scripted oracle exhausted");
  const auto& expected = script_[next_];
  if (!(expected.query == e))
    throw ReplayMismatch("query #" + std::to_string(next_ + 1) + " differs from the recorded one");
  ++next_;
  return expected.answer;
}

Answer InteractiveOracle::ask(const Assignment& e) {
  std::unique_lock lock(mutex_);
  if (cancelled_ || timed_out_) throw OracleUnavailable("interactive oracle closed");
  pending_ = Pending{next_id_++, e};
  inbox_.reset();
  cv_.notify_all();

  auto ready = [&] { return inbox_.has_value() || cancelled_; };
  if (deadline_) {
    if (!cv_.wait_until(lock, *deadline_, ready)) {
      timed_out_ = true;
      pending_.reset();
      cv_.notify_all();
      throw OracleUnavailable("no answer before the cutoff");
    }
  } else {
    cv_.wait(lock, ready);
  }
  if (!inbox_) {
    pending_.reset();
    throw OracleUnavailable("interactive oracle cancelled");
  }
  Answer a = *inbox_;
  inbox_.reset();
  return a;
}

bool InteractiveOracle::expired() const {
  std::lock_guard lock(mutex_);
  return cancelled_ || timed_out_;
}

std::optional<InteractiveOracle::Pending> InteractiveOracle::pending() const {
  std::lock_guard lock(mutex_);
  return pending_;
}

InteractiveOracle::Delivery InteractiveOracle::deliver(std::uint64_t query_id, Answer answer,
                                                       std::optional<double> latency_s) {
  std::lock_guard lock(mutex_);
  if (!pending_) return Delivery::no_pending;
  if (pending_->id != query_id) return Delivery::stale_id;
  pending_.reset();
  inbox_ = answer;
  latencies_.push_back(latency_s);
  cv_.notify_all();
  return Delivery::accepted;
}

void InteractiveOracle::cancel() {
  std::lock_guard lock(mutex_);
  cancelled_ = true;
  cv_.notify_all();
}

void InteractiveOracle::wait_for_activity(std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mutex_);
  cv_.wait_for(lock, timeout, [&] { return pending_.has_value() || finished_ || cancelled_; });
}

void InteractiveOracle::mark_finished() {
  std::lock_guard lock(mutex_);
  finished_ = true;
  cv_.notify_all();
}

std::vector<std::optional<double>> InteractiveOracle::latencies() const {
  std::lock_guard lock(mutex_);
  return latencies_;
}

std::optional<double> InteractiveOracle::last_latency() const {
  std::lock_guard lock(mutex_);
  return latencies_.empty() ? std::nullopt : latencies_.back();
}

}  // namespace learnopt
