#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "learnopt/acquisition.hpp"
#include "learnopt/model.hpp"
#include "learnopt/oracle.hpp"
#include "learnopt/solver.hpp"

namespace learnopt {

using Event = nlohmann::ordered_json;
using Seconds = std::chrono::duration<double>;

enum class Status { running, optimal, near_optimal, collapsed };

enum class Termination {
  none,
  epsilon_gap,             // ub - lb <= epsilon
  converged,               // no query can separate learned from learned + basis
  lower_witness_feasible,  // the lower-bound optimum was classified positive
  cutoff,                  // wall-clock budget spent, or the oracle expired
  node_budget,             // a solver call exceeded its node budget
  oracle_unavailable,      // the oracle stopped answering mid-iteration
  collapse,                // no candidate constraint explains a negative answer
};

std::string_view to_string(Status s);
std::string_view to_string(Termination t);

struct SessionConfig {
  Vocabulary vocabulary;
  std::vector<Relation> language{std::begin(kAllRelations), std::end(kAllRelations)};
  Assignment seed;
  Value epsilon = 0;
  std::optional<Seconds> cutoff;  // unset = no wall-clock limit
  SearchLimits limits;            // per solver call, inside the loop
  Event problem;                  // echoed into session_start so logs can be replayed

  // Throws std::invalid_argument when an invariant does not hold.
  void validate() const;
};

struct QueryCounts {
  std::array<std::uint64_t, 4> by_kind{};

  std::uint64_t& operator[](QueryKind k) { return by_kind[static_cast<std::size_t>(k)]; }
  std::uint64_t operator[](QueryKind k) const { return by_kind[static_cast<std::size_t>(k)]; }
  std::uint64_t total() const;
};

struct BoundTracePoint {
  std::size_t iteration = 0;
  Value lb = 0;
  Value ub = 0;
  Assignment lower_witness;
  Assignment upper_witness;
  std::uint64_t queries = 0;
  Seconds elapsed{0};
};

struct SessionState {
  AcquisitionState acquisition;
  Value lb = 0;
  Value ub = 0;
  Assignment lower_witness;  // e_l, optimum of learned
  Assignment upper_witness;  // e_u, optimum of learned + basis
  std::size_t iteration = 0;
  QueryCounts queries;
  std::vector<QueryRecord> query_log;
  std::vector<BoundTracePoint> trace;
  Status status = Status::running;
  Termination reason = Termination::none;
};

enum class QueryStatus { query, converged, budget };

struct QuerySearch {
  QueryStatus status = QueryStatus::converged;
  Assignment query;          // set when status == query
  std::optional<Constraint> target;  // the basis constraint the query violates
};

// Looks for a complete assignment satisfying `learned` and violating some
// basis constraint. Candidates are tried in canonical order, starting right
// after `after` and wrapping around.
QuerySearch find_informative_query(const Vocabulary& voc, const AcquisitionState& state,
                                   const std::optional<Constraint>& after,
                                   const SearchLimits& limits = {});

// Invoked after every event is appended, with the state at that moment.
using EventListener = std::function<void(const Event&, const SessionState&)>;

// The learn-and-optimize loop as a resumable state machine: construction
// builds the basis and the initial bounds, each step() runs one iteration.
// A session is confined to one thread; ask() may block inside step().
class Session {
 public:
  Session(SessionConfig config, Oracle& oracle, EventListener listener = {});

  const SessionState& state() const { return state_; }
  const SessionConfig& config() const { return config_; }
  const std::vector<Event>& events() const { return events_; }
  bool running() const { return state_.status == Status::running; }

  // A complete assignment satisfying learned and violating at least one basis
  // constraint, or nullopt (converged) when none exists. Candidates rotate
  // round-robin, starting after the one that produced the previous query.
  std::optional<Assignment> generate_query();

  // One iteration; no-op once the session has terminated.
  void step();

  // Steps until termination, the cutoff, or oracle expiry.
  const SessionState& run();

  Seconds elapsed() const;

 private:
  struct BudgetExhausted {};

  Answer ask(const Assignment& e, QueryKind kind);
  Assignment optimum_of(const ConstraintNetwork& network, const SearchLimits& limits,
                        Value& value);
  void recompute_bounds(const SearchLimits& limits);
  bool converged();
  void record_bounds();
  void finish(Status status, Termination reason);
  void emit(Event event);
  Event assignment_json(const Assignment& e) const;
  Event network_json(const ConstraintNetwork& n) const;

  SessionConfig config_;
  Oracle& oracle_;
  EventListener listener_;
  SessionState state_;
  std::vector<Event> events_;
  std::optional<Assignment> pending_negative_;
  std::optional<Constraint> cursor_;
  std::chrono::steady_clock::time_point start_;
};

// Runs a full session and returns the final state.
SessionState run(const SessionConfig& config, Oracle& oracle, EventListener listener = {});

// Event lines with timing fields (elapsed_ms, latency_s) removed, for
// comparing a replay against its original log.
std::vector<Event> strip_timing(const std::vector<Event>& events);

}  // namespace learnopt
