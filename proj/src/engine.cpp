#include "learnopt/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace learnopt {

std::string_view to_string(Status s) {
  switch (s) {
    case Status::running: return "RUNNING";
    case Status::optimal: return "OPTIMAL";
    case Status::near_optimal: return "NEAR_OPTIMAL";
    case Status::collapsed: return "COLLAPSED";
  }
  return "?";
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::none: return "none";
    case Termination::epsilon_gap: return "epsilon_gap";
    case Termination::converged: return "converged";
    case Termination::lower_witness_feasible: return "lower_witness_feasible";
    case Termination::cutoff: return "cutoff";
    case Termination::node_budget: return "node_budget";
    case Termination::oracle_unavailable: return "oracle_unavailable";
    case Termination::collapse: return "collapse";
  }
  return "?";
}

void SessionConfig::validate() const {
  vocabulary.validate();
  if (seed.size() != vocabulary.size() || !seed.complete())
    throw std::invalid_argument("seed solution must bind every variable");
  for (VarId v = 0; v < seed.size(); ++v) {
    if (!vocabulary.in_domain(v, seed.value(v)))
      throw std::invalid_argument("seed value of " + vocabulary.names[v] + " is outside its domain");
  }
  if (epsilon < 0) throw std::invalid_argument("epsilon must be non-negative");
  if (cutoff && cutoff->count() < 0) throw std::invalid_argument("cutoff must be non-negative");
}

std::uint64_t QueryCounts::total() const {
  std::uint64_t sum = 0;
  for (auto c : by_kind) sum += c;
  return sum;
}

Session::Session(SessionConfig config, Oracle& oracle, EventListener listener)
    : config_(std::move(config)),
      oracle_(oracle),
      listener_(std::move(listener)),
      start_(std::chrono::steady_clock::now()) {
  config_.validate();
  auto& acq = state_.acquisition;
  acq.basis = create_basis(config_.vocabulary, config_.language, config_.seed);
  if (violates_any(acq.basis, config_.seed))
    throw std::logic_error("seed solution violates its own basis");

  emit({{"event", "session_start"},
        {"problem", config_.problem},
        {"variables", config_.vocabulary.names},
        {"epsilon", config_.epsilon},
        {"basis_size", acq.basis.size()},
        {"basis", network_json(acq.basis)}});

  recompute_bounds({});
  record_bounds();
  if (state_.ub - state_.lb <= config_.epsilon)
    finish(Status::optimal, converged() ? Termination::converged : Termination::epsilon_gap);
}

Seconds Session::elapsed() const { return std::chrono::steady_clock::now() - start_; }

Event Session::assignment_json(const Assignment& e) const {
  Event out = Event::object();
  for (VarId v = 0; v < e.size(); ++v) {
    if (e.is_bound(v)) out[config_.vocabulary.names[v]] = e.value(v);
  }
  return out;
}

Event Session::network_json(const ConstraintNetwork& n) const {
  Event out = Event::array();
  for (const auto& c : n) out.push_back(to_string(c, config_.vocabulary));
  return out;
}

void Session::emit(Event event) {
  event["elapsed_ms"] = std::chrono::duration<double, std::milli>(elapsed()).count();
  events_.push_back(std::move(event));
  if (listener_) listener_(events_.back(), state_);
}

Answer Session::ask(const Assignment& e, QueryKind kind) {
  const std::uint64_t id = state_.queries.total() + 1;
  emit({{"event", "query"},
        {"query_id", id},
        {"kind", to_string(kind)},
        {"partial", !e.complete()},
        {"bindings", assignment_json(e)}});
  Answer a = oracle_.ask(e);
  state_.queries[kind] += 1;
  state_.query_log.push_back({kind, e, a});
  Event answer{{"event", "answer"}, {"query_id", id}, {"answer", to_string(a)}};
  if (auto latency = oracle_.last_latency()) answer["latency_s"] = *latency;
  emit(std::move(answer));
  return a;
}

Assignment Session::optimum_of(const ConstraintNetwork& network, const SearchLimits& limits,
                               Value& value) {
  OptResult r = optimize(config_.vocabulary, network, limits);
  if (r.status == SearchStatus::budget) throw BudgetExhausted{};
  if (r.status == SearchStatus::unsat)
    throw std::logic_error("learned and basis became infeasible; the seed should satisfy both");
  value = r.value;
  return r.solution;
}

void Session::recompute_bounds(const SearchLimits& limits) {
  const auto& acq = state_.acquisition;
  Value lb = 0;
  Value ub = 0;
  Assignment lower = optimum_of(acq.learned, limits, lb);
  Assignment upper = optimum_of(acq.learned.united(acq.basis), limits, ub);
  state_.lower_witness = std::move(lower);
  state_.upper_witness = std::move(upper);
  state_.lb = lb;
  state_.ub = ub;
}

QuerySearch find_informative_query(const Vocabulary& voc, const AcquisitionState& state,
                                   const std::optional<Constraint>& after,
                                   const SearchLimits& limits) {
  QuerySearch out;
  if (state.basis.empty()) return out;
  std::vector<Constraint> order(state.basis.begin(), state.basis.end());
  std::size_t start = 0;
  if (after) {
    auto it = std::upper_bound(order.begin(), order.end(), *after);
    start = static_cast<std::size_t>(it - order.begin()) % order.size();
  }
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Constraint& c = order[(start + k) % order.size()];
    SolveResult r = solve_violating(voc, state.learned, c, limits);
    if (r.status == SearchStatus::budget) {
      out.status = QueryStatus::budget;
      return out;
    }
    if (r.status == SearchStatus::solution) {
      out.status = QueryStatus::query;
      out.query = std::move(r.solution);
      out.target = c;
      return out;
    }
  }
  return out;
}

std::optional<Assignment> Session::generate_query() {
  QuerySearch found =
      find_informative_query(config_.vocabulary, state_.acquisition, cursor_, config_.limits);
  if (found.status == QueryStatus::budget) throw BudgetExhausted{};
  if (found.status == QueryStatus::converged) return std::nullopt;
  cursor_ = found.target;
  return std::move(found.query);
}

bool Session::converged() {
  return find_informative_query(config_.vocabulary, state_.acquisition, cursor_, config_.limits)
             .status == QueryStatus::converged;
}

void Session::record_bounds() {
  BoundTracePoint p;
  p.iteration = state_.iteration;
  p.lb = state_.lb;
  p.ub = state_.ub;
  p.lower_witness = state_.lower_witness;
  p.upper_witness = state_.upper_witness;
  p.queries = state_.queries.total();
  p.elapsed = elapsed();
  state_.trace.push_back(p);
  emit({{"event", "bounds"},
        {"iteration", p.iteration},
        {"lb", p.lb},
        {"ub", p.ub},
        {"e_l", assignment_json(p.lower_witness)},
        {"e_u", assignment_json(p.upper_witness)},
        {"queries", p.queries}});
}

void Session::finish(Status status, Termination reason) {
  state_.status = status;
  state_.reason = reason;
  Event counts = Event::object();
  for (QueryKind k : kAllQueryKinds) counts[std::string(to_string(k))] = state_.queries[k];
  counts["total"] = state_.queries.total();
  emit({{"event", "terminated"},
        {"status", to_string(status)},
        {"reason", to_string(reason)},
        {"lb", state_.lb},
        {"ub", state_.ub},
        {"e_l", assignment_json(state_.lower_witness)},
        {"e_u", assignment_json(state_.upper_witness)},
        {"iterations", state_.iteration},
        {"learned", network_json(state_.acquisition.learned)},
        {"basis_size", state_.acquisition.basis.size()},
        {"queries", counts}});
}

void Session::step() {
  if (!running()) return;
  auto& acq = state_.acquisition;
  Learner learner(
      config_.vocabulary, acq, [this](const Assignment& e, QueryKind k) { return ask(e, k); },
      Learner::Listeners{
          [this](const ConstraintNetwork& removed) {
            emit({{"event", "reduced"},
                  {"removed", network_json(removed)},
                  {"basis_size", state_.acquisition.basis.size()}});
          },
          [this](const Learned& l) {
            emit({{"event", "learned"},
                  {"constraint", to_string(l.constraint, config_.vocabulary)},
                  {"dropped", network_json(l.dropped)},
                  {"learned_size", state_.acquisition.learned.size()},
                  {"basis_size", state_.acquisition.basis.size()}});
          }});

  try {
    Assignment e;
    bool negative = true;
    if (pending_negative_) {
      e = std::move(*pending_negative_);
      pending_negative_.reset();
    } else {
      auto query = generate_query();
      if (!query) {
        Value value = 0;
        state_.lower_witness = optimum_of(acq.learned, config_.limits, value);
        state_.upper_witness = state_.lower_witness;
        state_.lb = state_.ub = value;
        record_bounds();
        finish(Status::optimal, Termination::converged);
        return;
      }
      e = std::move(*query);
      negative = ask(e, QueryKind::top_level) == Answer::no;
    }

    if (!negative) {
      ConstraintNetwork removed = reduce(acq, e);
      emit({{"event", "reduced"},
            {"removed", network_json(removed)},
            {"basis_size", acq.basis.size()}});
    } else if (!learner.learn(e)) {
      finish(Status::collapsed, Termination::collapse);
      return;
    }

    recompute_bounds(config_.limits);
    ++state_.iteration;

    Termination reason = Termination::none;
    if (state_.ub - state_.lb <= config_.epsilon) {
      reason = converged() ? Termination::converged : Termination::epsilon_gap;
    } else if (ask(state_.lower_witness, QueryKind::lower_witness) == Answer::yes) {
      // A feasible assignment attaining a valid lower bound is optimal.
      state_.upper_witness = state_.lower_witness;
      state_.ub = state_.lb;
      reason = Termination::lower_witness_feasible;
    } else {
      pending_negative_ = state_.lower_witness;
    }
    record_bounds();
    if (reason != Termination::none) finish(Status::optimal, reason);
  } catch (const OracleUnavailable&) {
    try {
      recompute_bounds(config_.limits);
      record_bounds();
    } catch (const BudgetExhausted&) {
    }
    finish(Status::near_optimal, Termination::oracle_unavailable);
  } catch (const BudgetExhausted&) {
    finish(Status::near_optimal, Termination::node_budget);
  }
}

const SessionState& Session::run() {
  while (running()) {
    if ((config_.cutoff && elapsed() >= *config_.cutoff) || oracle_.expired()) {
      finish(Status::near_optimal, Termination::cutoff);
      break;
    }
    step();
  }
  return state_;
}

SessionState run(const SessionConfig& config, Oracle& oracle, EventListener listener) {
  Session session(config, oracle, std::move(listener));
  return session.run();
}

std::vector<Event> strip_timing(const std::vector<Event>& events) {
  std::vector<Event> out;
  out.reserve(events.size());
  for (Event e : events) {
    e.erase("elapsed_ms");
    e.erase("latency_s");
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace learnopt
