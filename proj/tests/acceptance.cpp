// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// fails. Ground truth comes from exhaustive enumeration in support/.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "learnopt/engine.hpp"
#include "learnopt/problem.hpp"
#include "learnopt/solver.hpp"
#include "support/brute_force.hpp"
#include "support/instances.hpp"

namespace {

using namespace learnopt;
using Clock = std::chrono::steady_clock;

constexpr int kInstances = 50;
constexpr double kRecoveryBudgetS = 60.0;
constexpr int kSolverNetworks = 100;
constexpr double kSolverBudgetS = 10.0;
constexpr std::uint64_t kSeed = 20241015;

ProblemSpec spec_of(const fixtures::RandomInstance& inst, const std::string& name) {
  const auto& voc = inst.config.vocabulary;
  ProblemSpec spec;
  spec.name = name;
  for (VarId v = 0; v < voc.size(); ++v) spec.variables.push_back({voc.names[v], voc.domains[v]});
  spec.objective.coefficients = voc.objective.coefficients;
  spec.objective.constant = voc.objective.constant;
  spec.oracle.constraints = inst.target;
  spec.seed = inst.config.seed;
  spec.epsilon = inst.config.epsilon;
  spec.cutoff_seconds = 60;
  return spec;
}

struct Run {
  fixtures::RandomInstance inst;
  SessionState final;
  std::vector<Event> events;
  int bound_violations = 0;    // sandwich or monotonicity
  int witness_violations = 0;  // e_u outside sol(T)
  int query_violations = 0;    // uninformative top-level query
  std::size_t bound_checks = 0;
  std::size_t top_level = 0;
};

Run execute(const fixtures::RandomInstance& inst, const std::string& name) {
  Run r;
  r.inst = inst;
  ProblemSpec spec = spec_of(inst, name);
  const Vocabulary voc = spec.vocabulary();
  const Value seed_cost = bf::cost(voc, bf::values_of(spec.seed));
  std::optional<Value> prev_lb, prev_ub;
  auto listener = [&](const Event& e, const SessionState& st) {
    if (e["event"] == "query" && e["kind"] == "top_level") {
      Assignment q(voc.size());
      for (VarId v = 0; v < voc.size(); ++v) q.bind(v, e["bindings"][voc.names[v]].get<Value>());
      ++r.top_level;
      r.query_violations += violates_any(st.acquisition.learned, q) || !violates_any(st.acquisition.basis, q);
    }
    if (e["event"] != "bounds") return;
    ++r.bound_checks;
    bool ok = st.lb <= inst.opt && inst.opt <= st.ub && st.ub <= seed_cost;
    ok = ok && (!prev_lb || st.lb >= *prev_lb) && (!prev_ub || st.ub <= *prev_ub);
    r.bound_violations += !ok;
    r.witness_violations += !bf::satisfies(inst.target, bf::values_of(st.upper_witness));
    prev_lb = st.lb;
    prev_ub = st.ub;
  };
  auto oracle = make_simulated_oracle(spec);
  Session session(spec.session_config(), *oracle, listener);
  r.final = session.run();
  r.events = session.events();
  return r;
}

std::vector<fixtures::RandomInstance> family(std::uint64_t seed, Value epsilon) {
  std::mt19937_64 rng(seed);
  std::vector<fixtures::RandomInstance> out;
  for (int k = 0; k < kInstances; ++k) {
    std::size_t n = 3 + rng() % 4;
    std::size_t d = 3 + rng() % 3;
    auto inst = fixtures::random_instance(rng, n, d);
    inst.config.epsilon = epsilon;
    out.push_back(std::move(inst));
  }
  return out;
}

int failures = 0;

void report(bool pass, const char* name, const std::string& detail) {
  std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  failures += !pass;
}

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

}  // namespace

int main() {
  // Exact-optimum recovery, eps = 0.
  auto t0 = Clock::now();
  std::vector<Run> exact;
  int recovered = 0;
  for (const auto& inst : family(kSeed, 0)) {
    exact.push_back(execute(inst, "exact-" + std::to_string(exact.size())));
    const auto& s = exact.back().final;
    recovered += s.status == Status::optimal && s.lb == inst.opt && s.ub == inst.opt;
  }
  double exact_s = seconds_since(t0);
  report(recovered == kInstances && exact_s < kRecoveryBudgetS, "exact_optimum_recovery",
         std::to_string(recovered) + "/" + std::to_string(kInstances) +
             " OPTIMAL with lb = ub = opt(T); " + std::to_string(exact_s) + " s (limit 60 s)");

  // Epsilon runs on the same family.
  std::vector<Run> approx;
  int eps_violations = 0;
  for (Value eps : {1, 2}) {
    for (const auto& inst : family(kSeed, eps)) {
      approx.push_back(execute(inst, "eps" + std::to_string(eps) + "-" + std::to_string(approx.size())));
      const auto& s = approx.back().final;
      const Value fu = bf::cost(inst.config.vocabulary, bf::values_of(s.upper_witness));
      bool ok = s.status == Status::optimal && s.ub - s.lb <= eps && fu <= inst.opt + eps;
      eps_violations += !ok;
    }
  }

  std::vector<const Run*> all;
  for (const auto& r : exact) all.push_back(&r);
  for (const auto& r : approx) all.push_back(&r);
  int bound_v = 0, witness_v = 0, query_v = 0;
  std::size_t bound_n = 0, query_n = 0;
  for (const Run* r : all) {
    bound_v += r->bound_violations;
    witness_v += r->witness_violations;
    query_v += r->query_violations;
    bound_n += r->bound_checks;
    query_n += r->top_level;
  }
  report(bound_v == 0, "bound_sandwich_monotone",
         std::to_string(bound_v) + " violations over " + std::to_string(bound_n) + " iterations in " +
             std::to_string(all.size()) + " runs");
  report(witness_v == 0, "upper_witness_feasible",
         std::to_string(witness_v) + " violations over " + std::to_string(bound_n) + " iterations");
  report(eps_violations == 0, "epsilon_guarantee",
         std::to_string(eps_violations) + " violations over " + std::to_string(approx.size()) +
             " runs with eps in {1,2}");
  report(query_v == 0, "informative_queries",
         std::to_string(query_v) + " violations over " + std::to_string(query_n) + " top-level queries");

  // Solver agrees with enumeration.
  {
    auto t = Clock::now();
    std::mt19937_64 rng(kSeed + 1);
    int agree = 0;
    for (int k = 0; k < kSolverNetworks; ++k) {
      std::size_t n = 2 + rng() % 4;
      std::size_t d = 2 + rng() % 3;
      auto voc = bf::random_vocabulary(rng, n, d);
      auto net = bf::random_network(rng, n, 0.5);
      auto truth = bf::optimum(voc, net);
      OptResult r = optimize(voc, net);
      bool ok = truth ? (r.status == SearchStatus::solution && r.value == *truth &&
                         bf::satisfies(net, bf::values_of(r.solution)) &&
                         bf::cost(voc, bf::values_of(r.solution)) == *truth)
                      : r.status == SearchStatus::unsat;
      agree += ok;
    }
    double s = seconds_since(t);
    report(agree == kSolverNetworks && s < kSolverBudgetS, "solver_matches_enumeration",
           std::to_string(agree) + "/" + std::to_string(kSolverNetworks) + " agree; " +
               std::to_string(s) + " s (limit 10 s)");
  }

  // Replay every logged session.
  {
    int identical = 0;
    for (const Run* r : all) identical += replay(r->events).identical;
    report(identical == static_cast<int>(all.size()), "replay_determinism",
           std::to_string(identical) + "/" + std::to_string(all.size()) + " replays identical");
  }

  // Two variables over 1..3, seed (1,2), T = {x1 < x2}, f = x1 + x2. One
  // negative example teaches x1 < x2, which entails what is left of the basis.
  {
    fixtures::RandomInstance inst;
    inst.config.vocabulary = Vocabulary::uniform(2, 1, 3);
    inst.config.vocabulary.objective.coefficients = {1, 1};
    inst.config.seed = {1, 2};
    inst.target = {{Relation::lt, 0, 1}};
    inst.opt = 3;
    Run r = execute(inst, "converged");
    const auto& s = r.final;
    bool ok = s.status == Status::optimal && s.reason == Termination::converged && s.lb == 3 &&
              s.ub == 3 && s.queries[QueryKind::top_level] == 1 &&
              s.queries[QueryKind::lower_witness] == 0;
    report(ok, "convergence_without_query",
           std::string(to_string(s.status)) + "/" + std::string(to_string(s.reason)) +
               " lb=" + std::to_string(s.lb) + " ub=" + std::to_string(s.ub) +
               " top-level queries=" + std::to_string(s.queries[QueryKind::top_level]));
  }

  return failures == 0 ? 0 : 1;
}
