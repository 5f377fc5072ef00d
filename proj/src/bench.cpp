#include "learnopt/bench.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "learnopt/enumerate.hpp"
#include "learnopt/solver.hpp"

namespace learnopt {

ProblemSpec generate_random_instance(std::uint64_t seed, std::size_t n, std::size_t d,
                                     double density, int max_attempts) {
  if (n == 0 || d == 0) throw std::invalid_argument("n and d must be positive");
  if (!(density > 0.0 && density <= 1.0)) throw std::invalid_argument("density must be in (0, 1]");

  std::mt19937_64 rng(seed);
  std::bernoulli_distribution pick_pair(density);
  std::uniform_int_distribution<int> pick_relation(0, 5);
  std::uniform_int_distribution<Value> pick_coefficient(-3, 3);

  Vocabulary voc = Vocabulary::uniform(n, 1, static_cast<Value>(d));
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    ConstraintNetwork target;
    for (VarId i = 0; i < n; ++i) {
      for (VarId j = i + 1; j < n; ++j) {
        if (pick_pair(rng)) target.insert(Constraint{kAllRelations[pick_relation(rng)], i, j});
      }
    }
    SolveResult r = solve(voc, target);
    if (r.status != SearchStatus::solution) continue;

    ProblemSpec spec;
    spec.name = "rand-s" + std::to_string(seed) + "-n" + std::to_string(n) + "-d" +
                std::to_string(d);
    for (VarId v = 0; v < n; ++v) spec.variables.push_back({voc.names[v], voc.domains[v]});
    spec.objective.coefficients.resize(n);
    for (auto& k : spec.objective.coefficients) k = pick_coefficient(rng);
    spec.oracle.kind = OracleSpec::Kind::hidden_network;
    spec.oracle.constraints = target;
    spec.seed = r.solution;
    validate(spec);
    return spec;
  }
  throw std::runtime_error("no satisfiable hidden network after " + std::to_string(max_attempts) +
                           " attempts");
}

std::string csv_header() {
  return "instance,n,domain_size,target_size,queries_top_level,queries_find_scope,"
         "queries_find_c,queries_lower_witness,queries_total,iterations,lb,ub,gap,status,"
         "reason,wall_ms,opt,error";
}

std::string csv_row(const BenchmarkRecord& r) {
  std::ostringstream out;
  out << r.instance << ',' << r.n << ',' << r.domain_size << ',' << r.target_size;
  for (QueryKind k : kAllQueryKinds) out << ',' << r.queries[k];
  out << ',' << r.queries.total() << ',' << r.iterations << ',' << r.lb << ',' << r.ub << ','
      << (r.ub - r.lb) << ',' << r.status << ',' << r.reason << ',' << r.wall_ms << ',';
  if (r.optimum) out << *r.optimum;
  std::string error = r.error;
  for (char& c : error) {
    if (c == ',' || c == '\n') c = ';';
  }
  out << ',' << error;
  return out.str();
}

BenchmarkRecord run_instance(const ProblemSpec& spec, std::vector<Event>* log) {
  BenchmarkRecord rec;
  rec.instance = spec.name;
  rec.n = spec.variables.size();
  for (const auto& v : spec.variables) rec.domain_size = std::max(rec.domain_size, v.domain.size());
  rec.target_size = spec.oracle.constraints.size();
  try {
    auto oracle = make_simulated_oracle(spec);
    Session session(spec.session_config(), *oracle);
    const SessionState& s = session.run();
    rec.queries = s.queries;
    rec.iterations = s.iteration;
    rec.lb = s.lb;
    rec.ub = s.ub;
    rec.status = to_string(s.status);
    rec.reason = to_string(s.reason);
    rec.wall_ms = std::chrono::duration<double, std::milli>(session.elapsed()).count();
    if (log) *log = session.events();
    if (spec.oracle.kind == OracleSpec::Kind::hidden_network) {
      EnumerationResult truth = enumerate_parallel(spec.vocabulary(), spec.oracle.constraints);
      rec.optimum = truth.best_value;
    }
  } catch (const std::exception& e) {
    rec.status = "ERROR";
    rec.error = e.what();
  }
  return rec;
}

std::vector<BenchmarkRecord> run_bench(const std::vector<ProblemSpec>& specs,
                                       const std::filesystem::path& out) {
  std::vector<BenchmarkRecord> records(specs.size());
  std::vector<std::vector<Event>> logs(specs.size());
  const auto count = static_cast<std::int64_t>(specs.size());

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    auto k = static_cast<std::size_t>(i);
    records[k] = run_instance(specs[k], &logs[k]);
    if (records[k].instance.empty()) records[k].instance = "instance-" + std::to_string(k);
  }

  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
  std::ofstream csv(out);
  if (!csv) throw std::runtime_error(out.string() + ": cannot write");
  csv << csv_header() << '\n';
  for (std::size_t k = 0; k < records.size(); ++k) {
    csv << csv_row(records[k]) << '\n';
    if (logs[k].empty()) continue;
    std::ofstream jsonl(out.parent_path() / (records[k].instance + ".jsonl"));
    write_event_log(logs[k], jsonl);
  }
  return records;
}

}  // namespace learnopt
