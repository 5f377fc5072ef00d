#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "learnopt/engine.hpp"
#include "learnopt/problem.hpp"

namespace learnopt {

// Random desk-scale instance: n variables over 1..d, each pair constrained
// with probability `density` by a uniformly drawn relation, resampled until
// satisfiable. The seed solution is the solver's first solution of the hidden
// network and the objective draws coefficients from [-3, 3]. Deterministic in
// `seed` for a given standard library.
ProblemSpec generate_random_instance(std::uint64_t seed, std::size_t n, std::size_t d,
                                     double density, int max_attempts = 1000);

struct BenchmarkRecord {
  std::string instance;
  std::size_t n = 0;
  std::size_t domain_size = 0;  // largest domain
  std::size_t target_size = 0;
  QueryCounts queries;
  std::size_t iterations = 0;
  Value lb = 0;
  Value ub = 0;
  std::string status;
  std::string reason;
  double wall_ms = 0;
  std::optional<Value> optimum;  // brute-forced opt(T), hidden networks only
  std::string error;             // non-empty when the instance failed
};

// Fixed CSV header for benchmark output.
std::string csv_header();
std::string csv_row(const BenchmarkRecord& r);

// Runs every spec with its simulated oracle (instances in parallel), brute
// forces opt(T) independently, writes `<out>` as CSV and one
// `<instance>.jsonl` event log per session next to it. Failures are recorded
// per instance and the run continues.
std::vector<BenchmarkRecord> run_bench(const std::vector<ProblemSpec>& specs,
                                       const std::filesystem::path& out);

// Same, without touching the filesystem.
BenchmarkRecord run_instance(const ProblemSpec& spec, std::vector<Event>* log = nullptr);

}  // namespace learnopt
