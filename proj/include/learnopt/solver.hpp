#pragma once

#include <chrono>
#include <cstdint>
#include <optional>

#include "learnopt/model.hpp"

namespace learnopt {

enum class SearchStatus {
  solution,  // a solution (or, for optimize, the optimum) was found
  unsat,     // the network has no solution over the domains
  budget,    // the node budget ran out before the search finished
};

struct SearchLimits {
  std::optional<std::uint64_t> max_nodes;  // unset = unlimited
};

struct SearchStats {
  std::uint64_t nodes = 0;
  std::chrono::nanoseconds wall{0};
};

struct SolveResult {
  SearchStatus status = SearchStatus::unsat;
  Assignment solution;  // complete when status == solution
  SearchStats stats;
};

struct OptResult {
  SearchStatus status = SearchStatus::unsat;
  Assignment solution;  // complete when status == solution
  Value value = 0;
  SearchStats stats;
};

// Depth-first backtracking with forward checking. Variables are picked
// smallest-current-domain first (ties by index), values ascending, so every
// call is deterministic.
SolveResult solve(const Vocabulary& voc, const ConstraintNetwork& network,
                  const SearchLimits& limits = {});

// Branch and bound on the vocabulary's objective.
OptResult optimize(const Vocabulary& voc, const ConstraintNetwork& network,
                   const SearchLimits& limits = {});

// A complete assignment that satisfies `network` and violates `c`. Since the
// complement of a comparison is again a comparison, this is a plain solve on
// network + complement(c).
SolveResult solve_violating(const Vocabulary& voc, const ConstraintNetwork& network,
                            const Constraint& c, const SearchLimits& limits = {});

}  // namespace learnopt
