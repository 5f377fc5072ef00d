#pragma once

#include <cstdint>
#include <optional>

#include "learnopt/model.hpp"

namespace learnopt {

// Exhaustive scan of D^X. Used as the ground-truth optimum in benchmarks;
// only viable at desk scale.
struct EnumerationResult {
  std::uint64_t solutions = 0;
  std::optional<Value> best_value;
  Assignment best;  // lowest-index minimiser (last variable varies fastest)

  bool operator==(const EnumerationResult&) const = default;
};

// Number of complete assignments; throws std::overflow_error past 2^63.
std::uint64_t assignment_count(const Vocabulary& voc);

// Decodes a mixed-radix index into a complete assignment.
Assignment assignment_at(const Vocabulary& voc, std::uint64_t index);

// Serial reference kernel.
EnumerationResult enumerate_serial(const Vocabulary& voc, const ConstraintNetwork& network);

// OpenMP kernel; returns exactly what enumerate_serial returns.
EnumerationResult enumerate_parallel(const Vocabulary& voc, const ConstraintNetwork& network);

}  // namespace learnopt
