#include "learnopt/enumerate.hpp"

#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace learnopt {
namespace {

struct Best {
  std::uint64_t solutions = 0;
  Value value = std::numeric_limits<Value>::max();
  std::uint64_t index = std::numeric_limits<std::uint64_t>::max();

  void offer(Value v, std::uint64_t i) {
    ++solutions;
    if (v < value || (v == value && i < index)) {
      value = v;
      index = i;
    }
  }

  void merge(const Best& other) {
    solutions += other.solutions;
    if (other.value < value || (other.value == value && other.index < index)) {
      value = other.value;
      index = other.index;
    }
  }
};

EnumerationResult finish(const Vocabulary& voc, const Best& best) {
  EnumerationResult out;
  out.solutions = best.solutions;
  if (best.solutions > 0) {
    out.best_value = best.value;
    out.best = assignment_at(voc, best.index);
  }
  return out;
}

}  // namespace

std::uint64_t assignment_count(const Vocabulary& voc) {
  std::uint64_t total = 1;
  for (const auto& d : voc.domains) {
    if (total > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()) / d.size())
      throw std::overflow_error("search space too large to enumerate");
    total *= d.size();
  }
  return total;
}

Assignment assignment_at(const Vocabulary& voc, std::uint64_t index) {
  Assignment e(voc.size());
  for (VarId v = voc.size(); v-- > 0;) {
    const auto& d = voc.domains[v];
    e.bind(v, d[index % d.size()]);
    index /= d.size();
  }
  return e;
}

EnumerationResult enumerate_serial(const Vocabulary& voc, const ConstraintNetwork& network) {
  const std::uint64_t total = assignment_count(voc);
  Best best;
  for (std::uint64_t i = 0; i < total; ++i) {
    Assignment e = assignment_at(voc, i);
    if (violates_any(network, e)) continue;
    best.offer(objective_value(voc.objective, e), i);
  }
  return finish(voc, best);
}

EnumerationResult enumerate_parallel(const Vocabulary& voc, const ConstraintNetwork& network) {
  const auto total = static_cast<std::int64_t>(assignment_count(voc));
  Best best;
#pragma omp parallel
  {
    Best local;
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < total; ++i) {
      Assignment e = assignment_at(voc, static_cast<std::uint64_t>(i));
      if (violates_any(network, e)) continue;
      local.offer(objective_value(voc.objective, e), static_cast<std::uint64_t>(i));
    }
#pragma omp critical(learnopt_enumerate_merge)
    best.merge(local);
  }
  return finish(voc, best);
}

}  // namespace learnopt
