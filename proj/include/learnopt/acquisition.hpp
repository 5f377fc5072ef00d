#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "learnopt/model.hpp"
#include "learnopt/oracle.hpp"

namespace learnopt {

// Where a membership query comes from.
enum class QueryKind {
  top_level,       // generated query of the main loop
  find_scope,      // sub-query while locating a violated scope
  find_c,          // sub-query while isolating the constraint on a scope
  lower_witness,   // "is the lower-bound optimum feasible?"
};

inline constexpr QueryKind kAllQueryKinds[] = {QueryKind::top_level, QueryKind::find_scope,
                                               QueryKind::find_c, QueryKind::lower_witness};

std::string_view to_string(QueryKind k);

struct QueryRecord {
  QueryKind kind;
  Assignment query;
  Answer answer;
};

using AskFn = std::function<Answer(const Assignment&, QueryKind)>;

struct AcquisitionState {
  ConstraintNetwork basis;
  ConstraintNetwork learned;
};

struct Learned {
  Constraint constraint;
  ConstraintNetwork dropped;  // indistinguishable candidates removed with it
};

// LEARNED(c) or COLLAPSE.
using LearnOutcome = std::optional<Learned>;

// All (r, (x_i, x_j)), i < j, r in `language`, that `seed` satisfies.
// Throws std::invalid_argument when the seed is partial.
ConstraintNetwork create_basis(const Vocabulary& voc, std::span<const Relation> language,
                               const Assignment& seed);

// basis <- basis \ kappa(basis, e) for a positively classified e. Returns the
// removed constraints.
ConstraintNetwork reduce(AcquisitionState& state, const Assignment& e);

// QuAcq-style learner over a binary language. It poses sub-queries through
// `ask`, updates `state` in place, and reports each change to the listeners.
class Learner {
 public:
  struct Listeners {
    std::function<void(const ConstraintNetwork& removed)> on_reduced;
    std::function<void(const Learned&)> on_learned;
  };

  Learner(const Vocabulary& voc, AcquisitionState& state, AskFn ask, Listeners listeners = {});

  // Scope of a target constraint violated by `e`, searched within R u Y by
  // dichotomy. `R` and `Y` must be sorted. An empty result means e|R was
  // classified negative without needing any variable of Y.
  std::vector<VarId> find_scope(const Assignment& e, std::vector<VarId> R,
                                std::vector<VarId> Y, bool ask_flag);

  // Isolates the target constraint on `scope` (a pair) among the basis
  // candidates violated by e.
  LearnOutcome find_c(const Assignment& e, VarId a, VarId b);

  // Learns one constraint from a negative example that satisfies `learned`.
  LearnOutcome learn(const Assignment& e);

 private:
  void reduce_with(const Assignment& e);

  const Vocabulary& voc_;
  AcquisitionState& state_;
  AskFn ask_;
  Listeners listeners_;
};

}  // namespace learnopt
