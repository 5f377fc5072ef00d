#include "learnopt/acquisition.hpp"

#include <algorithm>
#include <stdexcept>

namespace learnopt {

std::string_view to_string(QueryKind k) {
  switch (k) {
    case QueryKind::top_level: return "top_level";
    case QueryKind::find_scope: return "find_scope";
    case QueryKind::find_c: return "find_c";
    case QueryKind::lower_witness: return "lower_witness";
  }
  return "?";
}

ConstraintNetwork create_basis(const Vocabulary& voc, std::span<const Relation> language,
                               const Assignment& seed) {
  if (!seed.complete() || seed.size() != voc.size())
    throw std::invalid_argument("seed solution must bind every variable");
  ConstraintNetwork basis;
  for (VarId i = 0; i < voc.size(); ++i) {
    for (VarId j = i + 1; j < voc.size(); ++j) {
      for (Relation r : language) {
        if (holds(r, seed.value(i), seed.value(j))) basis.insert(Constraint{r, i, j});
      }
    }
  }
  return basis;
}

ConstraintNetwork reduce(AcquisitionState& state, const Assignment& e) {
  ConstraintNetwork removed = kappa(state.basis, e);
  state.basis = state.basis.minus(removed);
  return removed;
}

Learner::Learner(const Vocabulary& voc, AcquisitionState& state, AskFn ask, Listeners listeners)
    : voc_(voc), state_(state), ask_(std::move(ask)), listeners_(std::move(listeners)) {}

void Learner::reduce_with(const Assignment& e) {
  ConstraintNetwork removed = reduce(state_, e);
  if (!removed.empty() && listeners_.on_reduced) listeners_.on_reduced(removed);
}

std::vector<VarId> Learner::find_scope(const Assignment& e, std::vector<VarId> R,
                                       std::vector<VarId> Y, bool ask_flag) {
  if (ask_flag) {
    Assignment restricted = e.restricted_to(R);
    if (violates_any(state_.basis, restricted)) {
      if (ask_(restricted, QueryKind::find_scope) == Answer::yes) {
        reduce_with(restricted);
      } else {
        return {};
      }
    }
  }
  if (Y.size() <= 1) return Y;

  auto middle = Y.begin() + static_cast<std::ptrdiff_t>(Y.size() / 2);
  std::vector<VarId> y1(Y.begin(), middle);
  std::vector<VarId> y2(middle, Y.end());

  std::vector<VarId> r_y1;
  std::set_union(R.begin(), R.end(), y1.begin(), y1.end(), std::back_inserter(r_y1));
  std::vector<VarId> s1 = find_scope(e, std::move(r_y1), y2, true);

  std::vector<VarId> r_s1;
  std::set_union(R.begin(), R.end(), s1.begin(), s1.end(), std::back_inserter(r_s1));
  std::vector<VarId> s2 = find_scope(e, std::move(r_s1), y1, !s1.empty());

  std::vector<VarId> scope;
  std::set_union(s1.begin(), s1.end(), s2.begin(), s2.end(), std::back_inserter(scope));
  return scope;
}

LearnOutcome Learner::find_c(const Assignment& e, VarId a, VarId b) {
  if (a > b) std::swap(a, b);
  ConstraintNetwork candidates = kappa(state_.basis.on_scope(a, b), e);
  const ConstraintNetwork known = state_.learned.on_scope(a, b);

  while (!candidates.empty()) {
    // First pair on the scope, in ascending order, that satisfies what is
    // already learned there and violates some but not all candidates.
    std::optional<Assignment> probe;
    for (Value x : voc_.domains[a]) {
      for (Value y : voc_.domains[b]) {
        Assignment p(voc_.size());
        p.bind(a, x);
        p.bind(b, y);
        if (violates_any(known, p)) continue;
        std::size_t hit = kappa(candidates, p).size();
        if (hit > 0 && hit < candidates.size()) {
          probe = std::move(p);
          break;
        }
      }
      if (probe) break;
    }

    if (!probe) {
      Learned out{*candidates.begin(), candidates};
      out.dropped.erase(out.constraint);
      state_.basis = state_.basis.minus(candidates);
      state_.learned.insert(out.constraint);
      if (listeners_.on_learned) listeners_.on_learned(out);
      return out;
    }

    ConstraintNetwork hit = kappa(candidates, *probe);
    if (ask_(*probe, QueryKind::find_c) == Answer::yes) {
      reduce_with(*probe);
      candidates = candidates.minus(hit);
    } else {
      candidates = hit;
    }
  }
  return std::nullopt;
}

LearnOutcome Learner::learn(const Assignment& e) {
  std::vector<VarId> scope = find_scope(e, {}, e.bound_variables(), false);
  if (scope.size() != 2) return std::nullopt;
  return find_c(e, scope[0], scope[1]);
}

}  // namespace learnopt
