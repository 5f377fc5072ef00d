#include "learnopt/solver.hpp"

#include <algorithm>
#include <limits>

namespace learnopt {
namespace {

struct Arc {
  VarId other;
  Relation relation;  // oriented as (this variable, other)
};

class Search {
 public:
  Search(const Vocabulary& voc, const ConstraintNetwork& network, const SearchLimits& limits,
         bool optimizing)
      : voc_(voc), limits_(limits), optimizing_(optimizing), arcs_(voc.size()) {
    for (const auto& c : network) {
      arcs_[c.first].push_back({c.second, c.relation});
      arcs_[c.second].push_back({c.first, converse(c.relation)});
    }
  }

  // Returns false when the budget ran out.
  bool run() {
    auto domains = voc_.domains;
    Assignment partial(voc_.size());
    return descend(domains, partial, 0);
  }

  bool found() const { return best_.has_value(); }
  const Assignment& best() const { return *best_; }
  Value best_value() const { return best_value_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  using Domains = std::vector<std::vector<Value>>;

  Value bound(const Domains& domains) const {
    const auto& f = voc_.objective;
    Value lb = f.constant;
    for (VarId v = 0; v < domains.size(); ++v) {
      Value k = f.coefficients[v];
      if (k > 0) lb += k * domains[v].front();
      else if (k < 0) lb += k * domains[v].back();
    }
    return lb;
  }

  std::optional<VarId> pick(const Domains& domains, const Assignment& partial) const {
    std::optional<VarId> choice;
    for (VarId v = 0; v < domains.size(); ++v) {
      if (partial.is_bound(v)) continue;
      if (!choice || domains[v].size() < domains[*choice].size()) choice = v;
    }
    return choice;
  }

  // Filters the domains of unbound neighbours of `var`; false on a wipe-out.
  bool forward_check(Domains& domains, const Assignment& partial, VarId var, Value x) const {
    for (const Arc& arc : arcs_[var]) {
      if (partial.is_bound(arc.other)) {
        if (!holds(arc.relation, x, partial.value(arc.other))) return false;
        continue;
      }
      auto& d = domains[arc.other];
      std::erase_if(d, [&](Value y) { return !holds(arc.relation, x, y); });
      if (d.empty()) return false;
    }
    return true;
  }

  bool descend(const Domains& domains, Assignment& partial, std::size_t depth) {
    if (done_) return true;
    if (limits_.max_nodes && nodes_ >= *limits_.max_nodes) return false;
    ++nodes_;
    if (optimizing_ && best_ && bound(domains) >= best_value_) return true;

    auto var = pick(domains, partial);
    if (!var) {
      Value value = objective_value(voc_.objective, partial);
      if (!best_ || value < best_value_) {
        best_ = partial;
        best_value_ = value;
      }
      if (!optimizing_) done_ = true;
      return true;
    }

    for (Value x : domains[*var]) {
      Domains next = domains;
      next[*var] = {x};
      partial.bind(*var, x);
      if (forward_check(next, partial, *var, x)) {
        if (!descend(next, partial, depth + 1)) {
          partial.unbind(*var);
          return false;
        }
      }
      partial.unbind(*var);
      if (done_) return true;
    }
    return true;
  }

  const Vocabulary& voc_;
  const SearchLimits& limits_;
  bool optimizing_;
  std::vector<std::vector<Arc>> arcs_;
  std::optional<Assignment> best_;
  Value best_value_ = std::numeric_limits<Value>::max();
  std::uint64_t nodes_ = 0;
  bool done_ = false;
};

}  // namespace

SolveResult solve(const Vocabulary& voc, const ConstraintNetwork& network,
                  const SearchLimits& limits) {
  auto start = std::chrono::steady_clock::now();
  Search search(voc, network, limits, false);
  bool finished = search.run();
  SolveResult out;
  if (search.found()) {
    out.status = SearchStatus::solution;
    out.solution = search.best();
  } else {
    out.status = finished ? SearchStatus::unsat : SearchStatus::budget;
  }
  out.stats.nodes = search.nodes();
  out.stats.wall = std::chrono::steady_clock::now() - start;
  return out;
}

OptResult optimize(const Vocabulary& voc, const ConstraintNetwork& network,
                   const SearchLimits& limits) {
  auto start = std::chrono::steady_clock::now();
  Search search(voc, network, limits, true);
  bool finished = search.run();
  OptResult out;
  if (!finished) {
    out.status = SearchStatus::budget;
  } else if (search.found()) {
    out.status = SearchStatus::solution;
    out.solution = search.best();
    out.value = search.best_value();
  }
  out.stats.nodes = search.nodes();
  out.stats.wall = std::chrono::steady_clock::now() - start;
  return out;
}

SolveResult solve_violating(const Vocabulary& voc, const ConstraintNetwork& network,
                            const Constraint& c, const SearchLimits& limits) {
  ConstraintNetwork extended = network;
  extended.insert(Constraint{complement(c.relation), c.first, c.second});
  return solve(voc, extended, limits);
}

}  // namespace learnopt
