#pragma once

#include <cstddef>
#include <cstdint>
#include <compare>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace learnopt {

using Value = std::int64_t;
using VarId = std::size_t;

// Binary comparison relations. The enumerator order is the canonical
// relation order used when sorting constraints on the same scope.
enum class Relation : std::uint8_t { lt, le, eq, ne, ge, gt };

inline constexpr Relation kAllRelations[] = {Relation::lt, Relation::le, Relation::eq,
                                             Relation::ne, Relation::ge, Relation::gt};

Relation converse(Relation r);
Relation complement(Relation r);
bool holds(Relation r, Value a, Value b);
std::string_view symbol(Relation r);
std::optional<Relation> parse_relation(std::string_view text);

enum class Truth { satisfied, violated, undetermined };

struct Constraint {
  Relation relation;
  VarId first;
  VarId second;

  // Builds the canonical form (first < second), flipping the relation if the
  // pair is given in reverse. Throws std::invalid_argument on a == b.
  static Constraint make(Relation r, VarId a, VarId b);

  bool operator==(const Constraint&) const = default;
  // Canonical order: scope lexicographic, then relation.
  std::strong_ordering operator<=>(const Constraint& o) const {
    if (auto c = first <=> o.first; c != 0) return c;
    if (auto c = second <=> o.second; c != 0) return c;
    return relation <=> o.relation;
  }
};

class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::size_t n) : values_(n) {}
  Assignment(std::initializer_list<std::optional<Value>> values) : values_(values) {}

  std::size_t size() const { return values_.size(); }
  bool is_bound(VarId v) const { return v < values_.size() && values_[v].has_value(); }
  Value value(VarId v) const { return *values_.at(v); }
  std::optional<Value> get(VarId v) const { return v < values_.size() ? values_[v] : std::nullopt; }

  void bind(VarId v, Value x) { values_.at(v) = x; }
  void unbind(VarId v) { values_.at(v).reset(); }

  bool complete() const;
  std::size_t bound_count() const;
  std::vector<VarId> bound_variables() const;

  // Keeps only the bindings of `vars`; everything else becomes unbound.
  Assignment restricted_to(std::span<const VarId> vars) const;

  bool operator==(const Assignment&) const = default;

 private:
  std::vector<std::optional<Value>> values_;
};

// Sorted, duplicate-free set of constraints. Iteration follows the canonical
// order: scope lexicographic, then relation.
class ConstraintNetwork {
 public:
  using const_iterator = std::set<Constraint>::const_iterator;

  ConstraintNetwork() = default;
  ConstraintNetwork(std::initializer_list<Constraint> cs) : set_(cs) {}
  template <class It>
  ConstraintNetwork(It first, It last) : set_(first, last) {}

  bool contains(const Constraint& c) const { return set_.contains(c); }
  bool insert(const Constraint& c) { return set_.insert(c).second; }
  bool erase(const Constraint& c) { return set_.erase(c) > 0; }
  std::size_t size() const { return set_.size(); }
  bool empty() const { return set_.empty(); }

  const_iterator begin() const { return set_.begin(); }
  const_iterator end() const { return set_.end(); }

  ConstraintNetwork united(const ConstraintNetwork& other) const;
  ConstraintNetwork minus(const ConstraintNetwork& other) const;
  bool includes(const ConstraintNetwork& other) const;

  // Constraints whose scope is exactly {a, b}.
  ConstraintNetwork on_scope(VarId a, VarId b) const;

  bool operator==(const ConstraintNetwork&) const = default;

 private:
  std::set<Constraint> set_;
};

struct LinearObjective {
  std::vector<Value> coefficients;  // one per variable
  Value constant = 0;

  bool operator==(const LinearObjective&) const = default;
};

// The shared vocabulary: variables, their finite integer domains (sorted,
// unique) and the objective to minimize.
struct Vocabulary {
  std::vector<std::string> names;
  std::vector<std::vector<Value>> domains;
  LinearObjective objective;

  std::size_t size() const { return names.size(); }

  // Throws std::invalid_argument when an invariant does not hold.
  void validate() const;
  std::optional<VarId> find(std::string_view name) const;
  bool in_domain(VarId v, Value x) const;

  // Vocabulary over x1..xn, every domain equal to lo..hi, zero objective.
  static Vocabulary uniform(std::size_t n, Value lo, Value hi);
};

Truth evaluate(const Constraint& c, const Assignment& e);
bool accepts(const Constraint& c, const Assignment& e);

// The constraints of `network` violated by `e` (undetermined ones excluded).
ConstraintNetwork kappa(const ConstraintNetwork& network, const Assignment& e);
bool violates_any(const ConstraintNetwork& network, const Assignment& e);

// Throws std::logic_error when `e` is partial.
Value objective_value(const LinearObjective& f, const Assignment& e);

std::string to_string(const Constraint& c, const Vocabulary& voc);
std::string to_string(const Assignment& e, const Vocabulary& voc);

}  // namespace learnopt
