#include "learnopt/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace learnopt {

Relation converse(Relation r) {
  switch (r) {
    case Relation::lt: return Relation::gt;
    case Relation::le: return Relation::ge;
    case Relation::eq: return Relation::eq;
    case Relation::ne: return Relation::ne;
    case Relation::ge: return Relation::le;
    case Relation::gt: return Relation::lt;
  }
  throw std::logic_error("bad relation");
}

Relation complement(Relation r) {
  switch (r) {
    case Relation::lt: return Relation::ge;
    case Relation::le: return Relation::gt;
    case Relation::eq: return Relation::ne;
    case Relation::ne: return Relation::eq;
    case Relation::ge: return Relation::lt;
    case Relation::gt: return Relation::le;
  }
  throw std::logic_error("bad relation");
}

bool holds(Relation r, Value a, Value b) {
  switch (r) {
    case Relation::lt: return a < b;
    case Relation::le: return a <= b;
    case Relation::eq: return a == b;
    case Relation::ne: return a != b;
    case Relation::ge: return a >= b;
    case Relation::gt: return a > b;
  }
  throw std::logic_error("bad relation");
}

std::string_view symbol(Relation r) {
  switch (r) {
    case Relation::lt: return "<";
    case Relation::le: return "<=";
    case Relation::eq: return "=";
    case Relation::ne: return "!=";
    case Relation::ge: return ">=";
    case Relation::gt: return ">";
  }
  throw std::logic_error("bad relation");
}

std::optional<Relation> parse_relation(std::string_view text) {
  for (Relation r : kAllRelations) {
    if (symbol(r) == text) return r;
  }
  if (text == "==") return Relation::eq;
  if (text == "lt") return Relation::lt;
  if (text == "le") return Relation::le;
  if (text == "eq") return Relation::eq;
  if (text == "ne") return Relation::ne;
  if (text == "ge") return Relation::ge;
  if (text == "gt") return Relation::gt;
  return std::nullopt;
}

Constraint Constraint::make(Relation r, VarId a, VarId b) {
  if (a == b) throw std::invalid_argument("constraint scope must hold two distinct variables");
  if (a < b) return Constraint{r, a, b};
  return Constraint{converse(r), b, a};
}

bool Assignment::complete() const {
  return std::all_of(values_.begin(), values_.end(), [](const auto& v) { return v.has_value(); });
}

std::size_t Assignment::bound_count() const {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](const auto& v) { return v.has_value(); }));
}

std::vector<VarId> Assignment::bound_variables() const {
  std::vector<VarId> out;
  for (VarId v = 0; v < values_.size(); ++v) {
    if (values_[v]) out.push_back(v);
  }
  return out;
}

Assignment Assignment::restricted_to(std::span<const VarId> vars) const {
  Assignment out(values_.size());
  for (VarId v : vars) out.values_.at(v) = values_.at(v);
  return out;
}

ConstraintNetwork ConstraintNetwork::united(const ConstraintNetwork& other) const {
  ConstraintNetwork out = *this;
  out.set_.insert(other.set_.begin(), other.set_.end());
  return out;
}

ConstraintNetwork ConstraintNetwork::minus(const ConstraintNetwork& other) const {
  ConstraintNetwork out;
  std::set_difference(set_.begin(), set_.end(), other.set_.begin(), other.set_.end(),
                      std::inserter(out.set_, out.set_.end()));
  return out;
}

bool ConstraintNetwork::includes(const ConstraintNetwork& other) const {
  return std::includes(set_.begin(), set_.end(), other.set_.begin(), other.set_.end());
}

ConstraintNetwork ConstraintNetwork::on_scope(VarId a, VarId b) const {
  if (a > b) std::swap(a, b);
  ConstraintNetwork out;
  auto it = set_.lower_bound(Constraint{Relation::lt, a, b});
  for (; it != set_.end() && it->first == a && it->second == b; ++it) out.set_.insert(*it);
  return out;
}

void Vocabulary::validate() const {
  if (names.empty()) throw std::invalid_argument("vocabulary needs at least one variable");
  if (domains.size() != names.size())
    throw std::invalid_argument("vocabulary needs one domain per variable");
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (domains[i].empty()) throw std::invalid_argument("empty domain for variable " + names[i]);
    if (!std::is_sorted(domains[i].begin(), domains[i].end()) ||
        std::adjacent_find(domains[i].begin(), domains[i].end()) != domains[i].end())
      throw std::invalid_argument("domain of " + names[i] + " must be sorted and duplicate-free");
    for (std::size_t j = 0; j < i; ++j) {
      if (names[j] == names[i]) throw std::invalid_argument("duplicate variable name " + names[i]);
    }
  }
  if (objective.coefficients.size() != names.size())
    throw std::invalid_argument("objective needs one coefficient per variable");
}

std::optional<VarId> Vocabulary::find(std::string_view name) const {
  for (VarId v = 0; v < names.size(); ++v) {
    if (names[v] == name) return v;
  }
  return std::nullopt;
}

bool Vocabulary::in_domain(VarId v, Value x) const {
  const auto& d = domains.at(v);
  return std::binary_search(d.begin(), d.end(), x);
}

Vocabulary Vocabulary::uniform(std::size_t n, Value lo, Value hi) {
  Vocabulary voc;
  std::vector<Value> dom;
  for (Value x = lo; x <= hi; ++x) dom.push_back(x);
  for (std::size_t i = 0; i < n; ++i) {
    voc.names.push_back("x" + std::to_string(i + 1));
    voc.domains.push_back(dom);
  }
  voc.objective.coefficients.assign(n, 0);
  return voc;
}

Truth evaluate(const Constraint& c, const Assignment& e) {
  auto a = e.get(c.first);
  auto b = e.get(c.second);
  if (!a || !b) return Truth::undetermined;
  return holds(c.relation, *a, *b) ? Truth::satisfied : Truth::violated;
}

bool accepts(const Constraint& c, const Assignment& e) {
  return evaluate(c, e) != Truth::violated;
}

ConstraintNetwork kappa(const ConstraintNetwork& network, const Assignment& e) {
  ConstraintNetwork out;
  for (const auto& c : network) {
    if (evaluate(c, e) == Truth::violated) out.insert(c);
  }
  return out;
}

bool violates_any(const ConstraintNetwork& network, const Assignment& e) {
  return std::any_of(network.begin(), network.end(),
                     [&](const Constraint& c) { return evaluate(c, e) == Truth::violated; });
}

Value objective_value(const LinearObjective& f, const Assignment& e) {
  if (!e.complete() || e.size() != f.coefficients.size())
    throw std::logic_error("objective evaluated on a partial assignment");
  Value total = f.constant;
  for (VarId v = 0; v < e.size(); ++v) total += f.coefficients[v] * e.value(v);
  return total;
}

std::string to_string(const Constraint& c, const Vocabulary& voc) {
  return voc.names.at(c.first) + " " + std::string(symbol(c.relation)) + " " +
         voc.names.at(c.second);
}

std::string to_string(const Assignment& e, const Vocabulary& voc) {
  std::string out = "{";
  bool first = true;
  for (VarId v = 0; v < e.size(); ++v) {
    if (!e.is_bound(v)) continue;
    if (!first) out += ", ";
    first = false;
    out += voc.names.at(v) + ":" + std::to_string(e.value(v));
  }
  return out + "}";
}

}  // namespace learnopt
