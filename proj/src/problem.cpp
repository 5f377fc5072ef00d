#include "learnopt/problem.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace learnopt {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ProblemError(field + ": " + what);
}

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(where + key, "missing");
  return j.at(key);
}

Value as_value(const json& j, const std::string& field) {
  if (!j.is_number_integer()) fail(field, "expected an integer");
  return j.get<Value>();
}

std::vector<Value> parse_domain(const json& j, const std::string& field) {
  std::vector<Value> out;
  if (j.is_object()) {
    Value lo = as_value(require(j, "min", field + "."), field + ".min");
    Value hi = as_value(require(j, "max", field + "."), field + ".max");
    if (lo > hi) fail(field, "min exceeds max");
    if (hi - lo > 1'000'000) fail(field, "range too large");
    for (Value x = lo; x <= hi; ++x) out.push_back(x);
  } else if (j.is_array()) {
    for (std::size_t k = 0; k < j.size(); ++k)
      out.push_back(as_value(j[k], field + "[" + std::to_string(k) + "]"));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  } else {
    fail(field, "expected {min,max} or a list of integers");
  }
  if (out.empty()) fail(field, "empty domain");
  return out;
}

json domain_json(const std::vector<Value>& d) {
  bool contiguous = d.size() > 1;
  for (std::size_t k = 1; k < d.size(); ++k) contiguous = contiguous && d[k] == d[k - 1] + 1;
  if (contiguous) return json{{"min", d.front()}, {"max", d.back()}};
  return json(d);
}

VarId resolve(const std::vector<VariableSpec>& vars, const json& j, const std::string& field) {
  if (!j.is_string()) fail(field, "expected a variable name");
  auto name = j.get<std::string>();
  for (VarId v = 0; v < vars.size(); ++v) {
    if (vars[v].name == name) return v;
  }
  fail(field, "unknown variable '" + name + "'");
}

Relation relation_of(const json& j, const std::string& field) {
  if (!j.is_string()) fail(field, "expected a relation symbol");
  auto r = parse_relation(j.get<std::string>());
  if (!r) fail(field, "unknown relation '" + j.get<std::string>() + "'");
  return *r;
}

std::string sense_name(Sense s) { return s == Sense::minimize ? "minimize" : "maximize"; }

std::string oracle_kind_name(OracleSpec::Kind k) {
  switch (k) {
    case OracleSpec::Kind::hidden_network: return "hidden_network";
    case OracleSpec::Kind::interactive: return "interactive";
    case OracleSpec::Kind::scripted: return "scripted";
  }
  return "?";
}

}  // namespace

Vocabulary ProblemSpec::vocabulary() const {
  Vocabulary voc;
  for (const auto& v : variables) {
    voc.names.push_back(v.name);
    voc.domains.push_back(v.domain);
  }
  voc.objective.coefficients = objective.coefficients;
  voc.objective.constant = objective.constant;
  if (objective.sense == Sense::maximize) {
    for (auto& k : voc.objective.coefficients) k = -k;
    voc.objective.constant = -voc.objective.constant;
  }
  return voc;
}

SessionConfig ProblemSpec::session_config() const {
  SessionConfig config;
  config.vocabulary = vocabulary();
  config.language = language;
  config.seed = seed;
  config.epsilon = epsilon;
  config.cutoff = Seconds(cutoff_seconds);
  config.limits.max_nodes = node_budget;
  config.problem = to_json(*this);
  return config;
}

void validate(const ProblemSpec& spec) {
  if (spec.variables.empty()) fail("variables", "at least one variable is required");
  for (std::size_t i = 0; i < spec.variables.size(); ++i) {
    const auto& v = spec.variables[i];
    std::string field = "variables[" + std::to_string(i) + "]";
    if (v.name.empty()) fail(field + ".name", "empty name");
    if (v.domain.empty()) fail(field + ".domain", "empty domain");
    for (std::size_t j = 0; j < i; ++j) {
      if (spec.variables[j].name == v.name) fail(field + ".name", "duplicate name '" + v.name + "'");
    }
  }
  if (spec.language.empty()) fail("language", "at least one relation is required");
  if (spec.objective.coefficients.size() != spec.variables.size())
    fail("objective.coefficients", "one coefficient per variable expected");
  if (spec.seed.size() != spec.variables.size() || !spec.seed.complete())
    fail("seed_solution", "must bind every variable");
  for (VarId v = 0; v < spec.variables.size(); ++v) {
    const auto& d = spec.variables[v].domain;
    if (!std::binary_search(d.begin(), d.end(), spec.seed.value(v)))
      fail("seed_solution." + spec.variables[v].name, "value outside the domain");
  }
  if (spec.epsilon < 0) fail("epsilon", "must be non-negative");
  if (spec.cutoff_seconds < 0) fail("cutoff_seconds", "must be non-negative");
  if (spec.oracle.kind == OracleSpec::Kind::hidden_network) {
    std::size_t k = 0;
    for (const auto& c : spec.oracle.constraints) {
      std::string field = "oracle.constraints[" + std::to_string(k++) + "]";
      if (std::find(spec.language.begin(), spec.language.end(), c.relation) == spec.language.end())
        fail(field, "relation outside the language");
      if (c.second >= spec.variables.size()) fail(field, "unknown variable");
      if (evaluate(c, spec.seed) != Truth::satisfied)
        fail(field, "seed_solution violates the hidden constraint");
    }
  }
  if (spec.oracle.kind == OracleSpec::Kind::scripted && spec.oracle.log_path.empty())
    fail("oracle.log", "scripted oracle needs a log path");
}

ProblemSpec parse_problem(const json& j) {
  if (!j.is_object()) fail("problem", "expected a JSON object");
  ProblemSpec spec;
  if (j.contains("name")) spec.name = j.at("name").get<std::string>();

  const json& vars = require(j, "variables", "");
  if (!vars.is_array()) fail("variables", "expected a list");
  for (std::size_t k = 0; k < vars.size(); ++k) {
    std::string field = "variables[" + std::to_string(k) + "]";
    const json& name = require(vars[k], "name", field + ".");
    if (!name.is_string()) fail(field + ".name", "expected a string");
    spec.variables.push_back(
        {name.get<std::string>(), parse_domain(require(vars[k], "domain", field + "."), field + ".domain")});
  }

  if (j.contains("language")) {
    const json& lang = j.at("language");
    if (!lang.is_array()) fail("language", "expected a list of relation symbols");
    spec.language.clear();
    for (std::size_t k = 0; k < lang.size(); ++k) {
      Relation r = relation_of(lang[k], "language[" + std::to_string(k) + "]");
      if (std::find(spec.language.begin(), spec.language.end(), r) == spec.language.end())
        spec.language.push_back(r);
    }
  }

  spec.objective.coefficients.assign(spec.variables.size(), 0);
  const json& obj = require(j, "objective", "");
  if (obj.contains("sense")) {
    auto s = obj.at("sense").get<std::string>();
    if (s == "minimize") spec.objective.sense = Sense::minimize;
    else if (s == "maximize") spec.objective.sense = Sense::maximize;
    else fail("objective.sense", "expected 'minimize' or 'maximize'");
  }
  if (obj.contains("coefficients")) {
    const json& coef = obj.at("coefficients");
    if (!coef.is_object()) fail("objective.coefficients", "expected an object keyed by variable");
    for (const auto& [name, k] : coef.items()) {
      std::string field = "objective.coefficients." + name;
      VarId v = resolve(spec.variables, json(name), field);
      spec.objective.coefficients[v] = as_value(k, field);
    }
  }
  if (obj.contains("constant")) spec.objective.constant = as_value(obj.at("constant"), "objective.constant");

  const json& oracle = require(j, "oracle", "");
  auto type = require(oracle, "type", "oracle.").get<std::string>();
  if (type == "hidden_network") {
    spec.oracle.kind = OracleSpec::Kind::hidden_network;
    const json& cs = require(oracle, "constraints", "oracle.");
    if (!cs.is_array()) fail("oracle.constraints", "expected a list");
    for (std::size_t k = 0; k < cs.size(); ++k) {
      std::string field = "oracle.constraints[" + std::to_string(k) + "]";
      const json& scope = require(cs[k], "scope", field + ".");
      if (!scope.is_array() || scope.size() != 2) fail(field + ".scope", "expected two variables");
      VarId a = resolve(spec.variables, scope[0], field + ".scope[0]");
      VarId b = resolve(spec.variables, scope[1], field + ".scope[1]");
      if (a == b) fail(field + ".scope", "variables must differ");
      Relation r = relation_of(require(cs[k], "relation", field + "."), field + ".relation");
      spec.oracle.constraints.insert(Constraint::make(r, a, b));
    }
  } else if (type == "interactive") {
    spec.oracle.kind = OracleSpec::Kind::interactive;
  } else if (type == "scripted") {
    spec.oracle.kind = OracleSpec::Kind::scripted;
    spec.oracle.log_path = require(oracle, "log", "oracle.").get<std::string>();
  } else {
    fail("oracle.type", "unknown oracle type '" + type + "'");
  }

  const json& seed = require(j, "seed_solution", "");
  if (!seed.is_object()) fail("seed_solution", "expected an object keyed by variable");
  spec.seed = Assignment(spec.variables.size());
  for (const auto& [name, x] : seed.items()) {
    std::string field = "seed_solution." + name;
    spec.seed.bind(resolve(spec.variables, json(name), field), as_value(x, field));
  }

  if (j.contains("epsilon")) spec.epsilon = as_value(j.at("epsilon"), "epsilon");
  if (j.contains("cutoff_seconds")) {
    if (!j.at("cutoff_seconds").is_number()) fail("cutoff_seconds", "expected a number");
    spec.cutoff_seconds = j.at("cutoff_seconds").get<double>();
  }
  if (j.contains("node_budget")) {
    if (!j.at("node_budget").is_number_unsigned()) fail("node_budget", "expected a positive integer");
    spec.node_budget = j.at("node_budget").get<std::uint64_t>();
  }

  validate(spec);
  return spec;
}

ProblemSpec load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ProblemError(path.string() + ": cannot open");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ProblemError(path.string() + ": " + e.what());
  }
  return parse_problem(j);
}

json to_json(const ProblemSpec& spec) {
  json j;
  if (!spec.name.empty()) j["name"] = spec.name;
  j["variables"] = json::array();
  for (const auto& v : spec.variables)
    j["variables"].push_back({{"name", v.name}, {"domain", domain_json(v.domain)}});
  j["language"] = json::array();
  for (Relation r : spec.language) j["language"].push_back(std::string(symbol(r)));

  json coef = json::object();
  for (VarId v = 0; v < spec.variables.size(); ++v)
    coef[spec.variables[v].name] = spec.objective.coefficients.at(v);
  j["objective"] = {{"sense", sense_name(spec.objective.sense)},
                    {"coefficients", coef},
                    {"constant", spec.objective.constant}};

  json oracle{{"type", oracle_kind_name(spec.oracle.kind)}};
  if (spec.oracle.kind == OracleSpec::Kind::hidden_network) {
    oracle["constraints"] = json::array();
    for (const auto& c : spec.oracle.constraints) {
      oracle["constraints"].push_back(
          {{"scope", {spec.variables[c.first].name, spec.variables[c.second].name}},
           {"relation", std::string(symbol(c.relation))}});
    }
  } else if (spec.oracle.kind == OracleSpec::Kind::scripted) {
    oracle["log"] = spec.oracle.log_path;
  }
  j["oracle"] = oracle;

  json seed = json::object();
  for (VarId v = 0; v < spec.variables.size(); ++v) {
    if (spec.seed.is_bound(v)) seed[spec.variables[v].name] = spec.seed.value(v);
  }
  j["seed_solution"] = seed;
  j["epsilon"] = spec.epsilon;
  j["cutoff_seconds"] = spec.cutoff_seconds;
  if (spec.node_budget) j["node_budget"] = *spec.node_budget;
  return j;
}

void write_problem(const ProblemSpec& spec, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ProblemError(path.string() + ": cannot write");
  out << to_json(spec).dump(2) << '\n';
}

std::unique_ptr<Oracle> make_simulated_oracle(const ProblemSpec& spec) {
  switch (spec.oracle.kind) {
    case OracleSpec::Kind::hidden_network:
      return std::make_unique<HiddenNetworkOracle>(spec.oracle.constraints);
    case OracleSpec::Kind::scripted:
      return std::make_unique<ScriptedOracle>(
          exchanges_from_log(read_event_log(spec.oracle.log_path), spec.vocabulary()));
    case OracleSpec::Kind::interactive:
      break;
  }
  throw ProblemError("oracle.type: interactive problems need a human oracle");
}

std::vector<Event> parse_event_log(std::istream& in) {
  std::vector<Event> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(Event::parse(line));
    } catch (const json::parse_error& e) {
      throw ProblemError("log line " + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Event> read_event_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ProblemError(path.string() + ": cannot open");
  return parse_event_log(in);
}

void write_event_log(const std::vector<Event>& events, std::ostream& out) {
  for (const auto& e : events) out << e.dump() << '\n';
}

std::vector<ScriptedExchange> exchanges_from_log(const std::vector<Event>& events,
                                                 const Vocabulary& voc) {
  std::vector<ScriptedExchange> out;
  std::optional<Assignment> open;
  for (const auto& e : events) {
    const auto kind = e.value("event", "");
    if (kind == "query") {
      Assignment q(voc.size());
      for (const auto& [name, x] : e.at("bindings").items()) {
        auto v = voc.find(name);
        if (!v) throw ProblemError("log query binds unknown variable '" + name + "'");
        q.bind(*v, x.get<Value>());
      }
      open = std::move(q);
    } else if (kind == "answer") {
      if (!open) throw ProblemError("log answer without a preceding query");
      out.push_back({std::move(*open), e.at("answer") == "yes" ? Answer::yes : Answer::no});
      open.reset();
    }
  }
  return out;
}

ReplayReport replay(const std::vector<Event>& events) {
  if (events.empty() || events.front().value("event", "") != "session_start")
    throw ProblemError("log does not start with session_start");
  const Event& problem = events.front().at("problem");
  ProblemSpec spec = parse_problem(problem);

  SessionConfig config = spec.session_config();
  config.problem = problem;
  config.cutoff.reset();
  ScriptedOracle oracle(exchanges_from_log(events, config.vocabulary));

  Session session(std::move(config), oracle);
  session.run();

  ReplayReport report;
  report.replayed = session.events();
  auto a = strip_timing(events);
  auto b = strip_timing(report.replayed);
  std::size_t k = 0;
  while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
  report.first_difference = k;
  report.identical = a.size() == b.size() && k == a.size();
  return report;
}

}  // namespace learnopt
