#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "learnopt/engine.hpp"
#include "learnopt/model.hpp"
#include "learnopt/oracle.hpp"

namespace learnopt {

class ProblemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Sense { minimize, maximize };

struct VariableSpec {
  std::string name;
  std::vector<Value> domain;  // sorted, unique

  bool operator==(const VariableSpec&) const = default;
};

struct ObjectiveSpec {
  Sense sense = Sense::minimize;
  std::vector<Value> coefficients;  // per variable, in variable order
  Value constant = 0;

  bool operator==(const ObjectiveSpec&) const = default;
};

struct OracleSpec {
  enum class Kind { hidden_network, interactive, scripted };
  Kind kind = Kind::hidden_network;
  ConstraintNetwork constraints;  // hidden_network only
  std::string log_path;           // scripted only

  bool operator==(const OracleSpec&) const = default;
};

// A problem file. Objectives are stored as written; maximisation is turned
// into minimisation only when a session config is built.
struct ProblemSpec {
  std::string name;
  std::vector<VariableSpec> variables;
  std::vector<Relation> language{std::begin(kAllRelations), std::end(kAllRelations)};
  ObjectiveSpec objective;
  OracleSpec oracle;
  Assignment seed;
  Value epsilon = 0;
  double cutoff_seconds = 60.0;
  std::optional<std::uint64_t> node_budget;

  bool operator==(const ProblemSpec&) const = default;

  Vocabulary vocabulary() const;  // minimisation form
  SessionConfig session_config() const;
};

// Parsing fails with ProblemError naming the offending field; semantic
// validation (seed feasible for the hidden network etc.) runs as well.
ProblemSpec parse_problem(const nlohmann::ordered_json& j);
ProblemSpec load_problem(const std::filesystem::path& path);
nlohmann::ordered_json to_json(const ProblemSpec& spec);
void write_problem(const ProblemSpec& spec, const std::filesystem::path& path);
void validate(const ProblemSpec& spec);

// Simulated oracle for a hidden_network or scripted spec; throws ProblemError
// for interactive specs.
std::unique_ptr<Oracle> make_simulated_oracle(const ProblemSpec& spec);

// JSONL event logs.
std::vector<Event> read_event_log(const std::filesystem::path& path);
std::vector<Event> parse_event_log(std::istream& in);
void write_event_log(const std::vector<Event>& events, std::ostream& out);

// Query/answer pairs recorded in a log, in order.
std::vector<ScriptedExchange> exchanges_from_log(const std::vector<Event>& events,
                                                 const Vocabulary& voc);

struct ReplayReport {
  bool identical = false;
  std::size_t first_difference = 0;  // index into the stripped logs
  std::vector<Event> replayed;
};

// Re-runs the session recorded in `events` (its session_start must carry the
// problem) against a scripted oracle and compares the logs minus timing.
ReplayReport replay(const std::vector<Event>& events);

}  // namespace learnopt
