// learnopt: command-line front end.
//
//   learnopt solve <problem.json> [--log FILE] [--quiet]
//   learnopt bench <dir> --out <csv>
//   learnopt gen --seed S --n N --d D --density P [--out FILE]
//   learnopt serve [--host H] [--port P]     (default port: $LEARNOPT_PORT or 8080)
//   learnopt replay <log.jsonl>

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "learnopt/bench.hpp"
#include "learnopt/engine.hpp"
#include "learnopt/enumerate.hpp"
#include "learnopt/problem.hpp"
#include "learnopt/service.hpp"

namespace {

using namespace learnopt;

// Asks a human on the terminal.
class TerminalOracle final : public Oracle {
 public:
  explicit TerminalOracle(const Vocabulary& voc) : voc_(voc) {}

  Answer ask(const Assignment& e) override {
    for (;;) {
      std::cout << (e.complete() ? "Is this assignment feasible? " : "Is this partial assignment acceptable? ")
                << to_string(e, voc_) << " [y/n] " << std::flush;
      std::string line;
      if (!std::getline(std::cin, line)) {
        closed_ = true;
        throw OracleUnavailable("stdin closed");
      }
      if (line == "y" || line == "yes") return Answer::yes;
      if (line == "n" || line == "no") return Answer::no;
    }
  }
  bool expired() const override { return closed_; }

 private:
  const Vocabulary& voc_;
  bool closed_ = false;
};

int cmd_solve(const std::string& path, const std::string& log_path, bool quiet) {
  ProblemSpec spec = load_problem(path);
  SessionConfig config = spec.session_config();
  Vocabulary voc = config.vocabulary;

  std::unique_ptr<Oracle> oracle;
  if (spec.oracle.kind == OracleSpec::Kind::interactive) {
    oracle = std::make_unique<TerminalOracle>(voc);
  } else {
    oracle = make_simulated_oracle(spec);
  }

  Session session(std::move(config), *oracle, [&](const Event& e, const SessionState&) {
    if (!quiet && e["event"] == "bounds")
      std::cerr << "iteration " << e["iteration"] << ": lb=" << e["lb"] << " ub=" << e["ub"]
                << " queries=" << e["queries"] << '\n';
  });
  const SessionState& s = session.run();

  if (!log_path.empty()) {
    std::ofstream out(log_path);
    write_event_log(session.events(), out);
  }

  std::cout << "status: " << to_string(s.status) << " (" << to_string(s.reason) << ")\n"
            << "lb: " << s.lb << "  e_l: " << to_string(s.lower_witness, voc) << '\n'
            << "ub: " << s.ub << "  e_u: " << to_string(s.upper_witness, voc) << '\n'
            << "iterations: " << s.iteration << "  queries: " << s.queries.total() << '\n'
            << "learned:";
  for (const auto& c : s.acquisition.learned) std::cout << "  " << to_string(c, voc);
  std::cout << '\n';
  if (spec.objective.sense == Sense::maximize)
    std::cout << "(bounds are on the negated objective)\n";
  return s.status == Status::collapsed ? 2 : 0;
}

int cmd_bench(const std::string& dir, const std::string& out) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<ProblemSpec> specs;
  for (const auto& f : files) {
    ProblemSpec spec = load_problem(f);
    if (spec.name.empty()) spec.name = f.stem().string();
    specs.push_back(std::move(spec));
  }
  auto records = run_bench(specs, out);
  std::size_t optimal = 0;
  for (const auto& r : records) optimal += r.status == "OPTIMAL";
  std::cout << records.size() << " instances, " << optimal << " optimal; wrote " << out << '\n';
  return 0;
}

int cmd_gen(std::uint64_t seed, std::size_t n, std::size_t d, double density,
            const std::string& out) {
  ProblemSpec spec = generate_random_instance(seed, n, d, density);
  if (out.empty()) {
    std::cout << to_json(spec).dump(2) << '\n';
  } else {
    write_problem(spec, out);
  }
  return 0;
}

Service* g_service = nullptr;

int cmd_serve(const std::string& host, int port) {
  Service service;
  g_service = &service;
  std::signal(SIGINT, [](int) {
    if (g_service) g_service->stop();
  });
  std::cerr << "listening on " << host << ':' << port << '\n';
  bool ok = service.listen(host, port);
  g_service = nullptr;
  return ok ? 0 : 1;
}

int cmd_replay(const std::string& path) {
  ReplayReport report = replay(read_event_log(path));
  if (report.identical) {
    std::cout << "replay identical (" << report.replayed.size() << " events)\n";
    return 0;
  }
  std::cout << "replay differs at event " << report.first_difference << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn-and-optimize over a hidden constraint network"};
  app.require_subcommand(1);

  std::string problem_path, log_path;
  bool quiet = false;
  auto* solve_cmd = app.add_subcommand("solve", "Run one session (simulated or terminal-interactive)");
  solve_cmd->add_option("problem", problem_path, "Problem JSON")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--log", log_path, "Write the JSONL event log here");
  solve_cmd->add_flag("--quiet", quiet, "Do not print the bound trace");

  std::string bench_dir, bench_out;
  auto* bench_cmd = app.add_subcommand("bench", "Run every problem in a directory");
  bench_cmd->add_option("dir", bench_dir, "Directory of problem JSON files")
      ->required()
      ->check(CLI::ExistingDirectory);
  bench_cmd->add_option("--out", bench_out, "CSV output path")->required();

  std::uint64_t seed = 1;
  std::size_t n = 4, d = 4;
  double density = 0.3;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
  gen_cmd->add_option("--seed", seed)->required();
  gen_cmd->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--d", d)->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--density", density)->required()->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--out", gen_out, "Write here instead of stdout");

  std::string host = "127.0.0.1";
  int port = 8080;
  if (const char* env = std::getenv("LEARNOPT_PORT")) port = std::atoi(env);
  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP session API");
  serve_cmd->add_option("--host", host);
  serve_cmd->add_option("--port", port);

  std::string replay_path;
  auto* replay_cmd = app.add_subcommand("replay", "Re-run a logged session and compare logs");
  replay_cmd->add_option("log", replay_path)->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) return cmd_solve(problem_path, log_path, quiet);
    if (*bench_cmd) return cmd_bench(bench_dir, bench_out);
    if (*gen_cmd) return cmd_gen(seed, n, d, density, gen_out);
    if (*serve_cmd) return cmd_serve(host, port);
    if (*replay_cmd) return cmd_replay(replay_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
