#include "cli.hpp"

#include "tracebound/driver.hpp"
#include "tracebound/parser.hpp"
#include "tracebound/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace {

using namespace tb;
namespace fs = std::filesystem;

constexpr int kSafe = 0, kViolation = 1, kUnknown = 2, kUsage = 3;

struct CommonOptions {
  std::string engine = "general";
  double timeout = 500;
  std::string solver = "z3";
  std::string solver_interpolation = "off";
  std::string interpolation = "auto";
  std::string value_analysis = "off";
  std::string emit = "table";
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--engine", o.engine, "general or rc")->check(CLI::IsMember({"general", "rc"}));
  cmd->add_option("--timeout", o.timeout, "wall-clock limit in seconds")->check(CLI::PositiveNumber);
  cmd->add_option("--solver", o.solver, "SMT-LIB 2 solver executable");
  cmd->add_option("--solver-interpolation", o.solver_interpolation, "use the solver's get-interpolants")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--interpolation", o.interpolation, "auto, solver, sp, core or wp")
      ->check(CLI::IsMember({"auto", "solver", "sp", "core", "wp"}));
  cmd->add_option("--value-analysis", o.value_analysis, "state limit, or off");
  cmd->add_option("--emit", o.emit, "table or json")->check(CLI::IsMember({"table", "json"}));
}

EngineConfig make_config(const CommonOptions& o) {
  EngineConfig cfg;
  cfg.engine = o.engine == "rc" ? Engine::RefutationallyComplete : Engine::General;
  cfg.timeout_s = o.timeout;
  cfg.solver.path = o.solver;
  cfg.solver.interpolation = o.solver_interpolation == "on";
  static const std::map<std::string, InterpolationStrategy> strategies = {
      {"auto", InterpolationStrategy::Auto},
      {"solver", InterpolationStrategy::Solver},
      {"sp", InterpolationStrategy::StrongestPost},
      {"core", InterpolationStrategy::CoreWeakestPre},
      {"wp", InterpolationStrategy::WeakestPre}};
  cfg.interpolation = strategies.at(o.interpolation);
  if (o.value_analysis != "off") {
    std::size_t pos = 0;
    unsigned long n = std::stoul(o.value_analysis, &pos);
    if (pos != o.value_analysis.size() || n == 0) throw std::invalid_argument("--value-analysis expects N or off");
    cfg.value_analysis_limit = n;
  }
  return cfg;
}

int exit_code(const Verdict& v) {
  switch (v.kind) {
    case Verdict::Kind::Safe:
      return kSafe;
    case Verdict::Kind::Violation:
      return kViolation;
    case Verdict::Kind::Unknown:
      return kUnknown;
  }
  return kUnknown;
}

std::string fixed(double x, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << x;
  return os.str();
}

void print_table(std::ostream& os, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (width.size() <= i) width.push_back(0);
      width[i] = std::max(width[i], r[i].size());
    }
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      os << r[i];
      if (i + 1 < r.size()) os << std::string(width[i] - r[i].size() + 2, ' ');
    }
    os << "\n";
  }
}

int verify_command(const std::string& path, const std::string& beta_text, const CommonOptions& o,
                   const std::string& dot_dir, const std::string& log_path, const std::string& mdp_path) {
  VerificationTask task;
  EngineConfig cfg;
  try {
    task = load_task(path);
    if (!beta_text.empty()) {
      task.beta = parse_rational(beta_text);
      task.has_bound = true;
    }
    if (!task.has_bound) throw std::invalid_argument("no threshold: give --beta or a bound section");
    if (task.beta < 0 || task.beta > 1) throw std::invalid_argument("threshold must lie in [0,1]");
    cfg = make_config(o);
  } catch (const ParseError& e) {
    std::cerr << path << ":" << e.line() << ":" << e.column() << ": " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  std::ofstream log;
  if (!log_path.empty()) {
    log.open(log_path);
    if (!log) {
      std::cerr << "error: cannot write " << log_path << "\n";
      return kUsage;
    }
    cfg.log = [&log](const nlohmann::json& j) { log << j.dump() << "\n" << std::flush; };
  }
  if (!dot_dir.empty()) {
    fs::create_directories(dot_dir);
    cfg.dot = [dot_dir](const std::string& name, const std::string& text) {
      std::ofstream(fs::path(dot_dir) / (name + ".dot")) << text;
    };
  }
  if (!mdp_path.empty()) std::ofstream(mdp_path) << mdp_json(underlying_mdp(program_to_pcfa(task.program))).dump(2);

  Verdict v;
  try {
    v = verify(task, cfg);
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::logic_error& e) {
    std::cerr << "internal check failed: " << e.what() << "\n";
    return kUnknown;
  }

  if (o.emit == "json") {
    std::cout << run_report(path, task.beta, v).dump(2) << "\n";
  } else {
    std::vector<std::vector<std::string>> rows = {{"Name", "Beta", "Bound", "Time", "Result"}};
    rows.push_back({fs::path(path).filename().string(), to_fraction_string(task.beta), to_fraction_string(v.bound),
                    fixed(v.stats.seconds, 3), result_label(v)});
    print_table(std::cout, rows);
    if (v.cex) {
      std::cout << "counterexample: " << v.cex->traces.size() << " trace(s), total weight "
                << to_fraction_string(v.cex->total_weight) << ", witness " << to_string(v.cex->witness) << "\n";
      for (const auto& t : v.cex->traces) std::cout << "  [" << to_fraction_string(trace_weight(t)) << "] " << to_string(t) << "\n";
    }
    if (v.kind == Verdict::Kind::Unknown) std::cout << "reason: " << v.reason << "\n";
  }
  return exit_code(v);
}

struct BenchRow {
  std::string name, beta = "-", result = "ERROR", expect;
  double time = 0;
  bool pass = false;
  nlohmann::json report;
};

int bench_command(const std::string& dir, const std::string& manifest_path, const CommonOptions& o, unsigned jobs) {
  nlohmann::json manifest;
  EngineConfig base;
  try {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error("cannot read " + manifest_path);
    manifest = nlohmann::json::parse(in);
    base = make_config(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  const nlohmann::json entries = manifest.contains("tasks") ? manifest["tasks"] : nlohmann::json::array();
  std::vector<BenchRow> rows(entries.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      const auto& e = entries[i];
      BenchRow& row = rows[i];
      row.name = e.value("name", e.value("task", std::string("?")));
      row.expect = e.value("expect", std::string());
      try {
        std::string path = (fs::path(dir) / e.at("task").get<std::string>()).string();
        VerificationTask task = load_task(path);
        if (e.contains("beta")) {
          task.beta = parse_rational(e["beta"].get<std::string>());
          task.has_bound = true;
        }
        if (!task.has_bound) throw std::invalid_argument("no threshold");
        row.beta = to_fraction_string(task.beta);
        EngineConfig cfg = base;
        if (e.contains("engine")) cfg.engine = e["engine"] == "rc" ? Engine::RefutationallyComplete : Engine::General;
        if (e.contains("timeout")) cfg.timeout_s = e["timeout"].get<double>();
        if (e.contains("value_analysis")) cfg.value_analysis_limit = e["value_analysis"].get<std::size_t>();
        Verdict v = verify(task, cfg);
        row.result = result_label(v);
        row.time = v.stats.seconds;
        row.report = run_report(path, task.beta, v);
      } catch (const std::exception& ex) {
        row.result = "ERROR";
        row.report = {{"task", row.name}, {"error", ex.what()}};
      }
      row.pass = !row.expect.empty() && row.result == row.expect;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < std::max(1u, jobs); ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  bool any_timeout = false, all_pass = true;
  for (const auto& r : rows) {
    any_timeout = any_timeout || r.result == "TO";
    all_pass = all_pass && r.pass;
  }
  if (o.emit == "json") {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json j = r.report;
      j["name"] = r.name;
      j["expect"] = r.expect;
      j["pass"] = r.pass;
      out.push_back(j);
    }
    std::cout << out.dump(2) << "\n";
  } else {
    std::vector<std::vector<std::string>> table = {{"Name", "Bound", "Time", "Result", "Expected", "Check"}};
    for (const auto& r : rows)
      table.push_back({r.name, r.beta, fixed(r.time, 3), r.result, r.expect, r.pass ? "pass" : "FAIL"});
    print_table(std::cout, table);
  }
  if (any_timeout) return kUnknown;
  return all_pass ? 0 : 1;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Threshold verification of probabilistic programs by structural abstraction and refinement"};
  app.require_subcommand(1);

  CommonOptions verify_opts, bench_opts;
  std::string task_path, beta, dot_dir, log_path, mdp_path;
  auto* verify_cmd = app.add_subcommand("verify", "verify one task file");
  verify_cmd->add_option("task", task_path, "task file")->required();
  verify_cmd->add_option("--beta", beta, "threshold, decimal or num/den (overrides the task's bound)");
  verify_cmd->add_option("--dot", dot_dir, "write DOT files of the constructed automata here");
  verify_cmd->add_option("--log", log_path, "JSON-lines iteration log");
  verify_cmd->add_option("--dump-mdp", mdp_path, "write the program's underlying MDP as JSON");
  add_common(verify_cmd, verify_opts);

  std::string bench_dir, manifest;
  unsigned jobs = 1;
  auto* bench_cmd = app.add_subcommand("bench", "run a manifest of tasks");
  bench_cmd->add_option("dir", bench_dir, "directory the manifest's task paths are relative to")->required();
  bench_cmd->add_option("manifest", manifest, "JSON manifest")->required();
  bench_cmd->add_option("--jobs", jobs, "parallel workers")->check(CLI::PositiveNumber);
  add_common(bench_cmd, bench_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }
  if (verify_cmd->parsed()) return verify_command(task_path, beta, verify_opts, dot_dir, log_path, mdp_path);
  return bench_command(bench_dir, manifest, bench_opts, jobs);
}
