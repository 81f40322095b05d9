#include "schema_check.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

using namespace tb::testing;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run cli(const std::string& args) {
  std::string cmd = std::string(TB_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "tracebound-cli-test";
  fs::create_directories(dir);
  return dir / name;
}

SchemaCheck report_schema() {
  std::ifstream in(std::string(TB_SOURCE_DIR) + "/schemas/report.schema.json");
  REQUIRE(in);
  return SchemaCheck(nlohmann::json::parse(in));
}

}  // namespace

TEST_CASE("safe verdict exits 0") {
  Run r = cli("verify " + task_path("limit.task") + " --beta 0.5");
  CHECK(r.code == 0);
  CHECK(r.out.find("SAT") != std::string::npos);
  CHECK(r.out.find("1/2") != std::string::npos);
}

TEST_CASE("violation exits 1 with a JSON report") {
  Run r = cli("verify " + task_path("limitv.task") + " --beta 0.4 --engine rc --emit json");
  CHECK(r.code == 1);
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["result"] == "UnSAT");
  tb::Rational w = tb::parse_rational(j["totalWeight"].get<std::string>());
  CHECK(w > tb::Rational(2, 5));
  CHECK(report_schema().validate(j) == "");
  CHECK(j["counterexample"]["traces"].size() == j["traceCount"].get<std::size_t>());
}

TEST_CASE("reports round-trip through the schema") {
  SchemaCheck schema = report_schema();
  for (const char* args : {"limit.task --beta 0.5", "limit.task --beta 0.3", "limitv.task --beta 0.4 --timeout 0.001"}) {
    Run r = cli("verify " + task_path("") + args + " --emit json");
    nlohmann::json j = nlohmann::json::parse(r.out);
    INFO(args);
    CHECK(schema.validate(j) == "");
    CHECK(nlohmann::json::parse(j.dump()) == j);
  }
  nlohmann::json bad = {{"task", "x"}};
  CHECK_FALSE(schema.validate(bad).empty());
}

TEST_CASE("usage and parse errors exit 3") {
  CHECK(cli("verify " + task_path("missing.task")).code == 3);
  CHECK(cli("verify " + task_path("limit.task") + " --beta 1.5").code == 3);
  CHECK(cli("verify " + task_path("limit.task") + " --engine fast").code == 3);
  CHECK(cli("").code == 3);
  fs::path broken = scratch("broken.task");
  std::ofstream(broken) << "pre true; prog { x := } post true;";
  CHECK(cli("verify " + broken.string()).code == 3);
}

TEST_CASE("time limit exits 2") {
  Run r = cli("verify " + task_path("limitv.task") + " --beta 0.4 --timeout 0.001");
  CHECK(r.code == 2);
  CHECK(r.out.find("TO") != std::string::npos);
}

TEST_CASE("log and DOT output") {
  fs::path log = scratch("run.jsonl");
  fs::path dot = scratch("dot");
  fs::path mdp = scratch("mdp.json");
  fs::remove_all(dot);
  Run r = cli("verify " + task_path("limit.task") + " --log " + log.string() + " --dot " + dot.string() +
              " --dump-mdp " + mdp.string());
  CHECK(r.code == 0);
  std::ifstream in(log);
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    nlohmann::json j = nlohmann::json::parse(line);
    CHECK(j.contains("iteration"));
    ++lines;
  }
  CHECK(lines > 0);
  CHECK(fs::exists(dot / "program.dot"));
  std::ifstream m(mdp);
  nlohmann::json mj = nlohmann::json::parse(m);
  CHECK(mj["nodes"].get<std::size_t>() > 2);
}

TEST_CASE("bench with an empty manifest") {
  fs::path manifest = scratch("empty.json");
  std::ofstream(manifest) << R"({"tasks": []})";
  Run r = cli("bench " + std::string(TB_TASKS_DIR) + " " + manifest.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("Name") != std::string::npos);
}

TEST_CASE("bench reports timeouts") {
  fs::path manifest = scratch("timeout.json");
  std::ofstream(manifest) << R"({"tasks": [
    {"name": "limit", "task": "limit.task", "beta": "1/2", "expect": "SAT"},
    {"name": "slow", "task": "limitv.task", "beta": "2/5", "expect": "UnSAT", "timeout": 0.001}]})";
  Run r = cli("bench " + std::string(TB_TASKS_DIR) + " " + manifest.string());
  CHECK(r.code == 2);
  CHECK(r.out.find("TO") != std::string::npos);
  CHECK(r.out.find("pass") != std::string::npos);
}

TEST_CASE("bench regression manifest") {
  Run r = cli("bench " + std::string(TB_TASKS_DIR) + " " + task_path("regression.json") + " --jobs 4");
  INFO(r.out);
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
}
