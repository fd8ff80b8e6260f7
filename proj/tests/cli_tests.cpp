#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "mod5orient/graph.hpp"

#ifndef MOD5_CLI_PATH
#error "MOD5_CLI_PATH must point at the CLI binary"
#endif

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(MOD5_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buffer[4096];
  while (std::size_t got = fread(buffer, 1, sizeof buffer, pipe)) result.output.append(buffer, got);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct ScratchDir {
  fs::path path;
  ScratchDir() {
    path = fs::temp_directory_path() / ("mod5_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~ScratchDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("sample writes a well-formed graph and pairing") {
  ScratchDir dir;
  const RunResult r = run("sample --n 10 --seed 7 --graph-out " + dir.file("g.txt") +
                          " --pairing-out " + dir.file("p.txt"));
  CHECK(r.exit_code == 0);
  const std::string graph_text = slurp(dir.file("g.txt"));
  const mod5::MultiGraph g = mod5::parse_graph(graph_text);
  CHECK(g.n == 10);
  CHECK(g.edge_count() == 45);
  CHECK(graph_text.substr(0, 5) == "10 9\n");
  CHECK(slurp(dir.file("p.txt")).find(':') != std::string::npos);
}

TEST_CASE("sample rejects odd n at d = 9") {
  ScratchDir dir;
  const RunResult r = run("sample --n 3 --graph-out " + dir.file("g.txt") + " --pairing-out " +
                          dir.file("p.txt"));
  CHECK(r.exit_code == 2);
}

TEST_CASE("sample is byte-identical per seed") {
  ScratchDir dir;
  run("sample --n 10 --seed 9 --graph-out " + dir.file("a.txt") + " --pairing-out " + dir.file("ap.txt"));
  run("sample --n 10 --seed 9 --graph-out " + dir.file("b.txt") + " --pairing-out " + dir.file("bp.txt"));
  CHECK(slurp(dir.file("a.txt")) == slurp(dir.file("b.txt")));
  CHECK(slurp(dir.file("ap.txt")) == slurp(dir.file("bp.txt")));
}

TEST_CASE("orient solves K10 and verifies the output") {
  ScratchDir dir;
  std::ofstream(dir.file("k10.txt")) << mod5::to_text(mod5::complete_graph(10));
  const RunResult r = run("orient --graph " + dir.file("k10.txt") + " --seed 1 --out " +
                          dir.file("o.txt"));
  CHECK(r.exit_code == 0);
  const std::string text = slurp(dir.file("o.txt"));
  CHECK(std::count(text.begin(), text.end(), '\n') == 45);
  CHECK(text.find("->") != std::string::npos);
}

TEST_CASE("orient reports infeasible instances with exit 1") {
  ScratchDir dir;
  // 4 loops at each vertex plus a bridge: loops force in-degree >= 4
  std::ofstream(dir.file("loops.txt")) << "2 9\n0 0\n0 0\n0 0\n0 0\n0 1\n1 1\n1 1\n1 1\n1 1\n";
  const RunResult r = run("orient --graph " + dir.file("loops.txt") + " --out " + dir.file("o.txt"));
  CHECK(r.exit_code == 1);
}

TEST_CASE("orient rejects malformed input with exit 2") {
  ScratchDir dir;
  std::ofstream(dir.file("bad.txt")) << "4 9\n0 1\n";  // truncated
  const RunResult r = run("orient --graph " + dir.file("bad.txt") + " --out " + dir.file("o.txt"));
  CHECK(r.exit_code == 2);
  CHECK(run("orient --graph " + dir.file("missing.txt")).exit_code == 2);
}

TEST_CASE("count reproduces the banana-graph value") {
  ScratchDir dir;
  std::ofstream(dir.file("b9.txt")) << mod5::to_text(mod5::banana_graph(9));
  const RunResult r = run("count --graph " + dir.file("b9.txt"));
  CHECK(r.exit_code == 0);
  CHECK(r.output == "72\n");

  const RunResult point = run("count --graph " + dir.file("b9.txt") + " --point-level");
  CHECK(point.output == "72\n");  // no loops: same count
}

TEST_CASE("count refuses graphs beyond the exact limit") {
  ScratchDir dir;
  run("sample --n 8 --seed 1 --graph-out " + dir.file("g8.txt") + " --pairing-out " + dir.file("p8.txt"));
  CHECK(run("count --graph " + dir.file("g8.txt")).exit_code == 2);
  CHECK(run("count --graph " + dir.file("g8.txt") + " --max-n 8").exit_code == 0);
}

TEST_CASE("moments subcommand prints exact and asymptotic values") {
  const RunResult text = run("moments --n 2");
  CHECK(text.exit_code == 0);
  CHECK(text.output.find("331776/12155") != std::string::npos);  // 940584960/34459425 reduced
  CHECK(text.output.find("27.29") != std::string::npos);

  const RunResult json = run("moments --n 2 --format json");
  const auto parsed = nlohmann::json::parse(json.output);
  CHECK(parsed["n"] == 2);
  CHECK(parsed["exact_EY"] == "331776/12155");
  CHECK(parsed.contains("exact_EY2"));
  CHECK(parsed["ratio"].get<double>() > 1.0);
}

TEST_CASE("experiment cycles emits JSON lines with sane means") {
  const RunResult r = run("experiment cycles --n 200 --trials 400 --kmax 3 --seed 5");
  CHECK(r.exit_code == 0);
  std::istringstream lines(r.output);
  std::string line;
  double means[4] = {0, 0, 0, 0};
  int seen = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j["prng"] == "mt19937_64");
    const std::string name = j["statistic"];
    for (int k = 1; k <= 3; ++k) {
      if (name == "E[X_" + std::to_string(k) + "]") {
        means[k] = j["mean"].get<double>();
        ++seen;
      }
    }
  }
  CHECK(seen == 3);
  CHECK(std::abs(means[1] - 4.0) < 1.0);
  CHECK(std::abs(means[2] - 16.0) < 3.0);
  CHECK(std::abs(means[3] - 256.0 / 3.0) < 8.0);
}

TEST_CASE("experiment moments respects the csv format flag") {
  const RunResult r = run("experiment moments --n 2 --trials 500 --seed 2 --format csv");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("experiment,statistic,mean") == 0);
}

TEST_CASE("experiment rejects invalid kinds and modes") {
  CHECK(run("experiment nonsense --n 2").exit_code == 2);
  CHECK(run("experiment moments --n 2 --mode solver-only --trials 10").exit_code == 2);
}

TEST_CASE("verify-paper passes with default tolerances") {
  const RunResult r = run("verify-paper --samples 20000 --seed 3");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("FAIL") == std::string::npos);
  CHECK(r.output.find("all checks passed") != std::string::npos);
}

TEST_CASE("verify-paper fails cleanly when the tolerance is absurd") {
  const RunResult r = run("verify-paper --samples 2000 --tolerance 1e-15");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("FAIL") != std::string::npos);
  CHECK(r.output.find("SOME CHECKS FAILED") != std::string::npos);
}

TEST_CASE("verify-paper json certificate") {
  const RunResult r = run("verify-paper --samples 2000 --format json");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.output);
  CHECK(j["zhat"].size() == 9);
  CHECK(j["zhat"][0].get<double>() == doctest::Approx(0.25));
  CHECK(j["roots"].size() == 3);
  CHECK(j["detB"] == "-23665185138564661248/117649");
  CHECK(j["eigenvalues"].size() == 9);
  CHECK(j["laplace_constant"].get<double>() == doctest::Approx(81.0 / 7.0));
  CHECK(j["boundary"]["case1"]["coordinate"].get<double>() == doctest::Approx(19.0 / 52.0));
  CHECK(j["all_pass"] == true);
  CHECK(j["f_zhat"].get<double>() == doctest::Approx(2.315007612));
}

TEST_CASE("environment seed is used unless --seed overrides") {
  ScratchDir dir;
  const std::string base = "sample --n 4 --graph-out " + dir.file("g.txt") + " --pairing-out " +
                           dir.file("p.txt");
  setenv("MOD5ORIENT_SEED", "123", 1);
  run(base);
  const std::string with_env = slurp(dir.file("g.txt"));
  run(base + " --seed 123");
  CHECK(slurp(dir.file("g.txt")) == with_env);
  run(base + " --seed 124");
  CHECK(slurp(dir.file("g.txt")) != with_env);
  unsetenv("MOD5ORIENT_SEED");
}
