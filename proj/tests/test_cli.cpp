#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <nlohmann/json.hpp>

namespace {

// Compiled-in paths from the build system; the environment can override them
// when running the test binary by hand against another build.
std::string binary() {
  if (const char* p = std::getenv("PTSIM_BIN")) return p;
  return PTSIM_BIN;
}

std::string preset_dir() {
  if (const char* p = std::getenv("PTSIM_PRESET_DIR")) return p;
  return PTSIM_PRESET_DIR;
}

int run_cmd(const std::string& args, const std::string& tag) {
  const std::string cmd = "\"" + binary() + "\" " + args + " > cli_" + tag +
                          ".out 2> cli_" + tag + ".err";
  const int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  f << content;
}

const char* kQuickConfig = R"({
  "model": {"kind": "central_spin", "n_spins": 2, "j_total": 1.0, "b": 0.0},
  "dt": 0.1,
  "n_max": 10,
  "epsilon": 1e-9,
  "observables": ["sz"],
  "out": "cli_run.csv",
  "seed": 7
})";

}  // namespace

TEST_CASE("version and argument errors") {
  CHECK(run_cmd("--version", "ver") == 0);
  CHECK(slurp("cli_ver.out").rfind("ptsim ", 0) == 0);

  CHECK(run_cmd("", "noargs") == 2);               // a subcommand is required
  CHECK(run_cmd("run", "nocfg") == 2);             // config path is required
  CHECK(run_cmd("run does_not_exist.json", "missing") == 2);
  CHECK(run_cmd("frobnicate x.json", "badsub") == 2);
}

TEST_CASE("a quick run produces a well-formed trajectory table") {
  write_file("cli_quick.json", kQuickConfig);
  REQUIRE(run_cmd("run cli_quick.json", "quick") == 0);
  CHECK(slurp("cli_quick.err").find("done:") != std::string::npos);

  const auto rows = lines_of(slurp("cli_run.csv"));
  REQUIRE(rows.size() == 12);  // header + n_max + 1 states
  CHECK(rows[0] == "t,sz,trace,bond");
  for (std::size_t l = 0; l + 1 < rows.size(); ++l) {
    const auto cells = split_csv(rows[l + 1]);
    REQUIRE(cells.size() == 4);
    CHECK(std::stod(cells[0]) == doctest::Approx(0.1 * double(l)).epsilon(1e-15));
    CHECK(std::abs(std::stod(cells[2]) - 1.0) < 1e-9);   // trace column
    CHECK(std::stoul(cells[3]) >= 1);                    // bond column
    CHECK(std::abs(std::stod(cells[1])) <= 1.0 + 1e-12); // spin projection range
  }
  // boundary bonds are one
  CHECK(split_csv(rows[1])[3] == "1");
  CHECK(split_csv(rows.back())[3] == "1");

  // the sidecar summary carries the run diagnostics
  const auto js = nlohmann::json::parse(slurp("cli_run.csv.summary.json"));
  CHECK(js.at("d_max").get<std::size_t>() >= 1);
  CHECK(js.at("n_steps").get<std::size_t>() == 10);
  CHECK(js.at("dt").get<double>() == 0.1);
  CHECK(js.at("epsilon").get<double>() == 1e-9);
  CHECK(js.at("bond_profile").size() == 11);
  CHECK(js.at("wall_seconds").get<double>() > 0.0);
  CHECK(js.at("discarded_max").get<double>() >= 0.0);
}

TEST_CASE("runs are deterministic for a seed and responsive to it") {
  write_file("cli_quick.json", kQuickConfig);
  REQUIRE(run_cmd("run cli_quick.json --out cli_a.csv", "det_a") == 0);
  REQUIRE(run_cmd("run cli_quick.json --out cli_b.csv", "det_b") == 0);
  CHECK(slurp("cli_a.csv") == slurp("cli_b.csv"));

  REQUIRE(run_cmd("run cli_quick.json --out cli_c.csv --seed 8", "det_c") == 0);
  CHECK(slurp("cli_a.csv") != slurp("cli_c.csv"));
}

TEST_CASE("command-line overrides replace config values") {
  write_file("cli_quick.json", kQuickConfig);
  REQUIRE(run_cmd("run cli_quick.json --nmax 4 --dt 0.2 --out cli_ovr.csv", "ovr") == 0);
  const auto rows = lines_of(slurp("cli_ovr.csv"));
  REQUIRE(rows.size() == 6);
  CHECK(std::stod(split_csv(rows.back())[0]) == doctest::Approx(0.8));
  const auto js = nlohmann::json::parse(slurp("cli_ovr.csv.summary.json"));
  CHECK(js.at("dt").get<double>() == 0.2);
  CHECK(js.at("n_steps").get<std::size_t>() == 4);
}

TEST_CASE("process-tensor caching round-trips and detects mismatches") {
  write_file("cli_quick.json", kQuickConfig);
  std::filesystem::remove("cli_cache.bin");

  REQUIRE(run_cmd("run cli_quick.json --out cli_h1.csv --pt-cache cli_cache.bin",
                  "cache1") == 0);
  CHECK(std::filesystem::exists("cli_cache.bin"));

  // warm run: identical trajectory, no rebuild note
  REQUIRE(run_cmd("run cli_quick.json --out cli_h2.csv --pt-cache cli_cache.bin",
                  "cache2") == 0);
  CHECK(slurp("cli_h1.csv") == slurp("cli_h2.csv"));
  CHECK(slurp("cli_cache2.err").find("rebuild") == std::string::npos);

  // stale cache: mismatched step count is noticed and rebuilt
  REQUIRE(run_cmd("run cli_quick.json --nmax 5 --out cli_h3.csv --pt-cache cli_cache.bin",
                  "cache3") == 0);
  CHECK(slurp("cli_cache3.err").find("does not match") != std::string::npos);
  CHECK(lines_of(slurp("cli_h3.csv")).size() == 7);
}

TEST_CASE("config errors exit with code 2") {
  write_file("cli_bad.json", "{ not json at all");
  CHECK(run_cmd("run cli_bad.json", "badjson") == 2);

  write_file("cli_bad.json", R"({"model": {"kind": "central_spin", "n_spins": 2}})");
  CHECK(run_cmd("run cli_bad.json", "nodt") == 2);  // dt / n_max / epsilon missing

  write_file("cli_bad.json", R"({
    "model": {"kind": "no_such_model"}, "dt": 0.1, "n_max": 5, "epsilon": 0})");
  CHECK(run_cmd("run cli_bad.json", "badkind") == 2);

  write_file("cli_bad.json", R"({
    "model": {"kind": "central_spin", "n_spins": 2}, "dt": 0.1, "n_max": 5,
    "epsilon": 0, "observables": ["banana"]})");
  CHECK(run_cmd("run cli_bad.json", "badobs") == 2);

  write_file("cli_bad.json", R"({
    "model": {"kind": "central_spin", "n_spins": 2}, "dt": -0.1, "n_max": 5,
    "epsilon": 0})");
  CHECK(run_cmd("run cli_bad.json", "negdt") == 2);

  write_file("cli_bad.json", R"({
    "model": {"kind": "resonant_level", "n_e": 2}, "dt": 0.1, "n_max": 5,
    "epsilon": 0})");
  CHECK(run_cmd("run cli_bad.json", "nog") == 2);  // needs g or gamma
}

TEST_CASE("resource limits exit with code 3") {
  // local dimension 40 pushes the joint Liouville space past the safety cap
  write_file("cli_big.json", R"({
    "model": {"kind": "anharmonic", "m_levels": 40, "potential": "harmonic",
              "spectral": {"kind": "flat", "height": 0.01, "min": 0.5, "max": 1.5},
              "range": [0.5, 1.5], "n_e": 1},
    "dt": 0.1, "n_max": 3, "epsilon": 1e-8})");
  CHECK(run_cmd("run cli_big.json", "big") == 3);
}

TEST_CASE("numerical failures exit with code 4") {
  // lambda = 1.51 nominally binds two states, but the second is too shallow
  // to be bound on the solver grid, which the solver reports as numerical
  write_file("cli_num.json", R"({
    "model": {"kind": "anharmonic", "m_levels": 2, "potential": "morse",
              "lambda": 1.51,
              "spectral": {"kind": "flat", "height": 0.01, "min": 0.5, "max": 1.5},
              "range": [0.5, 1.5], "n_e": 1},
    "dt": 0.1, "n_max": 3, "epsilon": 1e-8})");
  CHECK(run_cmd("run cli_num.json", "num") == 4);
}

TEST_CASE("convergence sweep emits the comparison table") {
  write_file("cli_sweep.json", R"({
    "model": {"kind": "central_spin", "n_spins": 2, "j_total": 1.0, "b": "inf"},
    "dt": 0.2, "n_max": 10, "epsilon": 1e-9,
    "observables": ["sz", "sx"],
    "out": "cli_sweep.csv",
    "sweep": {"dt": [0.2, 0.1], "epsilon": [1e-2, 1e-9]}
  })");
  REQUIRE(run_cmd("sweep cli_sweep.json", "sweep") == 0);

  const auto rows = lines_of(slurp("cli_sweep.csv"));
  REQUIRE(rows.size() == 5);  // header + 2x2 grid
  CHECK(rows[0] == "dt,epsilon,n_e,n_steps,d_max,wall_s,err_epsilon,err_dt,sz_final,sx_final");
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto cells = split_csv(rows[r]);
    REQUIRE(cells.size() == 10);
    const double dt = std::stod(cells[0]);
    const double eps = std::stod(cells[1]);
    const std::size_t n_steps = std::stoul(cells[3]);
    // fixed end time: n scales inversely with dt
    CHECK(n_steps == std::size_t(std::llround(2.0 / dt)));
    if (eps == 1e-9) {
      CHECK(std::stod(cells[6]) == 0.0);        // err_epsilon vs itself
      CHECK(cells[7] != "nan");                 // err_dt defined on the eps_min row
    } else {
      CHECK(cells[7] == "nan");                 // dt error only at tightest epsilon
      CHECK(std::stod(cells[6]) >= 0.0);
    }
    CHECK(std::abs(std::stod(cells[8])) <= 1.0 + 1e-12);
  }

  // all-up bath: spin dynamics are reproducible, finals agree across epsilon
  const auto tight = split_csv(rows[2]);  // dt = 0.2, eps = 1e-9 row order
  CHECK(std::stod(tight[6]) == 0.0);
}

TEST_CASE("shipped presets parse and carry the required keys") {
  std::size_t count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(preset_dir())) {
    if (entry.path().extension() != ".json") continue;
    ++count;
    nlohmann::json js;
    INFO("preset: ", entry.path().string());
    REQUIRE_NOTHROW(js = nlohmann::json::parse(slurp(entry.path().string())));
    CHECK(js.contains("model"));
    CHECK(js.contains("dt"));
    CHECK(js.contains("n_max"));
    CHECK(js.contains("epsilon"));
    CHECK(js.at("model").contains("kind"));
  }
  CHECK(count >= 8);  // one per studied scenario family
}
