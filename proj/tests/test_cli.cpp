#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

#ifndef NSPLAST_CLI_PATH
#error "NSPLAST_CLI_PATH must be defined by the build"
#endif

const char* kCli = NSPLAST_CLI_PATH;

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string("\"") + kCli + "\" " + args + " >/dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  REQUIRE(raw != -1);
  REQUIRE(WIFEXITED(raw));
  return WEXITSTATUS(raw);
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("nsplast_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << body;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

const char* kTinyConfig = R"({
  "regime": "perfect",
  "E": 30.0,
  "m": 0.82,
  "sigma_Y0": 1.0,
  "dt": 1e-4,
  "t_end": 0.5,
  "initial": {"eps": 1.0},
  "loading": {"kind": "free"}
})";

}  // namespace

TEST_CASE("cli: usage errors exit with code 2") {
  CHECK(run_cli("") == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("simulate") == 2);                          // missing options
  CHECK(run_cli("simulate --config /no/such.json --out /tmp/x") == 2);
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("--version") == 0);
}

TEST_CASE("cli: malformed config exits with code 2") {
  TempDir dir;
  const fs::path cfg = dir.path / "bad.json";
  write_file(cfg, "{ definitely not json");
  const fs::path out = dir.path / "run";
  CHECK(run_cli("simulate --config " + cfg.string() + " --out " +
                out.string()) == 2);

  write_file(cfg, R"({"regime": "perfect"})");  // missing required keys
  CHECK(run_cli("simulate --config " + cfg.string() + " --out " +
                out.string()) == 2);
}

TEST_CASE("cli: simulate, audit and plot-data round trip") {
  TempDir dir;
  const fs::path cfg = dir.path / "run.json";
  write_file(cfg, kTinyConfig);
  const fs::path out = dir.path / "run";

  CHECK(run_cli("simulate --config " + cfg.string() + " --out " +
                out.string()) == 0);
  CHECK(fs::exists(out / "trajectory.csv"));
  CHECK(fs::exists(out / "trajectory.events.csv"));
  CHECK(fs::exists(out / "manifest.json"));

  CHECK(run_cli("audit " + out.string()) == 0);

  CHECK(run_cli("plot-data " + out.string()) == 0);
  CHECK(fs::exists(out / "plot_strain.csv"));
  CHECK(fs::exists(out / "plot_energy.csv"));
  CHECK(fs::exists(out / "plot_stress.csv"));
  CHECK(fs::exists(out / "plot_stress_strain.csv"));
}

TEST_CASE("cli: audit flags a corrupted trajectory with exit code 1") {
  TempDir dir;
  const fs::path cfg = dir.path / "run.json";
  write_file(cfg, kTinyConfig);
  const fs::path out = dir.path / "run";
  REQUIRE(run_cli("simulate --config " + cfg.string() + " --out " +
                  out.string()) == 0);

  // corrupt the recorded cumulative dissipation of the final sample
  const fs::path csv = out / "trajectory.csv";
  std::string body = slurp(csv);
  const auto last_newline = body.rfind('\n', body.size() - 2);
  REQUIRE(last_newline != std::string::npos);
  std::string last = body.substr(last_newline + 1);
  // column 11 (D_cum): negate it by textual surgery on the final row
  {
    std::vector<std::string> fields;
    std::string row = last;
    if (!row.empty() && row.back() == '\n') row.pop_back();
    std::size_t pos = 0;
    while (true) {
      const auto next = row.find(',', pos);
      fields.push_back(row.substr(pos, next - pos));
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    REQUIRE(fields.size() == 14);
    REQUIRE_FALSE(fields[10].empty());
    if (fields[10][0] == '-')
      fields[10].erase(0, 1);
    else
      fields[10].insert(0, "-");
    std::string rebuilt;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) rebuilt += ',';
      rebuilt += fields[i];
    }
    rebuilt += '\n';
    body = body.substr(0, last_newline + 1) + rebuilt;
  }
  write_file(csv, body);

  CHECK(run_cli("audit " + out.string()) == 1);

  // a missing run directory is a usage problem, not a ledger failure
  CHECK(run_cli("audit " + (dir.path / "nowhere").string()) == 2);

  // a garbled trajectory inside an intact run is a failed audit
  write_file(csv, "t,eps\n0,broken\n");
  CHECK(run_cli("audit " + out.string()) == 1);
}

TEST_CASE("cli: sweep runs the grid and writes an index") {
  TempDir dir;
  const fs::path sweep = dir.path / "sweep.json";
  write_file(sweep, R"({
    "base": {
      "regime": "perfect",
      "E": 30.0,
      "m": 0.82,
      "sigma_Y0": 1.0,
      "dt": 1e-4,
      "t_end": 0.2,
      "initial": {"eps": 1.0},
      "loading": {"kind": "free"}
    },
    "grid": {"sigma_Y0": [1.0, 2.0]}
  })");
  const fs::path out = dir.path / "sweep_out";
  ::setenv("NONSMOOTH_PLAST_THREADS", "2", 1);
  CHECK(run_cli("sweep --config " + sweep.string() + " --out " +
                out.string()) == 0);
  ::unsetenv("NONSMOOTH_PLAST_THREADS");
  CHECK(fs::exists(out / "sweep_index.csv"));
  CHECK(fs::exists(out / "run_0000" / "manifest.json"));
  CHECK(fs::exists(out / "run_0001" / "manifest.json"));
  const std::string index = slurp(out / "sweep_index.csv");
  CHECK(index.find("sigma_Y0") != std::string::npos);
  CHECK(index.find("run_0000") != std::string::npos);
}

TEST_CASE("cli: viscous-study prints rows and a fitted order") {
  TempDir dir;
  const fs::path cfg = dir.path / "base.json";
  write_file(cfg, R"({
    "regime": "perfect",
    "E": 30.0,
    "m": 0.82,
    "sigma_Y0": 1.0,
    "dt": 5e-3,
    "t_end": 1.0,
    "initial": {"eps": 1.0},
    "loading": {"kind": "free"}
  })");
  const fs::path out = dir.path / "study.csv";
  CHECK(run_cli("viscous-study --config " + cfg.string() +
                " --etas 1e-1 1e-2 --out " + out.string()) == 0);
  const std::string body = slurp(out);
  CHECK(body.find("eta") != std::string::npos);
  CHECK(body.find("fitted_order") != std::string::npos);
}
