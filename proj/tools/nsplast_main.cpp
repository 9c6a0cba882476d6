// Command-line front end: simulate / audit / sweep / viscous-study / plot-data.
// Exit codes: 0 success, 1 ledger failure, 2 usage or config error.

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "nsplast/analysis.hpp"
#include "nsplast/config.hpp"
#include "nsplast/trajectory_io.hpp"
#include "nsplast/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kLedgerFailure = 1;
constexpr int kUsageError = 2;

std::string slurp(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw nsplast::ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

unsigned thread_cap() {
  if (const char* env = std::getenv("NONSMOOTH_PLAST_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
    return 1;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

struct RunOutput {
  nsplast::LedgerReport ledger;
  fs::path directory;
};

// simulate + audit + write trajectory/events/manifest into `dir`
RunOutput execute_run(const nsplast::SimConfig& config, const fs::path& dir) {
  const auto t_start = std::chrono::steady_clock::now();
  const nsplast::Trajectory trajectory = nsplast::simulate(config);
  const nsplast::LedgerReport ledger = nsplast::audit_trajectory(trajectory, config.model);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  fs::create_directories(dir);
  nsplast::write_trajectory(trajectory, dir / "trajectory.csv");

  nsplast::RunManifest manifest;
  manifest.config_json = nsplast::config_to_json(config);
  manifest.trajectory_path = "trajectory.csv";
  manifest.events_path = "trajectory.events.csv";
  manifest.tool_version = std::string(nsplast::kVersion);
  manifest.wall_seconds = wall;
  manifest.ledger = ledger;
  nsplast::write_manifest(manifest, dir / "manifest.json");
  return {ledger, dir};
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
  const nsplast::SimConfig config = nsplast::parse_config(slurp(config_path));
  const RunOutput run = execute_run(config, out_dir);
  std::cout << run.ledger.to_text();
  std::cout << "wrote " << (run.directory / "trajectory.csv").string() << ", "
            << (run.directory / "trajectory.events.csv").string() << ", "
            << (run.directory / "manifest.json").string() << "\n";
  return run.ledger.pass ? kOk : kLedgerFailure;
}

int cmd_audit(const std::string& run_dir) {
  const fs::path dir(run_dir);
  const nsplast::RunManifest manifest = nsplast::read_manifest(dir / "manifest.json");
  const nsplast::SimConfig config = nsplast::parse_config(manifest.config_json);
  const nsplast::RunInfo info{config.dt, config.stride, config.viscosity,
                              config.localization, config.loading};
  nsplast::LedgerReport report;
  try {
    const nsplast::Trajectory trajectory =
        nsplast::read_trajectory(dir / manifest.trajectory_path, info);
    report = nsplast::audit_trajectory(trajectory, config.model);
  } catch (const std::runtime_error& e) {
    // unreadable data is a failed audit, not a usage error
    std::cerr << "audit: " << e.what() << "\n";
    return kLedgerFailure;
  }
  std::cout << report.to_text();
  std::cout << report.to_key_values();
  return report.pass ? kOk : kLedgerFailure;
}

int cmd_sweep(const std::string& sweep_path, const std::string& out_dir) {
  json j;
  try {
    j = json::parse(slurp(sweep_path));
  } catch (const json::parse_error& e) {
    throw nsplast::ConfigError(std::string("sweep: invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("base") || !j.contains("grid"))
    throw nsplast::ConfigError("sweep: file must be {\"base\": <config>, \"grid\": {...}}");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "base" && it.key() != "grid")
      throw nsplast::ConfigError("sweep: unknown key '" + it.key() + "'");
  const json& base = j.at("base");
  const json& grid = j.at("grid");
  if (!base.is_object() || !grid.is_object() || grid.empty())
    throw nsplast::ConfigError("sweep: 'base' and 'grid' must be non-empty objects");

  std::vector<std::string> keys;
  std::vector<std::vector<json>> values;
  for (auto it = grid.begin(); it != grid.end(); ++it) {  // alphabetical, deterministic
    if (!it.value().is_array() || it.value().empty())
      throw nsplast::ConfigError("sweep: grid entry '" + it.key() +
                                 "' must be a non-empty array");
    keys.push_back(it.key());
    values.emplace_back(it.value().begin(), it.value().end());
  }

  // Cartesian product; parse every combination up front so config errors are
  // reported before anything runs.
  struct Job {
    nsplast::SimConfig config;
    std::vector<std::string> params;
    fs::path dir;
  };
  std::vector<Job> jobs;
  std::vector<std::size_t> index(keys.size(), 0);
  while (true) {
    json combo = base;
    std::vector<std::string> params;
    for (std::size_t i = 0; i < keys.size(); ++i) {
      combo[keys[i]] = values[i][index[i]];
      params.push_back(values[i][index[i]].dump());
    }
    char name[32];
    std::snprintf(name, sizeof name, "run_%04zu", jobs.size());
    try {
      jobs.push_back({nsplast::parse_config(combo.dump()), std::move(params),
                      fs::path(out_dir) / name});
    } catch (const nsplast::ConfigError& e) {
      throw nsplast::ConfigError(std::string(name) + ": " + e.what());
    }
    std::size_t i = 0;
    for (; i < keys.size(); ++i) {
      if (++index[i] < values[i].size()) break;
      index[i] = 0;
    }
    if (i == keys.size()) break;
  }

  std::vector<int> outcome(jobs.size(), -1);  // 0 pass, 1 ledger fail, 2 crashed
  std::vector<std::string> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  const unsigned n_threads =
      std::min<unsigned>(thread_cap(), static_cast<unsigned>(jobs.size()));
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1)) {
      try {
        outcome[i] = execute_run(jobs[i].config, jobs[i].dir).ledger.pass ? 0 : 1;
      } catch (const std::exception& e) {
        outcome[i] = 2;
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  fs::create_directories(out_dir);
  std::ostringstream idx;
  idx << "run,dir";
  for (const auto& k : keys) idx << "," << k;
  idx << ",ledger_pass\n";
  bool all_pass = true;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    idx << i << "," << jobs[i].dir.filename().string();
    for (const auto& p : jobs[i].params) idx << "," << p;
    idx << "," << (outcome[i] == 0 ? 1 : 0) << "\n";
    if (outcome[i] != 0) all_pass = false;
    if (outcome[i] == 2) std::cerr << jobs[i].dir.string() << ": " << errors[i] << "\n";
  }
  {
    std::ofstream os(fs::path(out_dir) / "sweep_index.csv", std::ios::binary);
    os << idx.str();
  }
  std::cout << jobs.size() << " runs, " << (all_pass ? "all ledgers pass" : "some FAILED")
            << " (threads: " << n_threads << ")\n";
  return all_pass ? kOk : kLedgerFailure;
}

int cmd_viscous_study(const std::string& config_path, std::vector<double> etas,
                      const std::string& out_file) {
  const nsplast::SimConfig config = nsplast::parse_config(slurp(config_path));
  if (config.viscosity != 0.0)
    throw nsplast::ConfigError("viscous-study: base config must have viscosity 0");
  nsplast::ViscousStudy study;
  try {
    study = nsplast::viscous_convergence(config, etas);
  } catch (const std::invalid_argument& e) {
    throw nsplast::ConfigError(e.what());
  }
  std::ostringstream os;
  os << "eta,sup_dev\n";
  os.precision(17);
  for (const auto& row : study.rows) os << row.viscosity << "," << row.deviation << "\n";
  os << "fitted_order=" << study.fitted_order << "\n";
  std::cout << os.str();
  if (!out_file.empty()) {
    std::ofstream f(out_file, std::ios::binary);
    if (!f) throw nsplast::ConfigError("cannot open '" + out_file + "' for writing");
    f << os.str();
  }
  return kOk;
}

int cmd_plot_data(const std::string& run_dir) {
  const fs::path dir(run_dir);
  const nsplast::RunManifest manifest = nsplast::read_manifest(dir / "manifest.json");
  const nsplast::SimConfig config = nsplast::parse_config(manifest.config_json);
  const nsplast::RunInfo info{config.dt, config.stride, config.viscosity,
                              config.localization, config.loading};
  const nsplast::Trajectory trajectory =
      nsplast::read_trajectory(dir / manifest.trajectory_path, info);

  // the four panels: strain(+plastic strain), total energy, stress, stress-strain
  auto write_csv = [&](const char* name, const char* header, auto&& row) {
    std::ostringstream os;
    os.precision(17);
    os << header << "\n";
    for (const auto& s : trajectory.samples) row(os, s);
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw std::runtime_error(std::string("cannot write ") + name);
    f << os.str();
  };
  using Sample = nsplast::TrajectorySample;
  write_csv("plot_strain.csv", "t,eps,eps_p", [](std::ostream& os, const Sample& s) {
    os << s.state.time << "," << s.state.strain << "," << s.state.plastic_strain << "\n";
  });
  write_csv("plot_energy.csv", "t,E_tot", [](std::ostream& os, const Sample& s) {
    os << s.state.time << "," << s.energy_total << "\n";
  });
  write_csv("plot_stress.csv", "t,sigma", [](std::ostream& os, const Sample& s) {
    os << s.state.time << "," << s.sigma << "\n";
  });
  write_csv("plot_stress_strain.csv", "eps,sigma", [](std::ostream& os, const Sample& s) {
    os << s.state.strain << "," << s.sigma << "\n";
  });
  std::cout << "wrote plot_strain.csv, plot_energy.csv, plot_stress.csv, "
               "plot_stress_strain.csv in "
            << dir.string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonsmooth 1-D elastoplasticity / thermoplasticity simulator"};
  app.set_version_flag("--version", std::string(nsplast::kVersion));
  app.require_subcommand(1);

  std::string config_path, out_dir, run_dir, out_file;
  std::vector<double> etas = {1e-1, 1e-2, 1e-3, 1e-4};

  auto* sim = app.add_subcommand("simulate", "run a config, write trajectory + manifest");
  sim->add_option("--config", config_path, "JSON run configuration")->required();
  sim->add_option("--out", out_dir, "output directory")->required();

  auto* audit = app.add_subcommand("audit", "re-derive and check the ledgers of a run");
  audit->add_option("dir", run_dir, "run directory (with manifest.json)")->required();

  auto* sweep = app.add_subcommand("sweep", "run a parameter grid concurrently");
  sweep->add_option("--config", config_path, "JSON sweep file {base, grid}")->required();
  sweep->add_option("--out", out_dir, "output directory")->required();

  auto* visc = app.add_subcommand("viscous-study", "rate-independent-limit study");
  visc->add_option("--config", config_path, "JSON run configuration (viscosity 0)")
      ->required();
  visc->add_option("--etas", etas, "viscosities, strictly decreasing");
  visc->add_option("--out", out_file, "also write the table to this file");

  auto* plot = app.add_subcommand("plot-data", "emit plottable series from a run");
  plot->add_option("dir", run_dir, "run directory (with manifest.json)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (sim->parsed()) return cmd_simulate(config_path, out_dir);
    if (audit->parsed()) return cmd_audit(run_dir);
    if (sweep->parsed()) return cmd_sweep(config_path, out_dir);
    if (visc->parsed()) return cmd_viscous_study(config_path, etas, out_file);
    if (plot->parsed()) return cmd_plot_data(run_dir);
  } catch (const nsplast::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}
