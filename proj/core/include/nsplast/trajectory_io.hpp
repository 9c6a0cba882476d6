#pragma once

#include <filesystem>
#include <string>

#include "nsplast/analysis.hpp"

namespace nsplast {

/// Events file sitting next to a trajectory CSV ("runs/a.csv" -> "runs/a.events.csv").
std::filesystem::path events_path_for(const std::filesystem::path& csv_path);

/// Writes the sample CSV (header
/// t,eps,v,eps_p,xi_i,xi_k,sigma,beta_i,beta_k,E_tot,D_cum,S_e,S_p,gamma_cum)
/// and the sibling events CSV. Values carry full double precision (17
/// significant digits), so rereading reproduces the doubles bit-exactly and
/// repeated runs of the same config are byte-identical.
void write_trajectory(const Trajectory& trajectory, const std::filesystem::path& csv_path);

/// Rereads a trajectory written by write_trajectory. The CSVs do not carry the
/// run parameters; the caller supplies them via `info`.
Trajectory read_trajectory(const std::filesystem::path& csv_path, const RunInfo& info);

struct RunManifest {
  std::string config_json;      ///< fully resolved echo; reparses to the same run
  std::string trajectory_path;  ///< relative to the manifest
  std::string events_path;
  std::string tool_version;
  double wall_seconds = 0.0;
  LedgerReport ledger;
};

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path);

}  // namespace nsplast
