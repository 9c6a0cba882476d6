#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nsplast/integrator.hpp"

namespace nsplast {

struct Tolerances {
  double energy_rel = 1e-6;         ///< energy-balance residual, relative
  double admissibility = kYieldTol; ///< max f over samples
  double kkt = kYieldTol;           ///< per-event complementarity
  double momentum_rel = 1e-12;      ///< per-event momentum jump, relative
  double entropy = kYieldTol;       ///< second-law slack per event
  double consistency = 1e-9;        ///< recorded vs recomputed ledger columns, relative
};

struct LedgerClause {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool applicable = true;
  bool pass = true;
  std::string detail;
};

struct LedgerReport {
  std::vector<LedgerClause> clauses;
  bool pass = true;

  // summary residuals, mirroring the clauses
  double energy_residual = 0.0;
  double admissibility_violation = 0.0;
  double kkt_residual = 0.0;
  double min_event_dissipation = 0.0;
  double min_event_production = 0.0;
  double momentum_residual = 0.0;

  const LedgerClause* find(std::string_view name) const;
  std::string to_text() const;
  std::string to_key_values() const;  ///< machine-readable `key=value` lines
};

/// Re-derives every ledger quantity (energies, dissipation, work input,
/// momentum predictions, entropy) from the raw samples and cross-checks the
/// recorded columns against them. Never throws on a bad trajectory: failures
/// are report entries. Requires stride-1 recordings (reported as a failed
/// "sampling" clause otherwise).
LedgerReport audit_trajectory(const Trajectory& trajectory, const MaterialModel& model,
                              const Tolerances& tolerances = {});

struct Hysteresis {
  std::vector<std::pair<double, double>> loop;  ///< (eps, sigma) samples
  double elastic_slope = 0.0;
  double plastic_slope = 0.0;
  int elastic_segments = 0;
  int plastic_segments = 0;
};

/// Extracts the stress-strain loop of a cyclic run and the per-branch tangent
/// slopes (finite differences between consecutive samples; the first segment
/// of each plastic run straddles the elastic/plastic transition and is
/// excluded). Throws std::runtime_error if the strain never reverses.
Hysteresis hysteresis(const Trajectory& trajectory);

struct ViscousRow {
  double viscosity = 0.0;
  double deviation = 0.0;  ///< sup-norm plastic-strain deviation from the eta=0 run
};

struct ViscousStudy {
  std::vector<ViscousRow> rows;
  double fitted_order = 0.0;  ///< least-squares slope of log(dev) vs log(eta)
};

/// Reruns `base` (which must have viscosity = 0) under each viscosity and
/// measures the deviation from the rate-independent limit. Viscosities must
/// be positive and strictly decreasing.
ViscousStudy viscous_convergence(const SimConfig& base, std::span<const double> viscosities);

}  // namespace nsplast
