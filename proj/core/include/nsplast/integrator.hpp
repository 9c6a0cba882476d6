#pragma once

#include <optional>
#include <vector>

#include "nsplast/loading.hpp"
#include "nsplast/material.hpp"

namespace nsplast {

enum class EventLocalization {
  PerStep,   ///< correct at the end of the step that produced the overshoot
  Bisection  ///< bisect the elastic sub-step to the yield crossing first
};

std::string_view to_string(EventLocalization mode);
EventLocalization localization_from_string(std::string_view name);

struct SimConfig {
  MaterialModel model;
  MaterialState initial;
  LoadingProgram loading;
  double dt = 1e-4;
  double t_end = 1.0;
  EventLocalization localization = EventLocalization::PerStep;
  int stride = 1;          ///< record every stride-th step
  double viscosity = 0.0;  ///< > 0 switches the corrector to the regularized flow

  /// Throws std::invalid_argument on bad parameters, including violation of
  /// the explicit stability bound dt * sqrt(E/m) < 2.
  void validate() const;
};

/// One plastic jump: multiplier, internal-variable increments, entropy
/// bookkeeping and the exact energy dissipated by the correction.
struct PlasticEvent {
  double time = 0.0;
  double lambda = 0.0;
  double d_plastic_strain = 0.0;
  double d_hardening_iso = 0.0;
  double d_hardening_kin = 0.0;
  double d_entropy_elastic = 0.0;
  double d_entropy_plastic = 0.0;
  double dissipated = 0.0;       ///< energy drop of the correction, >= 0
  double sigma = 0.0;            ///< stress after the correction
  double momentum_before = 0.0;  ///< m*v entering the correction
  double momentum_after = 0.0;   ///< m*v leaving it (the corrector never touches v)
};

struct TrajectorySample {
  MaterialState state;
  double sigma = 0.0;
  double back_iso = 0.0;
  double back_kin = 0.0;
  double energy_total = 0.0;
  double dissipated_cum = 0.0;
  double production_cum = 0.0;  ///< cumulative entropy production over events
};

/// Run parameters a trajectory needs to carry so it can be audited after the
/// samples are re-read from disk.
struct RunInfo {
  double dt = 0.0;
  int stride = 1;
  double viscosity = 0.0;
  EventLocalization localization = EventLocalization::PerStep;
  LoadingProgram loading;
};

struct Trajectory {
  RunInfo info;
  std::vector<TrajectorySample> samples;
  std::vector<PlasticEvent> events;
};

/// Position-Verlet sub-step of the smooth dynamics m*eps_dd + E*(eps - eps_p) = F(t)
/// with frozen internal variables (symplectic, second order). Prescribed-strain
/// loading instead moves eps along the table and backward-differences the rate.
MaterialState elastic_trial_step(const MaterialModel& model, const MaterialState& state,
                                 double dt, const LoadingProgram& loading);

struct StepOptions {
  EventLocalization localization = EventLocalization::PerStep;
  double viscosity = 0.0;
};

struct StepResult {
  MaterialState state;
  std::optional<PlasticEvent> event;
};

/// One full predictor/corrector step.
StepResult step(const MaterialModel& model, const MaterialState& state, double dt,
                const LoadingProgram& loading, const StepOptions& options = {});

Trajectory simulate(const SimConfig& config);

}  // namespace nsplast
