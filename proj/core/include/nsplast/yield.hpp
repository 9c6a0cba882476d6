#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace nsplast {

/// Rheological regime: selects which internal variables enter the yield
/// criterion and whether the flow stress is temperature sensitive.
enum class RegimeKind {
  Perfect,
  Isotropic,
  Kinematic,
  Mixed,  // isotropic + kinematic hardening combined
  ThermoPerfect,
  ThermoIsotropic,
  ThermoKinematic,
  ThermoMixed,
};

constexpr bool is_thermal(RegimeKind k) {
  return k == RegimeKind::ThermoPerfect || k == RegimeKind::ThermoIsotropic ||
         k == RegimeKind::ThermoKinematic || k == RegimeKind::ThermoMixed;
}
constexpr bool has_isotropic_hardening(RegimeKind k) {
  return k == RegimeKind::Isotropic || k == RegimeKind::Mixed ||
         k == RegimeKind::ThermoIsotropic || k == RegimeKind::ThermoMixed;
}
constexpr bool has_kinematic_hardening(RegimeKind k) {
  return k == RegimeKind::Kinematic || k == RegimeKind::Mixed ||
         k == RegimeKind::ThermoKinematic || k == RegimeKind::ThermoMixed;
}

std::string_view to_string(RegimeKind k);
RegimeKind regime_from_string(std::string_view name);  // throws std::invalid_argument

/// Shared admissibility / complementarity tolerance, in stress units.
inline constexpr double kYieldTol = 1e-9;

/// Yield criterion f(z) <= 0 with elastic domain
///   f = |sigma - beta_k|  (+ beta_i)  - sigma_Y(T),
/// where the kinematic shift and the isotropic term are active only for the
/// regimes that carry them, and sigma_Y(T) = sigma_y0 * (1 - softening*(T - t_ref))
/// for thermal regimes (sigma_y0 otherwise).
struct YieldCriterion {
  RegimeKind kind = RegimeKind::Perfect;
  double sigma_y0 = 0.0;   ///< initial yield stress, > 0
  double softening = 0.0;  ///< flow-stress temperature sensitivity, >= 0
  double t_ref = 0.0;      ///< reference temperature of the flow-stress law

  /// Current flow stress; throws std::invalid_argument if the surface has
  /// collapsed (sigma_Y(T) <= 0).
  double flow_stress(double temperature) const;
};

/// Generalized stress z = (sigma, beta_i, beta_k[, T]).
struct GeneralizedStress {
  double sigma = 0.0;
  double back_iso = 0.0;     ///< isotropic back-stress (conjugate of xi_i)
  double back_kin = 0.0;     ///< kinematic back-stress (conjugate of xi_k)
  double temperature = 0.0;  ///< absolute temperature; > 0 for thermal regimes
};

/// Multiplier and flow direction of one plastic correction. The direction
/// components are the yield-gradient entries at the event, so the internal
/// variable increments are lambda * dir_*.
struct FlowResult {
  double lambda = 0.0;       ///< plastic multiplier; 0 exactly when the trial was admissible
  double dir_plastic = 0.0;  ///< df/dsigma (+-1)
  double dir_iso = 0.0;      ///< df/dbeta_i
  double dir_kin = 0.0;      ///< df/dbeta_k
  double dir_entropy = 0.0;  ///< df/dT (drives the plastic entropy jump)
};

struct YieldGradient {
  double d_sigma = 0.0;
  double d_back_iso = 0.0;
  double d_back_kin = 0.0;
  double d_temperature = 0.0;
};

/// Elastic and hardening moduli defining the return-map metric diag(1/E, 1/K, 1/H).
struct Moduli {
  double young = 0.0;  ///< E > 0
  double iso = 0.0;    ///< K >= 0
  double kin = 0.0;    ///< H >= 0
};

double evaluate_yield(const YieldCriterion& crit, const GeneralizedStress& z);

/// Gradient of f at z. Throws std::domain_error exactly at the |.| kink
/// (sigma - beta_k = 0 for kinematic shifts, sigma = 0 otherwise).
YieldGradient yield_gradient(const YieldCriterion& crit, const GeneralizedStress& z);

struct ReturnMapResult {
  FlowResult flow;
  GeneralizedStress stress;  ///< corrected state; temperature unchanged
};

/// Closest-point projection of an elastic-predictor trial state onto the
/// elastic domain, in the energy metric. Admissible trials (f <= tol) return
/// lambda = 0 and the trial unchanged. Trials with back_iso beyond the flow
/// stress are not reachable by an elastic predictor and are rejected.
ReturnMapResult project_return_map(const YieldCriterion& crit,
                                   const GeneralizedStress& trial,
                                   const Moduli& moduli);

/// Dissipation pairing <z, lambda * grad f> over the mechanical components.
/// For the perfect regime this is lambda * |sigma|.
double dissipation(const YieldCriterion& crit, const GeneralizedStress& z,
                   const FlowResult& flow);

/// Penalty-regularized flow rate (Perzyna): lambda_dot = max(0, f(z)) / viscosity.
/// Returns a zero FlowResult for admissible z.
FlowResult viscoplastic_flow(const YieldCriterion& crit, const GeneralizedStress& z,
                             double viscosity);

/// One implicit step of the regularized flow applied to a trial state:
/// lambda = f(trial) / (C + viscosity/dt) with C the return-map curvature.
/// Recovers project_return_map as viscosity -> 0.
ReturnMapResult viscoplastic_step(const YieldCriterion& crit,
                                  const GeneralizedStress& trial, double viscosity,
                                  double dt, const Moduli& moduli);

struct KktReport {
  bool ok = true;
  double multiplier_residual = 0.0;      ///< max(0, -lambda)
  double admissibility_residual = 0.0;   ///< max(0, f(z))
  double complementarity_residual = 0.0; ///< |lambda * f(z)|
  std::vector<std::string> violations;   ///< one entry per violated clause
};

/// Discrete Karush-Kuhn-Tucker check for a corrected state.
KktReport kkt_check(const YieldCriterion& crit, const GeneralizedStress& corrected,
                    const FlowResult& flow, double tol = kYieldTol);

}  // namespace nsplast
