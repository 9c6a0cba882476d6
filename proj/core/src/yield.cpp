#include "nsplast/yield.hpp"

#include <cmath>
#include <stdexcept>

namespace nsplast {

namespace {

double sgn(double x) { return x < 0.0 ? -1.0 : 1.0; }

// Effective stress the |.| acts on: shifted by the kinematic back-stress when
// the regime carries one.
double effective_stress(const YieldCriterion& crit, const GeneralizedStress& z) {
  return has_kinematic_hardening(crit.kind) ? z.sigma - z.back_kin : z.sigma;
}

void check_parameters(const YieldCriterion& crit) {
  if (!(crit.sigma_y0 > 0.0))
    throw std::invalid_argument("yield: sigma_y0 must be > 0");
  if (crit.softening < 0.0)
    throw std::invalid_argument("yield: softening must be >= 0");
}

}  // namespace

std::string_view to_string(RegimeKind k) {
  switch (k) {
    case RegimeKind::Perfect: return "perfect";
    case RegimeKind::Isotropic: return "isotropic";
    case RegimeKind::Kinematic: return "kinematic";
    case RegimeKind::Mixed: return "mixed";
    case RegimeKind::ThermoPerfect: return "thermo_perfect";
    case RegimeKind::ThermoIsotropic: return "thermo_isotropic";
    case RegimeKind::ThermoKinematic: return "thermo_kinematic";
    case RegimeKind::ThermoMixed: return "thermo_mixed";
  }
  throw std::invalid_argument("unknown regime kind");
}

RegimeKind regime_from_string(std::string_view name) {
  for (RegimeKind k :
       {RegimeKind::Perfect, RegimeKind::Isotropic, RegimeKind::Kinematic,
        RegimeKind::Mixed, RegimeKind::ThermoPerfect, RegimeKind::ThermoIsotropic,
        RegimeKind::ThermoKinematic, RegimeKind::ThermoMixed}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown regime '" + std::string(name) + "'");
}

double YieldCriterion::flow_stress(double temperature) const {
  check_parameters(*this);
  if (!is_thermal(kind)) return sigma_y0;
  if (!(temperature > 0.0))
    throw std::invalid_argument("yield: thermal regime requires temperature > 0");
  const double sy = sigma_y0 * (1.0 - softening * (temperature - t_ref));
  if (!(sy > 0.0))
    throw std::invalid_argument("yield: flow stress collapsed (sigma_Y(T) <= 0)");
  return sy;
}

double evaluate_yield(const YieldCriterion& crit, const GeneralizedStress& z) {
  const double sy = crit.flow_stress(z.temperature);
  double f = std::abs(effective_stress(crit, z)) - sy;
  if (has_isotropic_hardening(crit.kind)) f += z.back_iso;
  return f;
}

YieldGradient yield_gradient(const YieldCriterion& crit, const GeneralizedStress& z) {
  check_parameters(crit);
  const double s = effective_stress(crit, z);
  if (s == 0.0)
    throw std::domain_error("yield_gradient: |.| kink (effective stress is zero)");
  YieldGradient g;
  g.d_sigma = sgn(s);
  if (has_isotropic_hardening(crit.kind)) g.d_back_iso = 1.0;
  if (has_kinematic_hardening(crit.kind)) g.d_back_kin = -g.d_sigma;
  if (is_thermal(crit.kind)) g.d_temperature = crit.sigma_y0 * crit.softening;
  return g;
}

ReturnMapResult project_return_map(const YieldCriterion& crit,
                                   const GeneralizedStress& trial,
                                   const Moduli& moduli) {
  if (!(moduli.young > 0.0))
    throw std::invalid_argument("return map: elastic modulus must be > 0");
  if (moduli.iso < 0.0 || moduli.kin < 0.0)
    throw std::invalid_argument("return map: hardening moduli must be >= 0");

  const double f_trial = evaluate_yield(crit, trial);
  if (f_trial <= kYieldTol) return {FlowResult{}, trial};

  // An elastic predictor never moves beta_i, so feasible trials keep
  // beta_i <= sigma_Y(T); beyond that the projection would land on the wedge
  // apex, which the face formula below cannot represent.
  if (has_isotropic_hardening(crit.kind) &&
      trial.back_iso > crit.flow_stress(trial.temperature) + kYieldTol)
    throw std::invalid_argument(
        "return map: trial not reachable by an elastic predictor "
        "(isotropic back-stress exceeds the flow stress)");

  const YieldGradient g = yield_gradient(crit, trial);
  const double curvature = moduli.young * g.d_sigma * g.d_sigma +
                           moduli.iso * g.d_back_iso * g.d_back_iso +
                           moduli.kin * g.d_back_kin * g.d_back_kin;
  const double lambda = f_trial / curvature;

  FlowResult flow;
  flow.lambda = lambda;
  flow.dir_plastic = g.d_sigma;
  flow.dir_iso = g.d_back_iso;
  flow.dir_kin = g.d_back_kin;
  flow.dir_entropy = g.d_temperature;

  GeneralizedStress corrected = trial;
  corrected.sigma -= moduli.young * lambda * g.d_sigma;
  corrected.back_iso -= moduli.iso * lambda * g.d_back_iso;
  corrected.back_kin -= moduli.kin * lambda * g.d_back_kin;
  return {flow, corrected};
}

double dissipation(const YieldCriterion& crit, const GeneralizedStress& z,
                   const FlowResult& flow) {
  check_parameters(crit);
  return flow.lambda * (z.sigma * flow.dir_plastic + z.back_iso * flow.dir_iso +
                        z.back_kin * flow.dir_kin);
}

FlowResult viscoplastic_flow(const YieldCriterion& crit, const GeneralizedStress& z,
                             double viscosity) {
  if (!(viscosity > 0.0))
    throw std::invalid_argument("viscoplastic flow: viscosity must be > 0");
  const double f = evaluate_yield(crit, z);
  if (f <= 0.0) return {};

  const YieldGradient g = yield_gradient(crit, z);
  FlowResult flow;
  flow.lambda = f / viscosity;  // a rate, not an increment
  flow.dir_plastic = g.d_sigma;
  flow.dir_iso = g.d_back_iso;
  flow.dir_kin = g.d_back_kin;
  flow.dir_entropy = g.d_temperature;
  return flow;
}

ReturnMapResult viscoplastic_step(const YieldCriterion& crit,
                                  const GeneralizedStress& trial, double viscosity,
                                  double dt, const Moduli& moduli) {
  if (!(viscosity > 0.0))
    throw std::invalid_argument("viscoplastic step: viscosity must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("viscoplastic step: dt must be > 0");
  if (!(moduli.young > 0.0))
    throw std::invalid_argument("viscoplastic step: elastic modulus must be > 0");

  const double f_trial = evaluate_yield(crit, trial);
  if (f_trial <= kYieldTol) return {FlowResult{}, trial};

  const YieldGradient g = yield_gradient(crit, trial);
  const double curvature = moduli.young * g.d_sigma * g.d_sigma +
                           moduli.iso * g.d_back_iso * g.d_back_iso +
                           moduli.kin * g.d_back_kin * g.d_back_kin;
  // backward Euler of lambda_dot = f/viscosity; f stays positive, so no clamp
  const double lambda = f_trial / (curvature + viscosity / dt);

  FlowResult flow;
  flow.lambda = lambda;
  flow.dir_plastic = g.d_sigma;
  flow.dir_iso = g.d_back_iso;
  flow.dir_kin = g.d_back_kin;
  flow.dir_entropy = g.d_temperature;

  GeneralizedStress corrected = trial;
  corrected.sigma -= moduli.young * lambda * g.d_sigma;
  corrected.back_iso -= moduli.iso * lambda * g.d_back_iso;
  corrected.back_kin -= moduli.kin * lambda * g.d_back_kin;
  return {flow, corrected};
}

KktReport kkt_check(const YieldCriterion& crit, const GeneralizedStress& corrected,
                    const FlowResult& flow, double tol) {
  KktReport report;
  const double f = evaluate_yield(crit, corrected);

  report.multiplier_residual = std::max(0.0, -flow.lambda);
  report.admissibility_residual = std::max(0.0, f);
  report.complementarity_residual = std::abs(flow.lambda * f);

  if (report.multiplier_residual > tol)
    report.violations.push_back("multiplier: lambda < 0 by " +
                                std::to_string(report.multiplier_residual));
  if (report.admissibility_residual > tol)
    report.violations.push_back("admissibility: f > 0 by " +
                                std::to_string(report.admissibility_residual));
  if (report.complementarity_residual > tol)
    report.violations.push_back("complementarity: |lambda*f| = " +
                                std::to_string(report.complementarity_residual));
  report.ok = report.violations.empty();
  return report;
}

}  // namespace nsplast
