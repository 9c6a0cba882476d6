#include "nsplast/material.hpp"

#include <cmath>
#include <stdexcept>

namespace nsplast {

YieldCriterion MaterialModel::criterion() const {
  return {regime, sigma_y0, softening, t_ref};
}

Moduli MaterialModel::moduli() const { return {young, iso_modulus, kin_modulus}; }

void MaterialModel::validate() const {
  if (!(young > 0.0)) throw std::invalid_argument("model: E must be > 0");
  if (!(mass > 0.0)) throw std::invalid_argument("model: m must be > 0");
  if (!(sigma_y0 > 0.0)) throw std::invalid_argument("model: sigma_y0 must be > 0");
  if (iso_modulus < 0.0) throw std::invalid_argument("model: K must be >= 0");
  if (kin_modulus < 0.0) throw std::invalid_argument("model: H must be >= 0");
  if (has_isotropic_hardening(regime) != (iso_modulus > 0.0))
    throw std::invalid_argument("model: K > 0 exactly for isotropic-hardening regimes");
  if (has_kinematic_hardening(regime) != (kin_modulus > 0.0))
    throw std::invalid_argument("model: H > 0 exactly for kinematic-hardening regimes");
  if (is_thermal(regime)) {
    if (!(temperature > 0.0))
      throw std::invalid_argument("model: thermal regime requires temperature > 0");
    if (softening < 0.0) throw std::invalid_argument("model: softening must be >= 0");
    criterion().flow_stress(temperature);  // rejects a collapsed surface
  } else if (softening != 0.0 || temperature != 0.0 || t_ref != 0.0) {
    throw std::invalid_argument("model: thermal parameters set on a non-thermal regime");
  }
}

GeneralizedStress stress(const MaterialModel& model, const MaterialState& state) {
  GeneralizedStress z;
  z.sigma = model.young * state.elastic_strain();
  z.back_iso = -model.iso_modulus * state.hardening_iso;
  z.back_kin = -model.kin_modulus * state.hardening_kin;
  z.temperature = is_thermal(model.regime) ? model.temperature : 0.0;
  return z;
}

double mechanical_energy(const MaterialModel& model, const MaterialState& state) {
  const double e = state.elastic_strain();
  return 0.5 * model.mass * state.strain_rate * state.strain_rate +
         0.5 * model.young * e * e +
         0.5 * model.iso_modulus * state.hardening_iso * state.hardening_iso +
         0.5 * model.kin_modulus * state.hardening_kin * state.hardening_kin;
}

double total_energy(const MaterialModel& model, const MaterialState& state) {
  double e = mechanical_energy(model, state);
  if (is_thermal(model.regime)) e += model.temperature * state.entropy_elastic;
  return e;
}

double lagrangian(const MaterialModel& model, const MaterialState& state) {
  const double e = state.elastic_strain();
  const double potential =
      0.5 * model.young * e * e +
      0.5 * model.iso_modulus * state.hardening_iso * state.hardening_iso +
      0.5 * model.kin_modulus * state.hardening_kin * state.hardening_kin;
  return 0.5 * model.mass * state.strain_rate * state.strain_rate - potential;
}

EntropyJumps entropy_jumps(const MaterialModel& model, const GeneralizedStress& z,
                           const FlowResult& flow) {
  if (!is_thermal(model.regime))
    throw std::invalid_argument("entropy_jumps: regime is not thermal");
  if (!(z.temperature > 0.0))
    throw std::invalid_argument("entropy_jumps: temperature must be > 0");
  EntropyJumps jumps;
  jumps.elastic = dissipation(model.criterion(), z, flow) / z.temperature;
  jumps.plastic = flow.lambda * flow.dir_entropy;
  return jumps;
}

double entropy_production(double d_entropy_elastic, double d_entropy_plastic) {
  const double gamma = d_entropy_elastic + d_entropy_plastic;
  if (gamma < -kYieldTol)
    throw std::runtime_error("entropy production negative (second-law violation): gamma = " +
                             std::to_string(gamma));
  return gamma;
}

}  // namespace nsplast
