#pragma once

#include "nsplast/yield.hpp"

namespace nsplast {

/// Parameters of the one-dimensional rheological element: a mass attached to
/// an elastic spring in series with a plastic (friction) element, optionally
/// hardened and/or thermally softened.
struct MaterialModel {
  RegimeKind regime = RegimeKind::Perfect;
  double young = 0.0;        ///< elastic modulus E, > 0
  double mass = 0.0;         ///< inertia m, > 0
  double sigma_y0 = 0.0;     ///< initial yield stress, > 0
  double iso_modulus = 0.0;  ///< isotropic hardening modulus K (> 0 iff regime has it)
  double kin_modulus = 0.0;  ///< kinematic hardening modulus H (> 0 iff regime has it)
  double softening = 0.0;    ///< thermal softening of the yield stress, >= 0
  double t_ref = 0.0;        ///< reference temperature of the flow-stress law
  double temperature = 0.0;  ///< fixed ambient temperature, > 0 for thermal regimes

  YieldCriterion criterion() const;
  Moduli moduli() const;
  void validate() const;  // throws std::invalid_argument
};

/// State of the material point at one instant. The elastic strain is
/// strain - plastic_strain; the plastic strain, hardening variables and the
/// entropies change only at plastic events.
struct MaterialState {
  double time = 0.0;
  double strain = 0.0;
  double strain_rate = 0.0;
  double plastic_strain = 0.0;
  double hardening_iso = 0.0;    ///< xi_i, conjugate of beta_i = -K*xi_i
  double hardening_kin = 0.0;    ///< xi_k, conjugate of beta_k = -H*xi_k
  double entropy_elastic = 0.0;  ///< S_e (thermal regimes)
  double entropy_plastic = 0.0;  ///< S_p (thermal regimes)

  double elastic_strain() const { return strain - plastic_strain; }
  double entropy() const { return entropy_elastic + entropy_plastic; }
};

/// Generalized stress conjugate to the internal variables at this state.
GeneralizedStress stress(const MaterialModel& model, const MaterialState& state);

/// Kinetic + stored elastic + hardening energy; thermal regimes add
/// temperature * S_e (internal-energy convention at fixed ambient temperature).
double total_energy(const MaterialModel& model, const MaterialState& state);

/// Kinetic + stored elastic + hardening energy, without the entropy term.
double mechanical_energy(const MaterialModel& model, const MaterialState& state);

/// Kinetic minus potential energy; for thermal regimes the potential is the
/// Helmholtz free energy, which at fixed ambient temperature reduces to the
/// mechanical potential.
double lagrangian(const MaterialModel& model, const MaterialState& state);

struct EntropyJumps {
  double elastic = 0.0;  ///< jump of S_e
  double plastic = 0.0;  ///< jump of S_p
};

/// Entropy jumps of one plastic event at generalized stress z:
///   dS_e = (lambda/T) * <z, grad_mech f>,   dS_p = lambda * df/dT.
/// Thermal regimes only; requires z.temperature > 0.
EntropyJumps entropy_jumps(const MaterialModel& model, const GeneralizedStress& z,
                           const FlowResult& flow);

/// Entropy production gamma = dS_e + dS_p of one event. Throws
/// std::runtime_error if gamma < -kYieldTol (second-law violation).
double entropy_production(double d_entropy_elastic, double d_entropy_plastic);

}  // namespace nsplast
