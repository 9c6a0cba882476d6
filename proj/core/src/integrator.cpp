#include "nsplast/integrator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nsplast {

namespace {

// Stored + hardening potential; the part of the energy a correction can drop.
double potential_energy(const MaterialModel& model, const MaterialState& state) {
  const double e = state.elastic_strain();
  return 0.5 * model.young * e * e +
         0.5 * model.iso_modulus * state.hardening_iso * state.hardening_iso +
         0.5 * model.kin_modulus * state.hardening_kin * state.hardening_kin;
}

}  // namespace

std::string_view to_string(EventLocalization mode) {
  switch (mode) {
    case EventLocalization::PerStep: return "per_step";
    case EventLocalization::Bisection: return "bisection";
  }
  throw std::invalid_argument("unknown event localization");
}

EventLocalization localization_from_string(std::string_view name) {
  if (name == "per_step") return EventLocalization::PerStep;
  if (name == "bisection") return EventLocalization::Bisection;
  throw std::invalid_argument("unknown event localization '" + std::string(name) + "'");
}

void SimConfig::validate() const {
  model.validate();
  loading.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("config: dt must be > 0");
  if (!(t_end > initial.time))
    throw std::invalid_argument("config: t_end must exceed the start time");
  const double cfl = dt * std::sqrt(model.young / model.mass);
  if (!(cfl < 2.0))
    throw std::invalid_argument("config: stability bound dt*sqrt(E/m) < 2 violated (dt = " +
                                std::to_string(dt) + " gives " + std::to_string(cfl) + ")");
  if (stride < 1) throw std::invalid_argument("config: stride must be >= 1");
  if (viscosity < 0.0) throw std::invalid_argument("config: viscosity must be >= 0");
  if (loading.kind == LoadingProgram::Kind::PrescribedStrain &&
      initial.strain != loading.strain_at(initial.time))
    throw std::invalid_argument(
        "config: initial strain must equal the strain table value at the start time");
}

MaterialState elastic_trial_step(const MaterialModel& model, const MaterialState& state,
                                 double dt, const LoadingProgram& loading) {
  MaterialState next = state;
  next.time = state.time + dt;

  if (loading.kind == LoadingProgram::Kind::PrescribedStrain) {
    next.strain = loading.strain_at(next.time);
    next.strain_rate = (next.strain - state.strain) / dt;
    return next;
  }

  // position Verlet: drift half, kick with the midpoint force, drift half
  const double half = 0.5 * dt;
  const double strain_half = state.strain + half * state.strain_rate;
  double force = -model.young * (strain_half - state.plastic_strain);
  if (loading.kind == LoadingProgram::Kind::ExternalForce)
    force += loading.force(state.time + half);
  next.strain_rate = state.strain_rate + dt * force / model.mass;
  next.strain = strain_half + half * next.strain_rate;
  return next;
}

StepResult step(const MaterialModel& model, const MaterialState& state, double dt,
                const LoadingProgram& loading, const StepOptions& options) {
  const YieldCriterion crit = model.criterion();
  const Moduli moduli = model.moduli();

  MaterialState trial = elastic_trial_step(model, state, dt, loading);
  GeneralizedStress z_trial = stress(model, trial);
  double event_time = trial.time;

  if (evaluate_yield(crit, z_trial) <= kYieldTol) return {trial, std::nullopt};

  if (options.localization == EventLocalization::Bisection &&
      evaluate_yield(crit, stress(model, state)) < -kYieldTol) {
    // Locate the yield crossing inside the step and split the elastic motion
    // there, so the recorded event time resolves the crossing to ~dt*1e-6.
    double lo = 0.0, hi = dt;
    for (int i = 0; i < 200 && hi - lo > dt * 1e-6; ++i) {
      const double mid = 0.5 * (lo + hi);
      const MaterialState probe = elastic_trial_step(model, state, mid, loading);
      (evaluate_yield(crit, stress(model, probe)) > 0.0 ? hi : lo) = mid;
    }
    if (lo > 0.0) {
      const MaterialState at_crossing = elastic_trial_step(model, state, lo, loading);
      const MaterialState rest = elastic_trial_step(model, at_crossing, dt - lo, loading);
      const GeneralizedStress z_rest = stress(model, rest);
      if (evaluate_yield(crit, z_rest) <= kYieldTol) return {rest, std::nullopt};
      trial = rest;
      z_trial = z_rest;
      event_time = at_crossing.time;
    }
  }

  const ReturnMapResult rm = options.viscosity > 0.0
                                 ? viscoplastic_step(crit, z_trial, options.viscosity,
                                                     dt, moduli)
                                 : project_return_map(crit, z_trial, moduli);
  const FlowResult& flow = rm.flow;

  MaterialState post = trial;  // the correction never touches strain or velocity
  post.plastic_strain += flow.lambda * flow.dir_plastic;
  post.hardening_iso += flow.lambda * flow.dir_iso;
  post.hardening_kin += flow.lambda * flow.dir_kin;

  PlasticEvent event;
  event.time = event_time;
  event.lambda = flow.lambda;
  event.d_plastic_strain = flow.lambda * flow.dir_plastic;
  event.d_hardening_iso = flow.lambda * flow.dir_iso;
  event.d_hardening_kin = flow.lambda * flow.dir_kin;
  // Exact energy drop of the correction at frozen strain and velocity. This is
  // the discrete jump lambda*<z_mid, grad f>, which exceeds the continuous-rate
  // value lambda*sigma_Y by the second-order term 0.5*lambda^2*C.
  event.dissipated = potential_energy(model, trial) - potential_energy(model, post);
  event.sigma = rm.stress.sigma;
  event.momentum_before = model.mass * trial.strain_rate;
  event.momentum_after = model.mass * post.strain_rate;

  if (is_thermal(model.regime)) {
    // Entropy jumps evaluated at the midpoint stress so that T*dS_e equals the
    // recorded energy drop and the thermal total energy stays conserved.
    GeneralizedStress z_mid;
    z_mid.sigma = 0.5 * (z_trial.sigma + rm.stress.sigma);
    z_mid.back_iso = 0.5 * (z_trial.back_iso + rm.stress.back_iso);
    z_mid.back_kin = 0.5 * (z_trial.back_kin + rm.stress.back_kin);
    z_mid.temperature = z_trial.temperature;
    const EntropyJumps jumps = entropy_jumps(model, z_mid, flow);
    entropy_production(jumps.elastic, jumps.plastic);  // second-law guard
    post.entropy_elastic += jumps.elastic;
    post.entropy_plastic += jumps.plastic;
    event.d_entropy_elastic = jumps.elastic;
    event.d_entropy_plastic = jumps.plastic;
  }

  return {post, event};
}

Trajectory simulate(const SimConfig& config) {
  config.validate();

  Trajectory trajectory;
  trajectory.info = {config.dt, config.stride, config.viscosity, config.localization,
                     config.loading};

  const double t0 = config.initial.time;
  const long n_steps = std::lround((config.t_end - t0) / config.dt);
  if (n_steps < 1)
    throw std::invalid_argument("simulate: run shorter than one step");

  MaterialState state = config.initial;
  if (config.loading.kind == LoadingProgram::Kind::PrescribedStrain) {
    state.strain = config.loading.strain_at(t0);
    state.strain_rate =
        (config.loading.strain_at(t0 + config.dt) - state.strain) / config.dt;
  }

  const StepOptions options{config.localization, config.viscosity};
  double dissipated_cum = 0.0;
  double production_cum = 0.0;

  auto record = [&](const MaterialState& st) {
    TrajectorySample sample;
    sample.state = st;
    const GeneralizedStress z = stress(config.model, st);
    sample.sigma = z.sigma;
    sample.back_iso = z.back_iso;
    sample.back_kin = z.back_kin;
    sample.energy_total = total_energy(config.model, st);
    sample.dissipated_cum = dissipated_cum;
    sample.production_cum = production_cum;
    trajectory.samples.push_back(sample);
  };
  record(state);

  for (long k = 1; k <= n_steps; ++k) {
    StepResult result = step(config.model, state, config.dt, config.loading, options);
    state = result.state;
    state.time = t0 + static_cast<double>(k) * config.dt;  // exact grid, no drift
    if (result.event) {
      dissipated_cum += result.event->dissipated;
      production_cum += result.event->d_entropy_elastic + result.event->d_entropy_plastic;
      trajectory.events.push_back(*result.event);
    }
    if (k % config.stride == 0 || k == n_steps) record(state);
  }
  return trajectory;
}

}  // namespace nsplast
