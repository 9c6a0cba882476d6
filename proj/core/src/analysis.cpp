#include "nsplast/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace nsplast {

namespace {

double potential_energy(const MaterialModel& model, const MaterialState& state) {
  const double e = state.elastic_strain();
  return 0.5 * model.young * e * e +
         0.5 * model.iso_modulus * state.hardening_iso * state.hardening_iso +
         0.5 * model.kin_modulus * state.hardening_kin * state.hardening_kin;
}

double rel(double residual, double scale) {
  return residual / std::max(scale, 1e-30);
}

std::string format_clause(const LedgerClause& c) {
  std::ostringstream os;
  os << "  [" << (c.applicable ? (c.pass ? "PASS" : "FAIL") : " -- ") << "] " << c.name;
  for (std::size_t i = c.name.size(); i < 22; ++i) os << ' ';
  if (c.applicable) {
    os.setf(std::ios::scientific);
    os.precision(3);
    os << " residual=" << c.residual << " tol=" << c.tolerance;
  } else {
    os << " (not applicable)";
  }
  if (!c.detail.empty()) os << "  " << c.detail;
  return os.str();
}

std::string kv_name(std::string name) {
  for (char& ch : name)
    if (ch == '-') ch = '_';
  return name;
}

}  // namespace

const LedgerClause* LedgerReport::find(std::string_view name) const {
  for (const auto& c : clauses)
    if (c.name == name) return &c;
  return nullptr;
}

std::string LedgerReport::to_text() const {
  std::ostringstream os;
  os << "ledger: " << (pass ? "PASS" : "FAIL") << "\n";
  for (const auto& c : clauses) os << format_clause(c) << "\n";
  return os.str();
}

std::string LedgerReport::to_key_values() const {
  std::ostringstream os;
  os.setf(std::ios::scientific);
  os.precision(17);
  os << "ledger.pass=" << (pass ? 1 : 0) << "\n";
  for (const auto& c : clauses) {
    const std::string key = kv_name(c.name);
    os << "ledger." << key << ".pass=" << (c.pass ? 1 : 0) << "\n";
    os << "ledger." << key << ".applicable=" << (c.applicable ? 1 : 0) << "\n";
    os << "ledger." << key << ".residual=" << c.residual << "\n";
    os << "ledger." << key << ".tolerance=" << c.tolerance << "\n";
  }
  return os.str();
}

LedgerReport audit_trajectory(const Trajectory& trajectory, const MaterialModel& model,
                              const Tolerances& tolerances) {
  LedgerReport report;
  auto add = [&](std::string name, double residual, double tolerance,
                 bool applicable = true, std::string detail = {}) -> LedgerClause& {
    LedgerClause c;
    c.name = std::move(name);
    c.residual = residual;
    c.tolerance = tolerance;
    c.applicable = applicable;
    c.detail = std::move(detail);
    c.pass = !applicable || (residual <= tolerance);  // NaN fails
    if (applicable && !c.pass) report.pass = false;
    report.clauses.push_back(std::move(c));
    return report.clauses.back();
  };

  try {
    model.validate();
  } catch (const std::exception& e) {
    add("model", 1.0, 0.0, true, e.what());
    return report;
  }
  const std::size_t n = trajectory.samples.size();
  if (n == 0) {
    add("shape", 1.0, 0.0, true, "empty trajectory");
    return report;
  }
  if (trajectory.info.stride != 1 || !(trajectory.info.dt > 0.0)) {
    add("sampling", 1.0, 0.0, true,
        "auditing requires stride-1 recordings with a positive dt");
    return report;
  }

  const YieldCriterion crit = model.criterion();
  const bool thermal = is_thermal(model.regime);
  const bool rate_independent = trajectory.info.viscosity == 0.0;
  const double dt = trajectory.info.dt;
  const double t0 = trajectory.samples.front().state.time;
  const LoadingProgram& loading = trajectory.info.loading;

  // Map each event to the step it happened in (samples k-1 -> k).
  std::vector<const PlasticEvent*> event_at(n, nullptr);
  bool event_map_ok = true;
  for (const auto& ev : trajectory.events) {
    const auto idx = static_cast<long>(std::ceil((ev.time - t0) / dt - 1e-9));
    if (idx < 1 || idx >= static_cast<long>(n) || event_at[idx] != nullptr) {
      event_map_ok = false;
      break;
    }
    event_at[idx] = &ev;
  }
  add("event-map", event_map_ok ? 0.0 : 1.0, 0.0, true,
      event_map_ok ? "" : "event times do not map 1:1 onto steps");
  if (!event_map_ok) return report;

  // Scales for the relative tolerances.
  double stress_scale = model.sigma_y0;
  double energy_scale = 1e-12;
  double momentum_scale = 1e-30;
  for (const auto& s : trajectory.samples) {
    stress_scale = std::max({stress_scale, std::abs(model.young * s.state.elastic_strain()),
                             std::abs(model.iso_modulus * s.state.hardening_iso),
                             std::abs(model.kin_modulus * s.state.hardening_kin)});
    energy_scale = std::max(energy_scale, std::abs(mechanical_energy(model, s.state)));
    momentum_scale =
        std::max(momentum_scale, std::abs(model.mass * s.state.strain_rate));
  }

  double max_admissibility = -std::numeric_limits<double>::infinity();
  double max_energy = 0.0;        // |E_mech + D - W - E_mech(0)|
  double max_total_energy = 0.0;  // thermal: |E_tot - W - E_tot(0)|
  double max_consistency = 0.0;   // recorded vs recomputed columns, relative
  double max_locking = 0.0;       // internal-variable motion outside events
  double max_kkt = 0.0;
  double max_momentum = 0.0;
  double min_dissipated = std::numeric_limits<double>::infinity();
  double min_production = std::numeric_limits<double>::infinity();
  double max_first_law = 0.0;  // thermal: |T*dS_e - dissipated| per event
  double min_entropy_step = 0.0;

  double d_hat = 0.0;  // recomputed cumulative dissipation
  double w_hat = 0.0;  // recomputed cumulative work input
  double gamma_hat = 0.0;
  double e_mech0 = 0.0;
  double e_tot0 = 0.0;

  for (std::size_t k = 0; k < n; ++k) {
    const TrajectorySample& sample = trajectory.samples[k];
    const MaterialState& st = sample.state;
    const GeneralizedStress z = stress(model, st);
    const double e_mech = mechanical_energy(model, st);
    const double e_tot = total_energy(model, st);

    // Admissibility is demanded "after correction": the configured initial
    // state (k = 0) may legitimately start outside the surface (release runs).
    if (k > 0)
      max_admissibility = std::max(max_admissibility, evaluate_yield(crit, z));
    max_consistency = std::max({max_consistency, rel(std::abs(sample.sigma - z.sigma), stress_scale),
                                rel(std::abs(sample.back_iso - z.back_iso), stress_scale),
                                rel(std::abs(sample.back_kin - z.back_kin), stress_scale),
                                rel(std::abs(sample.energy_total - e_tot), energy_scale)});

    if (k == 0) {
      e_mech0 = e_mech;
      e_tot0 = e_tot;
      max_consistency = std::max({max_consistency, rel(std::abs(sample.dissipated_cum), energy_scale),
                                  rel(std::abs(sample.production_cum), 1.0)});
      continue;
    }

    const MaterialState& prev = trajectory.samples[k - 1].state;
    const PlasticEvent* ev = event_at[k];

    // Work put in by the loading over this step.
    switch (loading.kind) {
      case LoadingProgram::Kind::Free:
        break;
      case LoadingProgram::Kind::ExternalForce:
        w_hat += loading.force(prev.time + 0.5 * dt) * (st.strain - prev.strain);
        break;
      case LoadingProgram::Kind::PrescribedStrain: {
        const double sigma_prev = model.young * prev.elastic_strain();
        const double sigma_trial = model.young * (st.strain - prev.plastic_strain);
        w_hat += 0.5 * (sigma_prev + sigma_trial) * (st.strain - prev.strain) +
                 0.5 * model.mass *
                     (st.strain_rate * st.strain_rate -
                      prev.strain_rate * prev.strain_rate);
        break;
      }
    }

    // Dissipation of this step: potential drop at frozen strain.
    MaterialState frozen = st;
    frozen.plastic_strain = prev.plastic_strain;
    frozen.hardening_iso = prev.hardening_iso;
    frozen.hardening_kin = prev.hardening_kin;
    const double drop = potential_energy(model, frozen) - potential_energy(model, st);
    d_hat += drop;

    if (ev == nullptr) {
      max_locking = std::max({max_locking,
                              rel(std::abs(st.plastic_strain - prev.plastic_strain), 1.0),
                              rel(std::abs(st.hardening_iso - prev.hardening_iso), 1.0),
                              rel(std::abs(st.hardening_kin - prev.hardening_kin), 1.0),
                              rel(std::abs(st.entropy_elastic - prev.entropy_elastic), 1.0),
                              rel(std::abs(st.entropy_plastic - prev.entropy_plastic), 1.0)});
    } else {
      max_kkt = std::max({max_kkt, -ev->lambda,
                          std::abs(ev->lambda * evaluate_yield(crit, z))});
      min_dissipated = std::min({min_dissipated, ev->dissipated, drop});
      max_consistency = std::max(
          {max_consistency, rel(std::abs(ev->dissipated - drop), energy_scale),
           rel(std::abs(ev->d_plastic_strain - (st.plastic_strain - prev.plastic_strain)), 1.0),
           rel(std::abs(ev->d_hardening_iso - (st.hardening_iso - prev.hardening_iso)), 1.0),
           rel(std::abs(ev->d_hardening_kin - (st.hardening_kin - prev.hardening_kin)), 1.0),
           rel(std::abs(ev->d_entropy_elastic - (st.entropy_elastic - prev.entropy_elastic)), 1.0),
           rel(std::abs(ev->d_entropy_plastic - (st.entropy_plastic - prev.entropy_plastic)), 1.0),
           rel(std::abs(ev->sigma - z.sigma), stress_scale),
           // |dir_plastic| = 1 at every event, so the multiplier must equal
           // the plastic-strain increment in magnitude
           rel(std::abs(std::abs(ev->d_plastic_strain) - ev->lambda), 1.0)});

      // Momentum: replay the elastic kinematics of the step; the correction
      // must not have touched the velocity.
      MaterialState replay;
      const double h = ev->time - prev.time;
      if (h > 0.0 && h < dt * (1.0 - 1e-9)) {
        replay = elastic_trial_step(model, elastic_trial_step(model, prev, h, loading),
                                    dt - h, loading);
      } else {
        replay = elastic_trial_step(model, prev, dt, loading);
      }
      const double p_replay = model.mass * replay.strain_rate;
      const double p_post = model.mass * st.strain_rate;
      max_momentum =
          std::max({max_momentum, rel(std::abs(p_post - p_replay), momentum_scale),
                    rel(std::abs(ev->momentum_after - ev->momentum_before), momentum_scale),
                    rel(std::abs(ev->momentum_before - p_replay), momentum_scale)});

      gamma_hat += ev->d_entropy_elastic + ev->d_entropy_plastic;
      min_production = std::min(min_production, ev->d_entropy_elastic + ev->d_entropy_plastic);
      if (thermal)
        max_first_law = std::max(
            max_first_law,
            rel(std::abs(model.temperature * ev->d_entropy_elastic - ev->dissipated),
                energy_scale));
    }

    min_entropy_step = std::min(min_entropy_step, st.entropy() - prev.entropy());
    max_consistency =
        std::max({max_consistency, rel(std::abs(sample.dissipated_cum - d_hat), energy_scale),
                  rel(std::abs(sample.production_cum - gamma_hat), 1.0)});

    max_energy = std::max(max_energy, std::abs(e_mech + d_hat - w_hat - e_mech0));
    if (thermal) max_total_energy = std::max(max_total_energy, std::abs(e_tot - w_hat - e_tot0));
  }

  const bool had_events = !trajectory.events.empty();
  if (!had_events) {
    min_dissipated = 0.0;
    min_production = 0.0;
  }

  add("energy-balance", rel(max_energy, energy_scale), tolerances.energy_rel);
  add("thermo-conservation", rel(max_total_energy, energy_scale), tolerances.energy_rel,
      thermal);
  add("admissibility", max_admissibility, tolerances.admissibility, rate_independent);
  add("kkt", max_kkt, tolerances.kkt, rate_independent);
  add("event-dissipation", std::max(0.0, -min_dissipated), tolerances.kkt);
  add("momentum", max_momentum, tolerances.momentum_rel, had_events);
  add("internal-locking", max_locking, tolerances.consistency);
  add("ledger-consistency", max_consistency, tolerances.consistency);
  add("entropy-production", std::max(0.0, -min_production), tolerances.entropy, thermal);
  add("entropy-monotone", std::max(0.0, -min_entropy_step), tolerances.entropy, thermal);
  add("event-first-law", max_first_law, tolerances.consistency, thermal);

  report.energy_residual = rel(max_energy, energy_scale);
  report.admissibility_violation = max_admissibility;
  report.kkt_residual = max_kkt;
  report.min_event_dissipation = had_events ? min_dissipated : 0.0;
  report.min_event_production = had_events ? min_production : 0.0;
  report.momentum_residual = max_momentum;
  return report;
}

Hysteresis hysteresis(const Trajectory& trajectory) {
  const auto& samples = trajectory.samples;
  if (samples.size() < 3) throw std::runtime_error("hysteresis: trajectory too short");
  if (trajectory.info.stride != 1)
    throw std::runtime_error("hysteresis: requires stride-1 recordings");

  bool up = false, down = false;
  for (std::size_t k = 1; k < samples.size(); ++k) {
    const double d = samples[k].state.strain - samples[k - 1].state.strain;
    up = up || d > 0.0;
    down = down || d < 0.0;
  }
  if (!(up && down))
    throw std::runtime_error("hysteresis: no strain reversal in the run (insufficient cycling)");

  const double dt = trajectory.info.dt;
  const double t0 = samples.front().state.time;
  std::vector<bool> plastic(samples.size(), false);
  for (const auto& ev : trajectory.events) {
    const auto idx = static_cast<long>(std::ceil((ev.time - t0) / dt - 1e-9));
    if (idx >= 1 && idx < static_cast<long>(samples.size())) plastic[idx] = true;
  }

  Hysteresis out;
  out.loop.reserve(samples.size());
  for (const auto& s : samples) out.loop.emplace_back(s.state.strain, s.sigma);

  double elastic_sum = 0.0, plastic_sum = 0.0;
  for (std::size_t k = 1; k < samples.size(); ++k) {
    const double d_eps = samples[k].state.strain - samples[k - 1].state.strain;
    if (d_eps == 0.0) continue;
    const double slope = (samples[k].sigma - samples[k - 1].sigma) / d_eps;
    if (plastic[k]) {
      // the first segment of a plastic run straddles the elastic/plastic
      // transition; only segments fully on the yield surface count
      if (k >= 2 && plastic[k - 1]) {
        plastic_sum += slope;
        ++out.plastic_segments;
      }
    } else {
      elastic_sum += slope;
      ++out.elastic_segments;
    }
  }
  out.elastic_slope = out.elastic_segments > 0 ? elastic_sum / out.elastic_segments
                                               : std::numeric_limits<double>::quiet_NaN();
  out.plastic_slope = out.plastic_segments > 0 ? plastic_sum / out.plastic_segments
                                               : std::numeric_limits<double>::quiet_NaN();
  return out;
}

ViscousStudy viscous_convergence(const SimConfig& base,
                                 std::span<const double> viscosities) {
  if (base.viscosity != 0.0)
    throw std::invalid_argument("viscous study: base config must be rate-independent");
  if (viscosities.empty())
    throw std::invalid_argument("viscous study: need at least one viscosity");
  for (std::size_t i = 0; i < viscosities.size(); ++i) {
    if (!(viscosities[i] > 0.0))
      throw std::invalid_argument("viscous study: viscosities must be > 0");
    if (i > 0 && !(viscosities[i] < viscosities[i - 1]))
      throw std::invalid_argument("viscous study: viscosities must be strictly decreasing");
  }

  const Trajectory reference = simulate(base);
  ViscousStudy study;
  for (const double eta : viscosities) {
    SimConfig cfg = base;
    cfg.viscosity = eta;
    const Trajectory traj = simulate(cfg);
    double deviation = 0.0;
    for (std::size_t k = 0; k < traj.samples.size(); ++k)
      deviation = std::max(deviation,
                           std::abs(traj.samples[k].state.plastic_strain -
                                    reference.samples[k].state.plastic_strain));
    study.rows.push_back({eta, deviation});
  }

  // least-squares slope of log(deviation) against log(eta)
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t m = 0;
  for (const auto& row : study.rows) {
    if (!(row.deviation > 0.0)) continue;
    const double x = std::log(row.viscosity);
    const double y = std::log(row.deviation);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  study.fitted_order =
      m >= 2 ? (sxy - sx * sy / static_cast<double>(m)) /
                   (sxx - sx * sx / static_cast<double>(m))
             : 0.0;
  return study;
}

}  // namespace nsplast
