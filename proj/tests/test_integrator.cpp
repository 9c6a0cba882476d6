#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nsplast/analysis.hpp"
#include "nsplast/integrator.hpp"

using namespace nsplast;

namespace {

MaterialModel release_model(double sigma_y0 = 1.0) {
  MaterialModel m;
  m.regime = RegimeKind::Perfect;
  m.young = 30.0;
  m.mass = 0.82;
  m.sigma_y0 = sigma_y0;
  return m;
}

SimConfig free_config(const MaterialModel& model, double eps0, double dt,
                      double t_end) {
  SimConfig cfg;
  cfg.model = model;
  cfg.initial.strain = eps0;
  cfg.loading.kind = LoadingProgram::Kind::Free;
  cfg.dt = dt;
  cfg.t_end = t_end;
  return cfg;
}

}  // namespace

TEST_CASE("elastic step: equilibrium is a bitwise fixed point") {
  MaterialModel m = release_model();
  MaterialState s;
  s.strain = 0.3;
  s.plastic_strain = 0.3;
  LoadingProgram free;
  const auto next = elastic_trial_step(m, s, 1e-3, free);
  CHECK(next.strain == s.strain);
  CHECK(next.strain_rate == 0.0);
  CHECK(next.plastic_strain == s.plastic_strain);
}

TEST_CASE("elastic step: one step matches the Taylor expansion") {
  MaterialModel m = release_model(1e9);  // keep it elastic
  MaterialState s;
  s.strain = 1.0;
  LoadingProgram free;
  const double dt = 1e-3;
  const auto next = elastic_trial_step(m, s, dt, free);
  // position Verlet from rest: eps1 = eps0 - (dt^2/2) * (E/m) * eps0 exactly
  const double expected = 1.0 - 0.5 * dt * dt * (30.0 / 0.82);
  CHECK(next.strain == doctest::Approx(expected).epsilon(1e-14));
  CHECK(next.strain == doctest::Approx(0.99998171).epsilon(1e-8));
  CHECK(next.strain_rate < 0.0);
}

TEST_CASE("elastic step: the stepper converges at second order") {
  MaterialModel m = release_model(1e9);
  LoadingProgram free;
  const double omega = std::sqrt(m.young / m.mass);

  // sup-norm error over a few periods, dominated by the O(dt^2) phase drift
  auto sweep = [&](double dt) {
    MaterialState s;
    s.strain = 1.0;
    const int n = static_cast<int>(std::round(3.0 / dt));
    double sup = 0.0;
    for (int k = 0; k < n; ++k) {
      s = elastic_trial_step(m, s, dt, free);
      sup = std::max(sup, std::abs(s.strain - std::cos(omega * ((k + 1) * dt))));
    }
    return sup;
  };

  const double coarse = sweep(2e-3);
  const double fine = sweep(1e-3);
  CHECK(coarse < 1e-3);
  CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("step: inadmissible trial triggers the return map") {
  MaterialModel m = release_model(30.0);
  MaterialState s;
  s.strain = 4.0 / 3.0;  // sigma_trial ~= 40 after a tiny elastic move
  LoadingProgram free;
  const auto result = step(m, s, 1e-9, free);
  REQUIRE(result.event.has_value());
  const auto& ev = *result.event;
  CHECK(ev.lambda == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  CHECK(ev.d_plastic_strain == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  CHECK(30.0 * (result.state.strain - result.state.plastic_strain) ==
        doctest::Approx(30.0).epsilon(1e-6));
  CHECK(ev.momentum_before == ev.momentum_after);  // bitwise: v untouched
  CHECK(ev.dissipated > 0.0);
}

TEST_CASE("step: admissible trial emits no event") {
  MaterialModel m = release_model(1e9);
  MaterialState s;
  s.strain = 1.0;
  LoadingProgram free;
  const auto result = step(m, s, 1e-3, free);
  CHECK_FALSE(result.event.has_value());
  CHECK(result.state.plastic_strain == 0.0);
}

TEST_CASE("config validation: stability bound names the offending dt") {
  SimConfig cfg = free_config(release_model(), 1.0, 0.5, 1.0);
  // dt * sqrt(E/m) = 0.5 * 6.05 > 2
  try {
    cfg.validate();
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& err) {
    const std::string what = err.what();
    CHECK(what.find("stability") != std::string::npos);
    CHECK(what.find("0.5") != std::string::npos);
  }

  cfg.dt = 1e-3;
  CHECK_NOTHROW(cfg.validate());

  cfg.dt = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  cfg = free_config(release_model(), 1.0, 1e-3, 1.0);
  cfg.stride = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  cfg = free_config(release_model(), 1.0, 1e-3, 1.0);
  cfg.viscosity = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("simulate: free release produces plastic events then rings down") {
  SimConfig cfg = free_config(release_model(1.0), 1.0, 1e-3, 2.0);
  const auto traj = simulate(cfg);
  REQUIRE_FALSE(traj.samples.empty());
  REQUIRE_FALSE(traj.events.empty());
  CHECK(traj.samples.size() == 2001);  // includes the initial sample
  CHECK(traj.samples.front().state.time == 0.0);
  CHECK(traj.samples.back().state.time == doctest::Approx(2.0).epsilon(1e-12));

  // sample admissibility after correction: the initial sample is the raw
  // release state and sits far outside the surface by design
  for (std::size_t k = 1; k < traj.samples.size(); ++k) {
    const double f = std::abs(traj.samples[k].sigma) - 1.0;
    CHECK(f <= kYieldTol);
  }
  // plastic strain only moves at events, and events all dissipate
  for (const auto& ev : traj.events) {
    CHECK(ev.dissipated >= 0.0);
    CHECK(ev.momentum_before == ev.momentum_after);
  }
}

TEST_CASE("simulate: time grid is exact and stride subsamples it") {
  SimConfig cfg = free_config(release_model(1e9), 1.0, 1e-3, 0.1);
  cfg.stride = 10;
  const auto traj = simulate(cfg);
  CHECK(traj.samples.size() == 11);
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    CHECK(traj.samples[i].state.time ==
          doctest::Approx(0.01 * static_cast<double>(i)).epsilon(1e-13));
  }
  CHECK(traj.info.stride == 10);
  CHECK(traj.info.dt == 1e-3);
}

TEST_CASE("simulate: prescribed strain follows the table exactly") {
  SimConfig cfg;
  cfg.model = release_model(1.0);
  cfg.loading.kind = LoadingProgram::Kind::PrescribedStrain;
  cfg.loading.strain_table = {{0.0, 0.0}, {2.0, 0.2}};
  cfg.dt = 1e-3;
  cfg.t_end = 2.0;
  const auto traj = simulate(cfg);
  REQUIRE(traj.samples.size() == 2001);
  // strain tracks the ramp; the rate is the backward difference
  const auto& s1 = traj.samples[1];
  CHECK(s1.state.strain == doctest::Approx(1e-4).epsilon(1e-10));
  CHECK(s1.state.strain_rate == doctest::Approx(0.1).epsilon(1e-10));
  // the ramp crosses the yield stress; events must appear
  CHECK_FALSE(traj.events.empty());
  // plastic flow holds sigma at the flow stress on the ramp's tail
  CHECK(traj.samples.back().sigma == doctest::Approx(1.0).epsilon(1e-3));

  // initial strain must match the table start
  SimConfig bad = cfg;
  bad.initial.strain = 0.5;
  CHECK_THROWS_AS((void)simulate(bad), std::invalid_argument);
}

TEST_CASE("simulate: bisection localizes events inside the step") {
  SimConfig cfg = free_config(release_model(1.0), 1.0, 1e-4, 1.0);
  cfg.localization = EventLocalization::Bisection;
  const auto traj = simulate(cfg);
  REQUIRE_FALSE(traj.events.empty());
  bool interior = false;
  for (const auto& ev : traj.events) {
    const double phase = ev.time / cfg.dt;
    const double frac = phase - std::floor(phase);
    if (frac > 1e-4 && frac < 1.0 - 1e-4) interior = true;
  }
  CHECK(interior);  // at least one crossing found strictly inside a step

  // the localized trajectory still satisfies the ledger
  const auto report = audit_trajectory(traj, cfg.model);
  CHECK(report.pass);
}

TEST_CASE("simulate: thermal run accumulates entropy monotonically") {
  SimConfig cfg;
  cfg.model.regime = RegimeKind::ThermoPerfect;
  cfg.model.young = 30.0;
  cfg.model.mass = 0.82;
  cfg.model.sigma_y0 = 30.0;
  cfg.model.softening = 1e-3;
  cfg.model.t_ref = 300.0;
  cfg.model.temperature = 320.0;
  cfg.initial.strain = 1.5;
  cfg.loading.kind = LoadingProgram::Kind::Free;
  cfg.dt = 1e-3;
  cfg.t_end = 2.0;
  const auto traj = simulate(cfg);
  REQUIRE_FALSE(traj.events.empty());
  double prev = 0.0;
  for (const auto& sample : traj.samples) {
    const double s = sample.state.entropy();
    CHECK(s >= prev - 1e-15);
    prev = s;
  }
  for (const auto& ev : traj.events) {
    CHECK(ev.d_entropy_plastic >= 0.0);
    CHECK(ev.d_entropy_elastic >= -1e-15);
    // first law at the event: T * dS_e equals the dissipated energy
    CHECK(std::abs(320.0 * ev.d_entropy_elastic - ev.dissipated) <= 1e-9);
  }
}

TEST_CASE("simulate: viscous corrector lags the rate-independent one") {
  SimConfig cfg = free_config(release_model(1.0), 1.0, 5e-3, 2.0);
  const auto exact = simulate(cfg);
  SimConfig viscous = cfg;
  viscous.viscosity = 1e-1;
  const auto lagged = simulate(viscous);
  REQUIRE_FALSE(lagged.events.empty());
  auto peak_plastic = [](const Trajectory& traj) {
    double peak = 0.0;
    for (const auto& s : traj.samples)
      peak = std::max(peak, std::abs(s.state.plastic_strain));
    return peak;
  };
  // same grid: the regularized flow trails the rate-independent projection
  CHECK(peak_plastic(lagged) < peak_plastic(exact));
  CHECK(peak_plastic(lagged) > 0.0);
}

TEST_CASE("simulate: external forcing pumps energy through the work term") {
  SimConfig cfg = free_config(release_model(1.0), 0.0, 1e-4, 2.0);
  cfg.loading.kind = LoadingProgram::Kind::ExternalForce;
  cfg.loading.amplitude = 2.0;
  cfg.loading.angular_frequency = 3.0;
  const auto traj = simulate(cfg);
  REQUIRE_FALSE(traj.samples.empty());
  // forced run starting at rest must gain energy
  CHECK(traj.samples.back().energy_total +
            traj.samples.back().dissipated_cum >
        1e-3);
  const auto report = audit_trajectory(traj, cfg.model);
  CHECK(report.pass);
}
