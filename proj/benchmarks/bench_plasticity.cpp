#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "nsplast/integrator.hpp"
#include "nsplast/yield.hpp"

using namespace nsplast;

namespace {

struct Case {
  YieldCriterion criterion;
  GeneralizedStress trial;
  Moduli moduli;
};

std::vector<Case> make_cases(RegimeKind kind, std::size_t count) {
  std::mt19937_64 rng(12345u);
  std::uniform_real_distribution<double> stress(-100.0, 100.0);
  std::uniform_real_distribution<double> yield(1.0, 50.0);
  std::uniform_real_distribution<double> modulus(1.0, 100.0);
  std::vector<Case> cases;
  cases.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Case c;
    c.criterion.kind = kind;
    c.criterion.sigma_y0 = yield(rng);
    if (is_thermal(kind)) {
      c.criterion.softening = 1e-3;
      c.criterion.t_ref = 300.0;
      c.trial.temperature = 320.0;
    }
    c.moduli.young = modulus(rng);
    if (has_isotropic_hardening(kind)) c.moduli.iso = modulus(rng);
    if (has_kinematic_hardening(kind)) c.moduli.kin = modulus(rng);
    c.trial.sigma = stress(rng);
    if (has_kinematic_hardening(kind)) c.trial.back_kin = stress(rng);
    if (has_isotropic_hardening(kind))
      c.trial.back_iso =
          std::uniform_real_distribution<double>(
              -100.0, c.criterion.flow_stress(c.trial.temperature))(rng);
    cases.push_back(c);
  }
  return cases;
}

void BM_ReturnMap(benchmark::State& state) {
  const auto kind = static_cast<RegimeKind>(state.range(0));
  const auto cases = make_cases(kind, 1024);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& c = cases[i++ & 1023];
    benchmark::DoNotOptimize(
        project_return_map(c.criterion, c.trial, c.moduli));
  }
}
BENCHMARK(BM_ReturnMap)
    ->Arg(static_cast<int>(RegimeKind::Perfect))
    ->Arg(static_cast<int>(RegimeKind::Isotropic))
    ->Arg(static_cast<int>(RegimeKind::Kinematic))
    ->Arg(static_cast<int>(RegimeKind::Mixed))
    ->Arg(static_cast<int>(RegimeKind::ThermoMixed));

void BM_ViscoplasticStep(benchmark::State& state) {
  const auto cases = make_cases(RegimeKind::Perfect, 1024);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& c = cases[i++ & 1023];
    benchmark::DoNotOptimize(
        viscoplastic_step(c.criterion, c.trial, 1e-2, 1e-3, c.moduli));
  }
}
BENCHMARK(BM_ViscoplasticStep);

void BM_ElasticStep(benchmark::State& state) {
  MaterialModel model;
  model.regime = RegimeKind::Perfect;
  model.young = 30.0;
  model.mass = 0.82;
  model.sigma_y0 = 1e9;
  LoadingProgram free;
  MaterialState s;
  s.strain = 1.0;
  for (auto _ : state) {
    s = elastic_trial_step(model, s, 1e-4, free);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_ElasticStep);

void BM_FullStep(benchmark::State& state) {
  MaterialModel model;
  model.regime = RegimeKind::Perfect;
  model.young = 30.0;
  model.mass = 0.82;
  model.sigma_y0 = 1.0;
  LoadingProgram free;
  MaterialState s;
  s.strain = 1.0;
  for (auto _ : state) {
    const auto result = step(model, s, 1e-4, free);
    s = result.state;
    benchmark::DoNotOptimize(s);
    if (s.time > 19.0) s = MaterialState{.strain = 1.0};
  }
}
BENCHMARK(BM_FullStep);

void BM_SimulateRelease(benchmark::State& state) {
  SimConfig cfg;
  cfg.model.regime = RegimeKind::Perfect;
  cfg.model.young = 30.0;
  cfg.model.mass = 0.82;
  cfg.model.sigma_y0 = 1.0;
  cfg.initial.strain = 1.0;
  cfg.loading.kind = LoadingProgram::Kind::Free;
  cfg.dt = 1e-4;
  cfg.t_end = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(cfg));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(cfg.t_end / cfg.dt));
}
BENCHMARK(BM_SimulateRelease);

}  // namespace

BENCHMARK_MAIN();
