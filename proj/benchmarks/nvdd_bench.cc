#include <numbers>

#include <benchmark/benchmark.h>

#include "nvdd/compiler.h"
#include "nvdd/engine.h"
#include "nvdd/experiments.h"
#include "nvdd/fit.h"

namespace {

using namespace nvdd;

constexpr double kPi = std::numbers::pi;

void BM_RfPulsePropagator(benchmark::State& state) {
  const NvParams p;
  const PulseEvent pulse =
      make_pulse(Channel::RF, 2.8161e6, 5.84e3, 360, 0, nuclear_pair(System::A, NuclearTransition::Nu2));
  for (auto _ : state) benchmark::DoNotOptimize(pulse_propagator(pulse, p, {}, 1e-5));
}
BENCHMARK(BM_RfPulsePropagator);

void BM_ProtectedGateUnitary(benchmark::State& state) {
  const NvParams p;
  const DdPulseMode mode = state.range(0) ? DdPulseMode::Finite : DdPulseMode::Instantaneous;
  const Schedule s = compile_protected({System::A, 1, 4 * kPi, 0}, DdScheme::xy(static_cast<int>(state.range(1)), mode), p);
  for (auto _ : state) benchmark::DoNotOptimize(schedule_unitary(s, p));
}
BENCHMARK(BM_ProtectedGateUnitary)->ArgsProduct({{0, 1}, {2, 8}});

void BM_LindbladExperiment(benchmark::State& state) {
  const NvParams p;
  ExperimentSpec spec;
  spec.gate = {System::A, 0, 4 * kPi, 0};
  const Schedule s = compile_experiment(spec, p);
  const NoiseModel noise = parse_noise_spec("lindblad:T1=3.5ms,T2=34us");
  for (auto _ : state) benchmark::DoNotOptimize(propagate(s, maximally_mixed(), p, noise, {}));
}
BENCHMARK(BM_LindbladExperiment)->Unit(benchmark::kMillisecond);

void BM_OuTrajectories(benchmark::State& state) {
  const NvParams p;
  ExperimentSpec spec;
  spec.gate = {System::A, 1, 2 * kPi, 0};
  spec.dd = DdScheme::xy(2);
  const Schedule s = compile_experiment(spec, p);
  const NoiseModel noise = parse_noise_spec("ou:sigma=6.62kHz,tau=100us");
  EngineConfig cfg;
  cfg.n_traj = 16;
  cfg.workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(propagate(s, maximally_mixed(), p, noise, cfg));
}
BENCHMARK(BM_OuTrajectories)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_ThetaSweep(benchmark::State& state) {
  const NvParams p;
  SweepOptions o;
  o.protected_gate = true;
  o.dd = DdScheme::xy(2);
  const auto grid = linspace(0, 8 * kPi, 65);
  for (auto _ : state) benchmark::DoNotOptimize(theta_sweep(grid, o, p, {}, {}));
}
BENCHMARK(BM_ThetaSweep)->Unit(benchmark::kMillisecond);

void BM_FitDephasedSignal(benchmark::State& state) {
  std::vector<FitPoint> pts;
  for (double th : linspace(0, 8 * kPi, 65)) {
    const double t = th / (2 * kPi * 9.05e3);
    pts.push_back({th, t, decayed_signal(th, t, 34e-6)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(fit_decay(pts, DecayModel::Eq6));
}
BENCHMARK(BM_FitDephasedSignal);

}  // namespace

BENCHMARK_MAIN();
