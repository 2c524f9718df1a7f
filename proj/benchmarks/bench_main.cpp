// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "ringlink/fit.hpp"
#include "ringlink/link.hpp"

namespace ringlink {
namespace {

RingModel reference_ring() {
  SpectralRingParams p;
  p.f0_hz = {193.4e12, 193.4e12 + 16.6e9};
  p.fsr_hz = {49e9, 49e9};
  p.fwhm_hz = 140e6;
  return ring_from_spectral(p);
}

void BM_DropTransfer(benchmark::State& state) {
  const RingModel ring = reference_ring();
  double f = 193.39e12;
  for (auto _ : state) {
    benchmark::DoNotOptimize(drop_transfer(ring, PolMode::TE, f));
    f += 1e5;
  }
}
BENCHMARK(BM_DropTransfer);

void BM_SimulateOssb(benchmark::State& state) {
  OssbConfig cfg{.ring = reference_ring(), .carrier_freq_hz = 193.4e12 + 16.6e9};
  cfg.drive.rf_freq_hz = 16.6e9;
  cfg.polarizer = PolarizerAngle::from_degrees(30.0);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_ossb(cfg));
}
BENCHMARK(BM_SimulateOssb);

void BM_SimulateEqualizer(benchmark::State& state) {
  EqualizerConfig cfg{.ring = reference_ring(), .carrier_freq_hz = 193.4e12 + 5.9e9};
  cfg.input_angle_rad = kPi / 4.0;
  cfg.rf_grid_hz = default_rf_grid(cfg, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_equalizer(cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateEqualizer)->Arg(201)->Arg(2001);

void BM_FitResonance(benchmark::State& state) {
  SpectralRingParams p;
  p.f0_hz = {193.4e12, 193.4e12 + 16.6e9};
  p.fsr_hz = {49e9, 49e9};
  p.coupling = Coupling{0.9965, 0.9982};
  MeasuredTrace tr = simulate_trace(ring_from_spectral(p), PolMode::TE, Port::Through,
                                    193.4e12 + 3e6, 1.5e9, static_cast<std::size_t>(state.range(0)));
  tr.calibrated = true;
  const ResonanceGuess guess = initial_guess(tr);
  for (auto _ : state) benchmark::DoNotOptimize(fit_resonance(tr, guess));
}
BENCHMARK(BM_FitResonance)->Arg(201)->Arg(601);

}  // namespace
}  // namespace ringlink

BENCHMARK_MAIN();
