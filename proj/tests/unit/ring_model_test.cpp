// SPDX-License-Identifier: Apache-2.0

#include "ringlink/ring_model.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

namespace ringlink {
namespace {

using testing::reference_device;

PhysicalRingParams physical_device() {
  PhysicalRingParams p;
  p.radius_m = 592e-6;
  p.n_eff = {1.627, 1.624};
  p.coupling = {0.9965, 0.9982};
  return p;
}

RingModel spectral(double t, double a, double fsr = 49e9) {
  SpectralRingParams p;
  p.f0_hz = {193.4e12, 193.4e12 + 16.6e9};
  p.fsr_hz = {fsr, fsr};
  p.coupling = Coupling{t, a};
  return ring_from_spectral(p);
}

TEST(RingFromPhysical, FsrMatchesCircumferenceFormula) {
  const RingModel m = ring_from_physical(physical_device());
  const double expected = kSpeedOfLight / (1.627 * kTwoPi * 592e-6);
  EXPECT_NEAR(m.fsr_hz(PolMode::TE) / expected, 1.0, 1e-14);
  EXPECT_LT(std::abs(m.fsr_hz(PolMode::TE) - 49e9) / 49e9, 0.02);
}

TEST(RingFromPhysical, TeTmCombsMatchEnumeration) {
  const RingModel m = ring_from_physical(physical_device());
  const double lo = kSpeedOfLight / 1552.5e-9;
  const double hi = kSpeedOfLight / 1547.5e-9;
  const double length = kTwoPi * 592e-6;
  const auto te = testing::enumerate_comb(kSpeedOfLight / (1.627 * length), lo, hi);
  const auto tm = testing::enumerate_comb(kSpeedOfLight / (1.624 * length), lo, hi);

  const auto found_te = find_resonances(m, PolMode::TE, lo, hi);
  const auto found_tm = find_resonances(m, PolMode::TM, lo, hi);
  ASSERT_EQ(found_te.size(), te.size());
  ASSERT_EQ(found_tm.size(), tm.size());
  for (std::size_t i = 0; i < te.size(); ++i) EXPECT_NEAR(found_te[i] / te[i], 1.0, 1e-12);

  double oracle_delta = 1e300;
  for (double a : te) {
    for (double b : tm) oracle_delta = std::min(oracle_delta, std::abs(a - b));
  }
  // Frozen from the enumeration: 9.3949888 GHz nearest spacing in 1547.5-1552.5 nm.
  EXPECT_NEAR(oracle_delta, 9.3949887956875e9, 1e3);
  const ModeInterval mi = mode_interval(m, lo, hi);
  EXPECT_NEAR(mi.delta_hz, oracle_delta, 1e-9 * oracle_delta);
}

TEST(RingFromPhysical, IdenticalIndicesGiveZeroInterval) {
  PhysicalRingParams p = physical_device();
  p.n_eff = {1.627, 1.627};
  const RingModel m = ring_from_physical(p);
  const double f = kSpeedOfLight / 1550e-9;
  const ModeInterval mi = mode_interval(m, f - 60e9, f + 60e9);
  EXPECT_EQ(mi.delta_hz, 0.0);
}

TEST(RingFromPhysical, FiveResonancesBetween1549And1551nm) {
  const RingModel m = ring_from_physical(physical_device());
  const auto roots = find_resonances(m, PolMode::TE, kSpeedOfLight / 1551e-9,
                                     kSpeedOfLight / 1549e-9);
  ASSERT_EQ(roots.size(), 5u);
  for (std::size_t i = 1; i < roots.size(); ++i) {
    EXPECT_NEAR(roots[i] - roots[i - 1], m.fsr_hz(PolMode::TE), 1e3);
  }
}

TEST(RingFromPhysical, DispersionSetsGroupIndex) {
  PhysicalRingParams p = physical_device();
  p.dn_dlambda_per_m = {-1e5, -1e5};  // -0.1 per micron
  const RingModel m = ring_from_physical(p);
  const double n_group = 1.627 + 1e5 * 1550e-9;
  EXPECT_NEAR(m.fsr_hz(PolMode::TE), kSpeedOfLight / (n_group * kTwoPi * 592e-6), 1.0);
}

TEST(RingFromPhysical, RejectsOutOfRangeCoupling) {
  PhysicalRingParams p = physical_device();
  p.coupling.t = 1.0;
  EXPECT_THROW(ring_from_physical(p), DomainError);
  p.coupling = {0.9, 0.0};
  EXPECT_THROW(ring_from_physical(p), DomainError);
  p.coupling = {0.9, 1.01};
  EXPECT_THROW(ring_from_physical(p), DomainError);
  p = physical_device();
  p.radius_m = 0.0;
  EXPECT_THROW(ring_from_physical(p), DomainError);
}

TEST(RingFromSpectral, IntervalIsExactlyConfigured) {
  const RingModel m = ring_from_spectral(reference_device());
  const double f_te = kSpeedOfLight / 1550.47e-9;
  const ModeInterval mi = mode_interval(m, f_te - 1e9, f_te + 20e9);
  EXPECT_NEAR(mi.delta_hz, 16.6e9, 1e-3);
  EXPECT_NEAR(mi.complementary_hz, 32.4e9, 1e-3);
}

TEST(RingFromSpectral, FwhmSolveMatchesDenseScan) {
  SpectralRingParams p;
  p.f0_hz = {193.4e12, 193.41e12};
  p.fsr_hz = {49.5e9, 49.5e9};
  p.fwhm_hz = 140e6;
  const RingModel m = ring_from_spectral(p);
  const Coupling& c = m.coupling(PolMode::TE);
  EXPECT_EQ(c.a, kDefaultRoundTripA);
  EXPECT_NEAR(c.t, 0.9965, 1e-4);
  const double scanned = testing::scanned_fwhm(
      [&](double f) { return std::norm(drop_transfer(m, PolMode::TE, f)); },
      193.4e12, 1e9, 200001);
  EXPECT_NEAR(scanned, 140e6, 140e6 * 1e-4);
}

TEST(RingFromSpectral, RejectsInfeasibleLinewidth) {
  SpectralRingParams p = reference_device();
  p.fwhm_hz = 49e9;
  EXPECT_THROW(ring_from_spectral(p), DomainError);
  p.fwhm_hz = 1e3;  // needs t^2 a > a
  EXPECT_THROW(ring_from_spectral(p), DomainError);
  p.fwhm_hz.reset();
  EXPECT_THROW(ring_from_spectral(p), DomainError);
}

TEST(DropTransfer, LosslessRingDropsEverythingOnResonance) {
  for (double t : {0.1, 0.5, 0.9, 0.999}) {
    const RingModel m = spectral(t, 1.0);
    EXPECT_NEAR(std::abs(drop_transfer(m, PolMode::TE, 193.4e12)), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(through_transfer(m, PolMode::TE, 193.4e12)), 0.0, 1e-12);
  }
}

TEST(DropTransfer, LossyOnResonanceAndDetunedValues) {
  const RingModel m = spectral(0.9965, 0.9982);
  const double peak = std::norm(drop_transfer(m, PolMode::TE, 193.4e12));
  EXPECT_NEAR(peak, 0.6329669044156966, 1e-12);
  const double detuned = std::norm(drop_transfer(m, PolMode::TE, 193.4e12 + 33.2e9));
  EXPECT_NEAR(power_to_db(detuned / peak), -45.689599077207404, 1e-9);
}

TEST(DropTransfer, HalfPhaseAlternatesSignBetweenResonances) {
  const RingModel m = spectral(0.99, 0.999);
  const Complex d0 = drop_transfer(m, PolMode::TE, 193.4e12);
  const Complex d1 = drop_transfer(m, PolMode::TE, 193.4e12 + 49e9);
  EXPECT_NEAR(std::abs(d0), std::abs(d1), 1e-12);
  EXPECT_NEAR(std::real(d0), -std::real(d1), 1e-10);
}

TEST(ThroughTransfer, AntiResonanceAndNotch) {
  const RingModel lossless = spectral(0.9, 1.0);
  EXPECT_NEAR(std::abs(through_transfer(lossless, PolMode::TE, 193.4e12 + 24.5e9)),
              0.994475138121547, 1e-12);
  const RingModel m = spectral(0.9965, 0.9982);
  const double notch = std::norm(through_transfer(m, PolMode::TE, 193.4e12));
  EXPECT_NEAR(notch, 0.04178191448722227, 1e-12);
  EXPECT_LE(notch + std::norm(drop_transfer(m, PolMode::TE, 193.4e12)), 1.0);
}

TEST(TransferInvariants, EnergyBoundAndLosslessEquality) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ut(0.0, 0.9999), ua(0.5, 1.0), uf(-60e9, 60e9);
  for (int i = 0; i < 2000; ++i) {
    const double t = ut(rng);
    const RingModel lossy = spectral(t, ua(rng));
    const RingModel lossless = spectral(t, 1.0);
    const double f = 193.4e12 + uf(rng);
    const double sum_lossy = std::norm(drop_transfer(lossy, PolMode::TM, f)) +
                             std::norm(through_transfer(lossy, PolMode::TM, f));
    const double sum_lossless = std::norm(drop_transfer(lossless, PolMode::TM, f)) +
                                std::norm(through_transfer(lossless, PolMode::TM, f));
    EXPECT_LE(sum_lossy, 1.0 + 1e-12);
    EXPECT_NEAR(sum_lossless, 1.0, 1e-10);
  }
}

TEST(TransferInvariants, SpectralModelIsFsrPeriodic) {
  const RingModel m = ring_from_spectral(reference_device());
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uf(-100e9, 100e9);
  for (int i = 0; i < 500; ++i) {
    const double f = 193.4e12 + uf(rng);
    const double d0 = std::abs(drop_transfer(m, PolMode::TE, f));
    const double d1 = std::abs(drop_transfer(m, PolMode::TE, f + 49e9));
    EXPECT_NEAR(d1, d0, 1e-12 * d0 + 1e-15);
  }
}

TEST(TransferInvariants, RejectsNonPositiveFrequency) {
  const RingModel m = spectral(0.9, 0.99);
  EXPECT_THROW(drop_transfer(m, PolMode::TE, 0.0), DomainError);
  EXPECT_THROW(through_transfer(m, PolMode::TM, -1.0), DomainError);
}

TEST(FindResonances, AnchoredCombOverThreeFsr) {
  const RingModel m = ring_from_spectral(reference_device());
  const double f0 = kSpeedOfLight / 1550.47e-9;
  const auto roots = find_resonances(m, PolMode::TE, f0 - 1.5 * 49e9, f0 + 1.5 * 49e9);
  ASSERT_EQ(roots.size(), 3u);
  EXPECT_NEAR(roots[1], f0, 1e-12 * f0);
  EXPECT_NEAR(roots[2] - roots[1], 49e9, 1e-3);
  EXPECT_TRUE(find_resonances(m, PolMode::TE, f0 + 1e9, f0 + 2e9).empty());
  EXPECT_TRUE(find_resonances(m, PolMode::TE, f0 + 2e9, f0 + 1e9).empty());
}

TEST(FindResonances, RootsAreLocalExtremaOnDenseGrid) {
  const RingModel m = ring_from_physical(physical_device());
  const double lo = kSpeedOfLight / 1551e-9;
  const double hi = kSpeedOfLight / 1549e-9;
  for (PolMode pol : kPolModes) {
    for (double f : find_resonances(m, pol, lo, hi)) {
      const double d0 = std::abs(drop_transfer(m, pol, f));
      const double t0 = std::abs(through_transfer(m, pol, f));
      for (double df : {-50e6, -5e6, -5e5, 5e5, 5e6, 50e6}) {
        EXPECT_GT(d0, std::abs(drop_transfer(m, pol, f + df)));
        EXPECT_LT(t0, std::abs(through_transfer(m, pol, f + df)));
      }
    }
  }
}

TEST(ResonanceMetrics, QAndTwentyDbWidth) {
  SpectralRingParams p = reference_device();
  p.f0_hz.te = 193.4e12;
  const RingModel m = ring_from_spectral(p);
  const ResonanceMetrics r = resonance_metrics(m, PolMode::TE, 193.4e12);
  EXPECT_NEAR(r.fwhm_hz, 140e6, 140e6 * 1e-9);
  EXPECT_NEAR(r.q, 1.38e6, 0.01 * 1.38e6);
  EXPECT_GT(r.q, 1.2e6);
  ASSERT_TRUE(r.bw20db_hz.has_value());
  // Lorentzian estimate sqrt(99) * fwhm = 1.393 GHz; the Airy shape is slightly narrower.
  EXPECT_NEAR(*r.bw20db_hz, std::sqrt(99.0) * 140e6, 0.01 * 1.393e9);
  EXPECT_LT(r.notch_depth_db, 0.0);
  EXPECT_LT(r.drop_loss_db, 0.0);
}

TEST(ResonanceMetrics, DoublingLinewidthHalvesQ) {
  SpectralRingParams p = reference_device();
  const double f0 = p.f0_hz.te;
  const double q1 = resonance_metrics(ring_from_spectral(p), PolMode::TE, f0).q;
  p.fwhm_hz = 280e6;
  const double q2 = resonance_metrics(ring_from_spectral(p), PolMode::TE, f0).q;
  EXPECT_NEAR(q1 / q2, 2.0, 1e-6);
}

TEST(ResonanceMetrics, FwhmRoundTripAcrossFinesse) {
  for (double ratio : {500.0, 200.0, 100.0, 50.0}) {
    SpectralRingParams p = reference_device();
    p.fwhm_hz = 49e9 / ratio;
    const RingModel m = ring_from_spectral(p);
    const double fw = resonance_metrics(m, PolMode::TM, p.f0_hz.tm).fwhm_hz;
    EXPECT_NEAR(fw, *p.fwhm_hz, 1e-3 * *p.fwhm_hz) << "fsr/fwhm = " << ratio;
  }
}

TEST(ResonanceMetrics, RejectsNonResonantFrequency) {
  const RingModel m = ring_from_spectral(reference_device());
  EXPECT_THROW(resonance_metrics(m, PolMode::TE, kSpeedOfLight / 1550.47e-9 + 1e9),
               DomainError);
}

TEST(ModeInterval, FrequencyPlanArithmetic) {
  const RingModel m = ring_from_spectral(reference_device());
  const double f = kSpeedOfLight / 1550.47e-9;
  const ModeInterval mi = mode_interval(m, f - 1e9, f + 30e9);
  EXPECT_NEAR(mi.f_tm_hz - mi.f_te_hz, 16.6e9, 1e-3);
  EXPECT_NEAR(mi.delta_hz + 49e9, 65.6e9, 1e-3);
  EXPECT_NEAR(mi.complementary_hz + 49e9, 81.4e9, 1e-3);
  EXPECT_THROW(mode_interval(m, f + 1e9, f + 2e9), DomainError);
}

TEST(AtTemperature, LinearRedshiftAndIntervalSlope) {
  const RingModel m = ring_from_spectral(reference_device());
  const double f_tm = kSpeedOfLight / 1550.47e-9 + 16.6e9;
  const RingModel hot = at_temperature(m, 30.0);
  EXPECT_NEAR(nearest_resonance(hot, PolMode::TM, f_tm), f_tm - 11.69e9, 1e-2);

  const double band_lo = kSpeedOfLight / 1550.47e-9 - 5e9;
  double prev = mode_interval(m, band_lo, band_lo + 30e9).delta_hz;
  for (double temp = 24.0; temp <= 30.0; temp += 1.0) {
    const double d = mode_interval(at_temperature(m, temp), band_lo - 20e9, band_lo + 30e9).delta_hz;
    EXPECT_NEAR(d - prev, 0.10e9, 1e-2);
    prev = d;
  }
}

TEST(AtTemperature, ReferenceTemperatureIsIdentity) {
  const RingModel m = ring_from_spectral(reference_device());
  const RingModel same = at_temperature(m, m.thermal().t_ref_c);
  for (double f : {193.3e12, 193.357e12, 193.5e12}) {
    EXPECT_EQ(drop_transfer(m, PolMode::TE, f), drop_transfer(same, PolMode::TE, f));
  }
}

}  // namespace
}  // namespace ringlink
