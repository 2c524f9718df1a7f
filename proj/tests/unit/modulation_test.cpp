// SPDX-License-Identifier: Apache-2.0

#include "ringlink/modulation.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

namespace ringlink {
namespace {

constexpr double kCarrier = 193.4e12;

TEST(Bessel, MatchesPowerSeries) {
  EXPECT_NEAR(bessel_j(0, 0.2), 0.9900249722395764, 1e-15);
  EXPECT_NEAR(bessel_j(1, 0.2), 0.09950083263923602, 1e-15);
  for (int n = -8; n <= 8; ++n) {
    for (double x : {-2.5, -0.2, 0.0, 0.05, 0.2, 1.0, 2.405, 4.0}) {
      EXPECT_NEAR(bessel_j(n, x), testing::bessel_series(n, x), 1e-13) << n << " " << x;
    }
  }
}

TEST(Bessel, NeumannSumIsOne) {
  for (double m : {0.01, 0.2, 1.0, 3.0}) {
    double sum = 0.0;
    for (int n = -40; n <= 40; ++n) sum += bessel_j(n, m) * bessel_j(n, m);
    EXPECT_NEAR(sum, 1.0, 1e-13);
  }
}

TEST(OpticalSpectrum, MergesTonesWithinTolerance) {
  OpticalSpectrum s;
  s.add({kCarrier + 10e9, {{1.0, 0.0}, {}}});
  s.add({kCarrier, {{0.0, 1.0}, {}}});
  s.add({kCarrier + 500.0, {{0.0, 1.0}, {1.0, 0.0}}});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_LT(s[0].freq_hz, s[1].freq_hz);
  EXPECT_EQ(s[0].field.te, Complex(0.0, 2.0));
  EXPECT_EQ(s[0].field.tm, Complex(1.0, 0.0));
  EXPECT_NEAR(s.total_power_w(), 6.0, 1e-15);
  EXPECT_NE(s.find(kCarrier + 999.0), nullptr);
  EXPECT_EQ(s.find(kCarrier + 2e3), nullptr);
  EXPECT_THROW(s.add({0.0, {}}), DomainError);
}

TEST(CwCarrier, LaunchAngleSplitsPower) {
  const OpticalSpectrum s = cw_carrier(kCarrier, 2e-3, deg_to_rad(30.0));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_NEAR(std::norm(s[0].field.te), 2e-3 * 0.75, 1e-18);
  EXPECT_NEAR(std::norm(s[0].field.tm), 2e-3 * 0.25, 1e-18);
  EXPECT_THROW(cw_carrier(kCarrier, -1.0, 0.0), DomainError);
}

TEST(PhaseModulate, LinesMatchDirectFourierSeries) {
  for (double m : {0.05, 0.2, 1.5}) {
    ModulatorDrive drive{.rf_freq_hz = 10e9, .mod_index_rad = m};
    const OpticalSpectrum out =
        phase_modulate(cw_carrier(kCarrier, 1.0, 0.0), drive);
    const int order = drive.resolved_max_order();
    ASSERT_EQ(out.size(), static_cast<std::size_t>(2 * order + 1));
    for (int n = -order; n <= order; ++n) {
      const Complex expected = testing::harmonic(
          [m](double wt) { return std::polar(1.0, m * std::cos(wt)); }, n);
      const SpectralLine* line = out.find(kCarrier + n * 10e9);
      ASSERT_NE(line, nullptr);
      EXPECT_LT(std::abs(line->field.te - expected), 1e-9 * std::max(1.0, std::abs(expected)))
          << "m=" << m << " n=" << n;
    }
  }
}

TEST(PhaseModulate, TruncationAndPowerConservation) {
  ModulatorDrive drive{.rf_freq_hz = 5e9, .mod_index_rad = 0.2};
  const int order = drive.resolved_max_order();
  EXPECT_LT(std::abs(bessel_j(order, 0.2)), kBesselTruncation);
  EXPECT_GE(std::abs(bessel_j(order - 1, 0.2)), kBesselTruncation);
  const OpticalSpectrum out = phase_modulate(cw_carrier(kCarrier, 1e-3, 0.7), drive);
  EXPECT_NEAR(out.total_power_w(), 1e-3, 1e-3 * 1e-10);
  drive.max_order = 1;
  EXPECT_EQ(phase_modulate(cw_carrier(kCarrier, 1e-3, 0.7), drive).size(), 3u);
  drive.max_order = 0;
  EXPECT_THROW(drive.resolved_max_order(), DomainError);
}

TEST(PhaseModulate, FirstOrderSidebandsAreSymmetricInPower) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> um(0.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    ModulatorDrive drive{.rf_freq_hz = 7e9, .mod_index_rad = um(rng)};
    const OpticalSpectrum out = phase_modulate(cw_carrier(kCarrier, 1.0, 0.3), drive);
    const double lo = out.find(kCarrier - 7e9)->power_w();
    const double hi = out.find(kCarrier + 7e9)->power_w();
    EXPECT_NEAR(lo, hi, 1e-15);
  }
}

TEST(IntensityModulate, LinesMatchDirectFourierSeries) {
  for (double bias : {kPi / 2.0, 1.0, kPi}) {
    ModulatorDrive drive{.rf_freq_hz = 16.6e9, .mod_index_rad = 0.2, .bias_rad = bias};
    const OpticalSpectrum out = intensity_modulate(cw_carrier(kCarrier, 1.0, 0.0), drive);
    const int order = drive.resolved_max_order();
    for (int n = -order; n <= order; ++n) {
      const Complex expected = testing::harmonic(
          [&](double wt) { return Complex(std::cos(0.5 * bias + 0.2 * std::cos(wt))); }, n);
      const SpectralLine* line = out.find(kCarrier + n * 16.6e9);
      const Complex got = line ? line->field.te : Complex{};
      EXPECT_LT(std::abs(got - expected), 1e-9 * std::max(1.0, std::abs(expected)))
          << "bias=" << bias << " n=" << n;
    }
  }
}

TEST(IntensityModulate, NullBiasesDropLineFamilies) {
  // Bias pi: the carrier is suppressed, bias 0: odd orders vanish.
  ModulatorDrive drive{.rf_freq_hz = 10e9, .bias_rad = kPi};
  OpticalSpectrum out = intensity_modulate(cw_carrier(kCarrier, 1.0, 0.0), drive);
  const SpectralLine* carrier = out.find(kCarrier);
  EXPECT_TRUE(carrier == nullptr || std::abs(carrier->field.te) < 1e-16);
  drive.bias_rad = 0.0;
  out = intensity_modulate(cw_carrier(kCarrier, 1.0, 0.0), drive);
  EXPECT_EQ(out.find(kCarrier + 10e9), nullptr);
  EXPECT_NE(out.find(kCarrier + 20e9), nullptr);
}

TEST(Modulators, RejectInvalidInput) {
  OpticalSpectrum two = cw_carrier(kCarrier, 1.0, 0.0);
  two.add({kCarrier + 1e9, {{1.0, 0.0}, {}}});
  ModulatorDrive drive{.rf_freq_hz = 1e9};
  EXPECT_THROW(phase_modulate(two, drive), DomainError);
  EXPECT_THROW(intensity_modulate(two, drive), DomainError);
  drive.rf_freq_hz = 0.0;
  EXPECT_THROW(phase_modulate(cw_carrier(kCarrier, 1.0, 0.0), drive), DomainError);
  drive = {.rf_freq_hz = 1e9, .mod_index_rad = -0.1};
  EXPECT_THROW(intensity_modulate(cw_carrier(kCarrier, 1.0, 0.0), drive), DomainError);
}

}  // namespace
}  // namespace ringlink
