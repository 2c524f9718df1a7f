// SPDX-License-Identifier: Apache-2.0

#include "ringlink/jones.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

namespace ringlink {
namespace {

void expect_matrix_near(const JonesMatrix& a, const JonesMatrix& b, double tol) {
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) EXPECT_LT(std::abs(a(r, c) - b(r, c)), tol) << r << c;
  }
}

TEST(PolarizerAngle, NormalizesIntoHalfTurn) {
  EXPECT_NEAR(PolarizerAngle::from_degrees(190.0).degrees(), 10.0, 1e-12);
  EXPECT_NEAR(PolarizerAngle::from_degrees(-10.0).degrees(), 170.0, 1e-12);
  EXPECT_NEAR(PolarizerAngle::from_degrees(180.0).degrees(), 0.0, 1e-12);
  EXPECT_NEAR(PolarizerAngle::from_te_axis_degrees(30.0).degrees(), 60.0, 1e-12);
  EXPECT_THROW(PolarizerAngle::from_radians(std::nan("")), DomainError);
}

TEST(PolarizerMatrix, AxisLimits) {
  // theta = 0 passes TM only, theta = 90 deg passes TE only.
  expect_matrix_near(polarizer_matrix(PolarizerAngle::from_degrees(0.0)),
                     JonesMatrix::diagonal(0.0, 1.0), 1e-15);
  expect_matrix_near(polarizer_matrix(PolarizerAngle::from_degrees(90.0)),
                     JonesMatrix::diagonal(1.0, 0.0), 1e-15);
}

TEST(PolarizerMatrix, ProjectorProperties) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-720.0, 720.0);
  for (int i = 0; i < 200; ++i) {
    const JonesMatrix p = polarizer_matrix(PolarizerAngle::from_degrees(u(rng)));
    expect_matrix_near(p * p, p, 1e-14);
    expect_matrix_near(p.adjoint(), p, 1e-15);
    EXPECT_NEAR(std::real(p(0, 0) + p(1, 1)), 1.0, 1e-14);
  }
}

TEST(PolarizerMatrix, NeverAddsPower) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 180.0);
  for (int i = 0; i < 500; ++i) {
    const JonesVector v{{g(rng), g(rng)}, {g(rng), g(rng)}};
    const JonesVector out = polarizer_matrix(PolarizerAngle::from_degrees(u(rng))) * v;
    EXPECT_LE(out.power(), v.power() * (1.0 + 1e-12));
  }
}

TEST(JonesMatrix, ProductAndAdjointAgainstExplicitArithmetic) {
  const JonesMatrix a{{1, 2}, {0, -1}, {3, 0}, {0.5, 0.5}};
  const JonesMatrix b{{0, 1}, {2, 0}, {-1, -1}, {1, 0}};
  const JonesMatrix ab = a * b;
  // Hand-expanded row-by-column products.
  expect_matrix_near(ab, JonesMatrix{Complex(1, 2) * Complex(0, 1) + Complex(0, -1) * Complex(-1, -1),
                                     Complex(1, 2) * 2.0 + Complex(0, -1) * 1.0,
                                     Complex(3, 0) * Complex(0, 1) + Complex(0.5, 0.5) * Complex(-1, -1),
                                     6.0 + Complex(0.5, 0.5)},
                     1e-15);
  expect_matrix_near((a * b).adjoint(), b.adjoint() * a.adjoint(), 1e-15);
  const JonesVector v = a * JonesVector{{1, 0}, {0, 1}};
  EXPECT_LT(std::abs(v.te - (Complex(1, 2) + Complex(0, -1) * Complex(0, 1))), 1e-15);
  EXPECT_LT(std::abs(v.tm - (3.0 + Complex(0.5, 0.5) * Complex(0, 1))), 1e-15);
}

TEST(RingOperators, DiagonalWithScalarTransfers) {
  const RingModel m = ring_from_spectral(testing::reference_device());
  const double f = kSpeedOfLight / 1550.47e-9 + 3e9;
  const JonesMatrix d = ring_drop_operator(m, f);
  EXPECT_EQ(d(0, 0), drop_transfer(m, PolMode::TE, f));
  EXPECT_EQ(d(1, 1), drop_transfer(m, PolMode::TM, f));
  EXPECT_EQ(d(0, 1), Complex{});
  EXPECT_EQ(d(1, 0), Complex{});
  const JonesMatrix t = ring_through_operator(m, f);
  EXPECT_EQ(t(1, 1), through_transfer(m, PolMode::TM, f));
}

TEST(OutputIntensity, ClosedFormMatchesJonesChain) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ang(0.0, 180.0), mag(0.0, 1.0), ph(-kPi, kPi);
  for (int i = 0; i < 1000; ++i) {
    const PolarizerAngle theta = PolarizerAngle::from_degrees(ang(rng));
    const Complex d_te = std::polar(mag(rng), ph(rng));
    const Complex d_tm = std::polar(mag(rng), ph(rng));
    const double e0 = 0.5 + mag(rng);
    const JonesVector in{e0 / std::sqrt(2.0), e0 / std::sqrt(2.0)};
    const JonesVector out =
        polarizer_matrix(theta) * (JonesMatrix::diagonal(d_te, d_tm) * in);
    EXPECT_NEAR(output_intensity_closed_form(theta, d_te, d_tm, e0), out.power(),
                1e-12);
  }
}

TEST(OcsrTheory, CotangentSquaredLaw) {
  EXPECT_NEAR(power_to_db(ocsr_theory(PolarizerAngle::from_degrees(2.0))),
              29.138323900510382, 1e-10);
  EXPECT_NEAR(ocsr_theory(PolarizerAngle::from_degrees(45.0)), 1.0, 1e-12);
  EXPECT_NEAR(ocsr_theory(PolarizerAngle::from_degrees(92.0)),
              ocsr_theory(PolarizerAngle::from_degrees(88.0)), 1e-12);
  EXPECT_THROW(ocsr_theory(PolarizerAngle::from_degrees(0.0)), DomainError);
  EXPECT_EQ(ocsr_theory(PolarizerAngle::from_degrees(90.0)) < 1e-30, true);
}

}  // namespace
}  // namespace ringlink
