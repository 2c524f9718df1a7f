// SPDX-License-Identifier: Apache-2.0
//
// Jones calculus in the ring's (TE, TM) eigenbasis.

#ifndef RINGLINK_JONES_HPP
#define RINGLINK_JONES_HPP

#include <array>

#include "ringlink/common.hpp"
#include "ringlink/ring_model.hpp"

namespace ringlink {

/// Field amplitudes in sqrt(W).
struct JonesVector {
  Complex te{};
  Complex tm{};

  double power() const { return std::norm(te) + std::norm(tm); }
  Complex& operator[](PolMode pol) { return pol == PolMode::TE ? te : tm; }
  const Complex& operator[](PolMode pol) const {
    return pol == PolMode::TE ? te : tm;
  }

  JonesVector& operator+=(const JonesVector& o) {
    te += o.te;
    tm += o.tm;
    return *this;
  }
  friend JonesVector operator*(Complex s, const JonesVector& v) {
    return {s * v.te, s * v.tm};
  }
};

/// 2x2 complex operator, row-major in the (TE, TM) basis.
class JonesMatrix {
 public:
  constexpr JonesMatrix() = default;
  constexpr JonesMatrix(Complex m00, Complex m01, Complex m10, Complex m11)
      : m_{m00, m01, m10, m11} {}

  static constexpr JonesMatrix identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr JonesMatrix diagonal(Complex d_te, Complex d_tm) {
    return {d_te, 0.0, 0.0, d_tm};
  }

  Complex operator()(int row, int col) const { return m_[2 * row + col]; }

  JonesMatrix adjoint() const;
  JonesMatrix operator*(const JonesMatrix& o) const;
  JonesVector operator*(const JonesVector& v) const;

 private:
  std::array<Complex, 4> m_{};
};

/// Angle between a polarizer's transmission axis and the TM axis,
/// normalized into [0, pi).
class PolarizerAngle {
 public:
  static PolarizerAngle from_radians(double theta);
  static PolarizerAngle from_degrees(double theta_deg) {
    return from_radians(deg_to_rad(theta_deg));
  }
  /// Axis given relative to the TE axis instead (theta_tm = 90 deg - theta_te).
  static PolarizerAngle from_te_axis_degrees(double theta_deg) {
    return from_degrees(90.0 - theta_deg);
  }

  double radians() const { return theta_; }
  double degrees() const { return rad_to_deg(theta_); }

 private:
  explicit PolarizerAngle(double theta) : theta_(theta) {}
  double theta_;
};

/// Ideal linear polarizer [[sin^2, cos sin], [sin cos, cos^2]].
JonesMatrix polarizer_matrix(PolarizerAngle theta);

JonesMatrix ring_drop_operator(const RingModel& m, double f_hz);
JonesMatrix ring_through_operator(const RingModel& m, double f_hz);

/// Intensity behind the polarizer for a 45-degree launch of amplitude e0
/// through a diagonal ring operator diag(d_te, d_tm).
double output_intensity_closed_form(PolarizerAngle theta, Complex d_te,
                                    Complex d_tm, double e0);

/// cot^2(theta): carrier-to-sideband ratio law for a carrier dropped by a TM
/// resonance and a sideband dropped by a TE resonance. Throws at theta = 0.
double ocsr_theory(PolarizerAngle theta);

}  // namespace ringlink

#endif  // RINGLINK_JONES_HPP
