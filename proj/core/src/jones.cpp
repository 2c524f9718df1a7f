// SPDX-License-Identifier: Apache-2.0

#include "ringlink/jones.hpp"

namespace ringlink {

JonesMatrix JonesMatrix::adjoint() const {
  return {std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]),
          std::conj(m_[3])};
}

JonesMatrix JonesMatrix::operator*(const JonesMatrix& o) const {
  return {m_[0] * o.m_[0] + m_[1] * o.m_[2], m_[0] * o.m_[1] + m_[1] * o.m_[3],
          m_[2] * o.m_[0] + m_[3] * o.m_[2], m_[2] * o.m_[1] + m_[3] * o.m_[3]};
}

JonesVector JonesMatrix::operator*(const JonesVector& v) const {
  return {m_[0] * v.te + m_[1] * v.tm, m_[2] * v.te + m_[3] * v.tm};
}

PolarizerAngle PolarizerAngle::from_radians(double theta) {
  if (!std::isfinite(theta)) throw DomainError("polarizer angle must be finite");
  double t = std::fmod(theta, kPi);
  if (t < 0.0) t += kPi;
  if (t >= kPi) t = 0.0;
  return PolarizerAngle(t);
}

JonesMatrix polarizer_matrix(PolarizerAngle theta) {
  const double s = std::sin(theta.radians());
  const double c = std::cos(theta.radians());
  return {s * s, c * s, s * c, c * c};
}

JonesMatrix ring_drop_operator(const RingModel& m, double f_hz) {
  return JonesMatrix::diagonal(drop_transfer(m, PolMode::TE, f_hz),
                               drop_transfer(m, PolMode::TM, f_hz));
}

JonesMatrix ring_through_operator(const RingModel& m, double f_hz) {
  return JonesMatrix::diagonal(through_transfer(m, PolMode::TE, f_hz),
                               through_transfer(m, PolMode::TM, f_hz));
}

double output_intensity_closed_form(PolarizerAngle theta, Complex d_te,
                                    Complex d_tm, double e0) {
  const double th = theta.radians();
  const double s = std::sin(th);
  const double c = std::cos(th);
  const double mag_te = std::abs(d_te);
  const double mag_tm = std::abs(d_tm);
  const double cross = mag_te * mag_tm * std::sin(2.0 * th) *
                       std::cos(std::arg(d_te) - std::arg(d_tm));
  return 0.5 * e0 * e0 *
         (mag_te * mag_te * s * s + mag_tm * mag_tm * c * c + cross);
}

double ocsr_theory(PolarizerAngle theta) {
  const double t = std::tan(theta.radians());
  if (t == 0.0) {
    throw DomainError("OCSR diverges at theta = 0 (carrier-only limit)");
  }
  return 1.0 / (t * t);
}

}  // namespace ringlink
