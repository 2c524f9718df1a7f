// SPDX-License-Identifier: Apache-2.0
//
// Shared vocabulary for the ringlink library: polarization indexing,
// physical constants, dB helpers and the error types thrown by every module.

#ifndef RINGLINK_COMMON_HPP
#define RINGLINK_COMMON_HPP

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ringlink {

using Complex = std::complex<double>;

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Waveguide polarization eigenmode of the ring.
enum class PolMode { TE = 0, TM = 1 };

inline constexpr std::array<PolMode, 2> kPolModes{PolMode::TE, PolMode::TM};

constexpr std::string_view to_string(PolMode pol) {
  return pol == PolMode::TE ? "te" : "tm";
}

PolMode parse_pol_mode(std::string_view text);

/// A value held once per polarization mode.
template <typename T>
struct PerPol {
  T te{};
  T tm{};

  constexpr T& operator[](PolMode pol) { return pol == PolMode::TE ? te : tm; }
  constexpr const T& operator[](PolMode pol) const {
    return pol == PolMode::TE ? te : tm;
  }
};

/// Raised when an input violates a documented precondition or a
/// computation has no defined result (e.g. OCSR with zero sideband power).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the least-squares fitter when it cannot satisfy its
/// termination criteria.
class FitError : public DomainError {
 public:
  using DomainError::DomainError;
};

inline double power_to_db(double ratio) { return 10.0 * std::log10(ratio); }
inline double db_to_power(double db) { return std::pow(10.0, db / 10.0); }
inline double amplitude_to_db(double ratio) { return 20.0 * std::log10(ratio); }

inline double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

inline double wavelength_to_frequency(double wavelength_m) {
  return kSpeedOfLight / wavelength_m;
}
inline double frequency_to_wavelength(double freq_hz) {
  return kSpeedOfLight / freq_hz;
}

}  // namespace ringlink

#endif  // RINGLINK_COMMON_HPP
