// SPDX-License-Identifier: Apache-2.0

#include "ringlink/modulation.hpp"

#include <algorithm>
#include <cmath>

namespace ringlink {

OpticalSpectrum::OpticalSpectrum(std::span<const SpectralLine> lines) {
  for (const auto& line : lines) add(line);
}

void OpticalSpectrum::add(const SpectralLine& line) {
  if (!(line.freq_hz > 0.0)) {
    throw DomainError("spectral line frequency must be > 0");
  }
  auto it = std::lower_bound(
      lines_.begin(), lines_.end(), line.freq_hz - kLineMergeToleranceHz,
      [](const SpectralLine& l, double f) { return l.freq_hz < f; });
  if (it != lines_.end() &&
      std::abs(it->freq_hz - line.freq_hz) <= kLineMergeToleranceHz) {
    it->field += line.field;
    return;
  }
  lines_.insert(it, line);
}

const SpectralLine* OpticalSpectrum::find(double freq_hz) const {
  auto it = std::lower_bound(
      lines_.begin(), lines_.end(), freq_hz - kLineMergeToleranceHz,
      [](const SpectralLine& l, double f) { return l.freq_hz < f; });
  if (it != lines_.end() &&
      std::abs(it->freq_hz - freq_hz) <= kLineMergeToleranceHz) {
    return &*it;
  }
  return nullptr;
}

double OpticalSpectrum::total_power_w() const {
  double p = 0.0;
  for (const auto& line : lines_) p += line.power_w();
  return p;
}

double bessel_j(int n, double x) {
  const double v = std::cyl_bessel_j(static_cast<double>(std::abs(n)), std::abs(x));
  // J_{-n}(x) = (-1)^n J_n(x) and J_n(-x) = (-1)^n J_n(x).
  int sign_flips = 0;
  if (n < 0 && (n % 2 != 0)) ++sign_flips;
  if (x < 0.0 && (n % 2 != 0)) ++sign_flips;
  return (sign_flips % 2 == 0) ? v : -v;
}

int ModulatorDrive::resolved_max_order() const {
  if (max_order) {
    if (*max_order < 1) throw DomainError("max_order must be >= 1");
    return *max_order;
  }
  int n = 1;
  while (std::abs(bessel_j(n, mod_index_rad)) >= kBesselTruncation) ++n;
  return n;
}

OpticalSpectrum cw_carrier(double freq_hz, double power_w,
                           double pol_angle_from_te_rad) {
  if (!(power_w >= 0.0)) throw DomainError("carrier power must be >= 0");
  const double amp = std::sqrt(power_w);
  OpticalSpectrum out;
  out.add({freq_hz,
           {amp * std::cos(pol_angle_from_te_rad),
            amp * std::sin(pol_angle_from_te_rad)}});
  return out;
}

namespace {

void validate_drive(const ModulatorDrive& drive) {
  if (!(drive.rf_freq_hz > 0.0)) throw DomainError("rf_freq must be > 0");
  if (!(drive.mod_index_rad >= 0.0)) throw DomainError("mod_index must be >= 0");
}

const SpectralLine& single_carrier(const OpticalSpectrum& spec) {
  if (spec.size() != 1) {
    throw DomainError("modulators accept a single-carrier spectrum only");
  }
  return spec[0];
}

// Expand a periodic field modulation with per-order complex factors.
template <typename Factor>
OpticalSpectrum expand(const SpectralLine& carrier, const ModulatorDrive& drive,
                       Factor&& factor) {
  const int order = drive.resolved_max_order();
  OpticalSpectrum out;
  for (int n = -order; n <= order; ++n) {
    const Complex f = factor(n);
    if (f == Complex{}) continue;
    out.add({carrier.freq_hz + n * drive.rf_freq_hz, f * carrier.field});
  }
  return out;
}

Complex i_pow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

OpticalSpectrum phase_modulate(const OpticalSpectrum& spec,
                               const ModulatorDrive& drive) {
  validate_drive(drive);
  const auto& carrier = single_carrier(spec);
  return expand(carrier, drive, [&](int n) {
    return i_pow(n) * bessel_j(n, drive.mod_index_rad);
  });
}

OpticalSpectrum intensity_modulate(const OpticalSpectrum& spec,
                                   const ModulatorDrive& drive) {
  validate_drive(drive);
  const auto& carrier = single_carrier(spec);
  const double half_bias = 0.5 * drive.bias_rad;
  // (1/2) i^n J_n(m) [e^{i b/2} + (-1)^n e^{-i b/2}]
  return expand(carrier, drive, [&](int n) {
    const double j = bessel_j(n, drive.mod_index_rad);
    const Complex arms = (n % 2 == 0) ? Complex(std::cos(half_bias), 0.0)
                                      : Complex(0.0, std::sin(half_bias));
    return i_pow(n) * j * arms;
  });
}

}  // namespace ringlink
