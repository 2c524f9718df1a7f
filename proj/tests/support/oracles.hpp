// SPDX-License-Identifier: Apache-2.0
//
// Independent reference computations used only by the tests. Nothing here
// calls into the code paths it is used to check.

#ifndef RINGLINK_TESTS_ORACLES_HPP
#define RINGLINK_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "ringlink/ring_model.hpp"

namespace ringlink::testing {

/// J_n(x) from its power series, summed until terms vanish.
inline double bessel_series(int n, double x) {
  const int order = std::abs(n);
  double term = 1.0;
  for (int k = 1; k <= order; ++k) term *= (x / 2.0) / k;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= -(x / 2.0) * (x / 2.0) / (static_cast<double>(k) * (k + order));
    sum += term;
    if (std::abs(term) < 1e-30 * std::abs(sum)) break;
  }
  return (n < 0 && (order % 2 == 1)) ? -sum : sum;
}

/// Fourier coefficient of harmonic n of a field sampled over one RF period.
inline std::complex<double> harmonic(
    const std::function<std::complex<double>(double)>& field_of_phase, int n,
    int samples = 1 << 14) {
  std::complex<double> acc{};
  const double two_pi = 2.0 * std::acos(-1.0);
  for (int k = 0; k < samples; ++k) {
    const double wt = two_pi * k / samples;
    acc += field_of_phase(wt) * std::polar(1.0, -n * wt);
  }
  return acc / static_cast<double>(samples);
}

/// Extended-precision variant for coefficients far below unity: the double
/// version bottoms out near 1e-15 absolute, too coarse to check lines at the
/// Bessel truncation threshold to 1e-9 relative.
inline std::complex<double> harmonic_ext(
    const std::function<std::complex<long double>(long double)>& field_of_phase, int n,
    int samples = 1 << 12) {
  std::complex<long double> acc{};
  const long double two_pi = 2.0L * std::acos(-1.0L);
  for (int k = 0; k < samples; ++k) {
    const long double wt = two_pi * k / samples;
    // Reduce n*k modulo the period so the twiddle phase stays exact.
    const long long turn = ((-static_cast<long long>(n) * k) % samples + samples) % samples;
    acc += field_of_phase(wt) * std::polar(1.0L, two_pi * turn / samples);
  }
  acc /= static_cast<long double>(samples);
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

/// Half-maximum width of a sampled peak by linear interpolation on a dense
/// grid around `center`.
inline double scanned_fwhm(const std::function<double(double)>& power,
                           double center, double half_span, int points) {
  std::vector<double> f(points), p(points);
  double peak = 0.0;
  for (int i = 0; i < points; ++i) {
    f[i] = center - half_span + 2.0 * half_span * i / (points - 1);
    p[i] = power(f[i]);
    peak = std::max(peak, p[i]);
  }
  const double half = 0.5 * peak;
  double left = 0.0, right = 0.0;
  for (int i = 1; i < points; ++i) {
    if (p[i - 1] < half && p[i] >= half) {
      left = f[i - 1] + (half - p[i - 1]) / (p[i] - p[i - 1]) * (f[i] - f[i - 1]);
    }
    if (p[i - 1] >= half && p[i] < half) {
      right = f[i - 1] + (p[i - 1] - half) / (p[i - 1] - p[i]) * (f[i] - f[i - 1]);
    }
  }
  return right - left;
}

/// Resonant frequencies m * fsr of an undispersed comb inside [lo, hi].
inline std::vector<double> enumerate_comb(double fsr, double lo, double hi) {
  std::vector<double> out;
  for (double m = std::ceil(lo / fsr); m * fsr <= hi; m += 1.0) out.push_back(m * fsr);
  return out;
}

/// |drop|^2 of an add-drop ring written directly from the Airy form, with
/// detuning measured from a resonance.
inline double airy_drop_power(double t, double a, double detune_hz, double fsr_hz) {
  const double k2 = 1.0 - t * t;
  const double r = t * t * a;
  const double phi = 2.0 * std::acos(-1.0) * detune_hz / fsr_hz;
  return k2 * k2 * a / (1.0 - 2.0 * r * std::cos(phi) + r * r);
}

/// |through|^2 in the same form.
inline double airy_through_power(double t, double a, double detune_hz, double fsr_hz) {
  const double r = t * t * a;
  const double phi = 2.0 * std::acos(-1.0) * detune_hz / fsr_hz;
  return t * t * (1.0 - 2.0 * a * std::cos(phi) + a * a) /
         (1.0 - 2.0 * r * std::cos(phi) + r * r);
}

/// The measured device: TE at 1550.47 nm, TM 16.6 GHz above, 49 GHz FSR,
/// 140 MHz linewidth, thermal rates 1.77 / 1.67 GHz per degree.
inline SpectralRingParams reference_device() {
  SpectralRingParams p;
  p.f0_hz.te = kSpeedOfLight / 1550.47e-9;
  p.f0_hz.tm = p.f0_hz.te + 16.6e9;
  p.fsr_hz = {49.0e9, 49.0e9};
  p.fwhm_hz = 140e6;
  p.thermal.t_ref_c = 23.0;
  p.thermal.rate_hz_per_c = {1.77e9, 1.67e9};
  return p;
}

}  // namespace ringlink::testing

#endif  // RINGLINK_TESTS_ORACLES_HPP
