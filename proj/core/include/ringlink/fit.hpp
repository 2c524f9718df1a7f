// SPDX-License-Identifier: Apache-2.0
//
// Ring parameter extraction from sampled single-resonance transmission
// traces (damped least squares), plus thermal-rate regression.

#ifndef RINGLINK_FIT_HPP
#define RINGLINK_FIT_HPP

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ringlink/ring_model.hpp"

namespace ringlink {

enum class Port { Through, Drop };

constexpr std::string_view to_string(Port port) {
  return port == Port::Through ? "through" : "drop";
}
Port parse_port(std::string_view text);

struct TraceSample {
  double freq_hz = 0.0;
  double power = 0.0;  // linear transmission
};

struct MeasuredTrace {
  std::vector<TraceSample> samples;
  Port port = Port::Through;
  PolMode pol = PolMode::TE;
  double fsr_hz = 0.0;      // comb spacing, needed to map detuning to phase
  bool calibrated = false;  // true: powers are absolute, scale fixed at 1

  /// Throws unless >= 20 samples with strictly increasing frequency.
  void validate() const;
};

/// Linear trace sampled from a model, n points evenly over f0 +/- half_span.
MeasuredTrace simulate_trace(const RingModel& ring, PolMode pol, Port port,
                             double f0_hz, double half_span_hz, std::size_t n,
                             double scale = 1.0);

struct ResonanceGuess {
  double t = 0.0;
  double a = 0.0;
  double f0_hz = 0.0;
  double scale = 1.0;
};

ResonanceGuess initial_guess(const MeasuredTrace& trace);

struct FitBranch {
  double t = 0.0;
  double a = 0.0;
  double f0_hz = 0.0;
  double amplitude_scale = 1.0;
  double cost = 0.0;
};

struct FitResult {
  double t = 0.0;
  double a = 0.0;
  double f0_hz = 0.0;
  double amplitude_scale = 1.0;
  double rms_residual = 0.0;
  double fwhm_hz = 0.0;
  double q = 0.0;

  /// One-sigma errors for (t, a, f0, scale) from the Gauss-Newton
  /// covariance; zero for parameters held fixed.
  std::array<double, 4> std_error{};
  int iterations = 0;
  std::vector<double> cost_history;  // cost after every accepted step

  /// A parameter ended on its bound.
  bool pinned_at_bound = false;
  /// Fitted a == 1: the notch depth is unbounded, no finite floor explains it.
  bool lossless_singular = false;
  /// Uncalibrated drop trace: only t^2 a is identifiable, a is pinned.
  bool depth_uncalibrated = false;
  /// Mirror-coupling branch whose residual is within 1% of the best one.
  std::optional<FitBranch> alternate;
  std::vector<std::string> notes;
};

FitResult fit_resonance(const MeasuredTrace& trace, const ResonanceGuess& guess);

/// Converts a trace recorded in dB versus wavelength into linear power versus
/// ascending frequency.
std::vector<TraceSample> trace_from_db_wavelength(
    std::span<const double> wavelength_m, std::span<const double> power_db);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least-squares line; throws when x has no spread.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct ThermalSample {
  double temperature_c = 0.0;
  PolMode pol = PolMode::TE;
  double f0_hz = 0.0;
};

struct ThermalRates {
  PerPol<double> rate_hz_per_c{};       // positive = redshift
  PerPol<double> f0_at_zero_c_hz{};
  double interval_slope_hz_per_c = 0.0;  // rate_te - rate_tm
};

ThermalRates fit_thermal_rates(std::span<const ThermalSample> samples);

struct TemperatureTrace {
  double temperature_c = 0.0;
  MeasuredTrace trace;
};

/// Fits f0 of every trace, then regresses f0 against temperature.
ThermalRates fit_thermal_rates(std::span<const TemperatureTrace> traces);

}  // namespace ringlink

#endif  // RINGLINK_FIT_HPP
