// SPDX-License-Identifier: Apache-2.0
//
// End-to-end link simulations built on the ring, Jones and modulation
// modules: the orthogonally polarized single-sideband generator (drop port,
// optional polarizer) and the dual-channel RF equalizer (phase modulation,
// through port, square-law detection).

#ifndef RINGLINK_LINK_HPP
#define RINGLINK_LINK_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ringlink/jones.hpp"
#include "ringlink/modulation.hpp"
#include "ringlink/ring_model.hpp"

namespace ringlink {

/// Relative responses below this are reported at the floor instead of -inf.
inline constexpr double kS21FloorDb = -400.0;

struct OssbConfig {
  RingModel ring;
  double carrier_freq_hz = 0.0;
  double carrier_power_w = 1e-3;
  double launch_angle_rad = kPi / 4.0;  // from the TE axis
  ModulatorDrive drive{};
  std::optional<PolarizerAngle> polarizer;  // absent: orthogonal output
};

struct OssbReport {
  OpticalSpectrum drop_spectrum;
  std::optional<OpticalSpectrum> projected_spectrum;
  double carrier_freq_hz = 0.0;
  double selected_sideband_hz = 0.0;
  double rejected_sideband_hz = 0.0;
  /// Carrier over selected first-order sideband, behind the polarizer when
  /// one is configured.
  double ocsr_db = 0.0;
  /// Selected over rejected first-order sideband at the drop port.
  double unused_sideband_suppression_db = 0.0;
  std::vector<std::string> warnings;
};

OssbReport simulate_ossb(const OssbConfig& cfg);

/// Scalar field along the polarizer axis for each line.
std::vector<Complex> project_field(std::span<const SpectralLine> ring_out,
                                   PolarizerAngle theta);

/// sum_k E*(f_k) E(f_k + rf) per polarization; orthogonal components never
/// beat. Lines pair when their spacing matches rf within 1 kHz.
PerPol<Complex> photodetect_by_pol(const OpticalSpectrum& spec, double rf_hz,
                                   double responsivity_a_per_w = 1.0);
Complex photodetect(const OpticalSpectrum& spec, double rf_hz,
                    double responsivity_a_per_w = 1.0);

struct EqualizerConfig {
  RingModel ring;
  double carrier_freq_hz = 0.0;
  double carrier_power_w = 1e-3;
  double input_angle_rad = kPi / 2.0;  // from the TE axis
  double mod_index_rad = 0.2;
  std::vector<double> rf_grid_hz;
  double pd_responsivity_a_per_w = 1.0;
  std::optional<double> absolute_reference_a;  // default: grid maximum
  unsigned threads = 1;
};

struct RfBeat {
  Complex total{};
  PerPol<Complex> by_pol{};
};

RfBeat equalizer_beat(const EqualizerConfig& cfg, double rf_hz);

struct RfPoint {
  double rf_hz = 0.0;
  double s21_db = 0.0;
  PerPol<double> s21_pol_db{};  // each channel against the same reference
};

struct RfResponse {
  std::vector<RfPoint> points;
  double reference_a = 0.0;
};

RfResponse simulate_equalizer(const EqualizerConfig& cfg);

/// Evenly spaced grid covering both passbands +/- 5 linewidths.
std::vector<double> default_rf_grid(const EqualizerConfig& cfg,
                                    std::size_t points = 201);

struct Passband {
  PolMode pol = PolMode::TE;
  double resonance_hz = 0.0;
  double nominal_center_hz = 0.0;  // |f_res - f_carrier|
  double peak_rf_hz = 0.0;
  double peak_beat_a = 0.0;        // channel beat amplitude at the peak
  double center_hz = 0.0;          // midpoint of the -3 dB points
  double width_3db_hz = 0.0;
};

/// Passband carried by the `pol` channel around its resonance nearest the
/// carrier. The shape is located on the unit-power channel response, so it
/// is defined even when the configured launch leaves the channel dark.
Passband analyze_passband(const EqualizerConfig& cfg, PolMode pol);

struct ErPoint {
  double theta_rad = 0.0;
  double er_db = 0.0;
  PerPol<double> peak_beat_a{};
};

/// Extinction ratio between the TE- and TM-channel passbands: the ratio of
/// their peak photocurrent amplitudes (proportional to each channel's
/// optical power) in 10 log10 form.
std::vector<ErPoint> equalizer_er_curve(const EqualizerConfig& cfg,
                                        std::span<const double> thetas_rad);

struct PassbandTrack {
  double offset_hz = 0.0;
  PerPol<double> center_hz{};
  PerPol<double> nominal_center_hz{};
  PerPol<double> resonance_hz{};
};

std::vector<PassbandTrack> passband_center_tracking(
    const EqualizerConfig& cfg, std::span<const double> carrier_offsets_hz);

}  // namespace ringlink

#endif  // RINGLINK_LINK_HPP
