// SPDX-License-Identifier: Apache-2.0
//
// Dual-polarization add-drop micro-ring: transfer functions, resonance
// geometry and linear thermal tuning.

#ifndef RINGLINK_RING_MODEL_HPP
#define RINGLINK_RING_MODEL_HPP

#include <optional>
#include <vector>

#include "ringlink/common.hpp"

namespace ringlink {

/// Round-trip amplitude pinned when a ring is specified by linewidth alone.
inline constexpr double kDefaultRoundTripA = 0.9982;

/// Self-coupling amplitude t (identical at both couplers) and round-trip
/// amplitude transmission a. k = sqrt(1 - t^2).
struct Coupling {
  double t = 0.0;
  double a = 1.0;

  double k_squared() const { return 1.0 - t * t; }
  /// Pole radius t^2 a of the ring response.
  double pole() const { return t * t * a; }
};

void validate(const Coupling& c);

struct ThermalTuning {
  double t_ref_c = 25.0;
  PerPol<double> rate_hz_per_c{};  // resonance redshift per degree
};

struct PhysicalRingParams {
  double radius_m = 0.0;
  PerPol<double> n_eff{};
  PerPol<double> dn_dlambda_per_m{};  // first-order dispersion about lambda_ref_m
  double lambda_ref_m = 1550e-9;
  Coupling coupling{};
  ThermalTuning thermal{};
};

struct SpectralRingParams {
  PerPol<double> f0_hz{};   // an exactly resonant frequency per polarization
  PerPol<double> fsr_hz{};
  /// Exactly one of coupling / fwhm_hz must be set.
  std::optional<Coupling> coupling;
  std::optional<double> fwhm_hz;
  double tie_break_a = kDefaultRoundTripA;
  ThermalTuning thermal{};
};

/// Round-trip phase, affine in optical frequency:
///   phi(f) = 2 pi (f - anchor_hz) / fsr_hz + offset_rad.
/// Both parameterizations reduce to this form (first-order dispersion keeps
/// f * n_eff(lambda(f)) affine in f).
struct PhaseLaw {
  double anchor_hz = 0.0;
  double fsr_hz = 0.0;
  double offset_rad = 0.0;

  double operator()(double f_hz) const {
    return kTwoPi * (f_hz - anchor_hz) / fsr_hz + offset_rad;
  }
  double slope() const { return kTwoPi / fsr_hz; }
};

class RingModel {
 public:
  RingModel(PerPol<PhaseLaw> phase, PerPol<Coupling> coupling,
            ThermalTuning thermal);

  /// Round-trip phase at optical frequency f for the current temperature.
  double phase(PolMode pol, double f_hz) const;
  /// d(phase)/df in rad/Hz.
  double phase_slope(PolMode pol) const { return phase_[pol].slope(); }
  double fsr_hz(PolMode pol) const { return phase_[pol].fsr_hz; }

  const Coupling& coupling(PolMode pol) const { return coupling_[pol]; }
  const ThermalTuning& thermal() const { return thermal_; }
  double temperature_c() const { return temperature_c_; }
  /// Downward frequency shift of the comb relative to t_ref_c.
  double thermal_shift_hz(PolMode pol) const;

  RingModel with_coupling(PolMode pol, Coupling c) const;
  RingModel with_temperature(double temperature_c) const;

 private:
  PerPol<PhaseLaw> phase_;
  PerPol<Coupling> coupling_;
  ThermalTuning thermal_;
  double temperature_c_;
};

RingModel ring_from_physical(const PhysicalRingParams& p);
RingModel ring_from_spectral(const SpectralRingParams& p);

/// Half-power linewidth of the Airy drop response for a given pole radius.
double airy_fwhm_hz(double pole, double fsr_hz);
/// Inverse of airy_fwhm_hz: the pole radius t^2 a producing `fwhm_hz`.
double pole_for_fwhm(double fwhm_hz, double fsr_hz);
/// Tie-break coupling: a pinned, t solved so the linewidth equals fwhm_hz.
Coupling coupling_for_fwhm(double fwhm_hz, double fsr_hz,
                           double pinned_a = kDefaultRoundTripA);

Complex drop_transfer(const RingModel& m, PolMode pol, double f_hz);
Complex through_transfer(const RingModel& m, PolMode pol, double f_hz);

/// Resonances (phase == 0 mod 2 pi) inside [f_lo, f_hi], ascending.
std::vector<double> find_resonances(const RingModel& m, PolMode pol,
                                    double f_lo_hz, double f_hi_hz);

/// Resonance of `pol` closest to f_hz.
double nearest_resonance(const RingModel& m, PolMode pol, double f_hz);

struct ResonanceMetrics {
  double f0_hz = 0.0;
  double fwhm_hz = 0.0;
  double q = 0.0;
  std::optional<double> bw20db_hz;  // absent when the floor is above -20 dB
  double notch_depth_db = 0.0;      // |T|^2 at f0
  double drop_loss_db = 0.0;        // |D|^2 at f0
};

ResonanceMetrics resonance_metrics(const RingModel& m, PolMode pol,
                                   double f0_hz);

struct ModeInterval {
  double delta_hz = 0.0;
  double f_te_hz = 0.0;
  double f_tm_hz = 0.0;
  double complementary_hz = 0.0;  // fsr_te - delta
};

ModeInterval mode_interval(const RingModel& m, double f_lo_hz, double f_hi_hz);

RingModel at_temperature(const RingModel& m, double temperature_c);

}  // namespace ringlink

#endif  // RINGLINK_RING_MODEL_HPP
