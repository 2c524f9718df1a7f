// SPDX-License-Identifier: Apache-2.0
//
// Discrete optical tone spectra and electro-optic modulation of a CW carrier.

#ifndef RINGLINK_MODULATION_HPP
#define RINGLINK_MODULATION_HPP

#include <optional>
#include <span>
#include <vector>

#include "ringlink/jones.hpp"

namespace ringlink {

/// Lines closer than this are treated as the same tone.
inline constexpr double kLineMergeToleranceHz = 1e3;
/// Sidebands are truncated once |J_n(m)| drops below this.
inline constexpr double kBesselTruncation = 1e-6;

struct SpectralLine {
  double freq_hz = 0.0;
  JonesVector field{};

  double power_w() const { return field.power(); }
};

/// Lines sorted by frequency; inserting a tone within the merge tolerance of
/// an existing one adds the fields coherently.
class OpticalSpectrum {
 public:
  OpticalSpectrum() = default;
  explicit OpticalSpectrum(std::span<const SpectralLine> lines);

  void add(const SpectralLine& line);

  std::span<const SpectralLine> lines() const { return lines_; }
  std::size_t size() const { return lines_.size(); }
  bool empty() const { return lines_.empty(); }
  const SpectralLine& operator[](std::size_t i) const { return lines_[i]; }

  /// Line within the merge tolerance of freq_hz, if any.
  const SpectralLine* find(double freq_hz) const;
  double total_power_w() const;

  /// Apply a per-line Jones operator that depends on the line frequency.
  template <typename Op>
  OpticalSpectrum transformed(Op&& op) const {
    OpticalSpectrum out;
    out.lines_.reserve(lines_.size());
    for (const auto& line : lines_) {
      out.lines_.push_back({line.freq_hz, op(line.freq_hz) * line.field});
    }
    return out;
  }

 private:
  std::vector<SpectralLine> lines_;
};

struct ModulatorDrive {
  double rf_freq_hz = 0.0;
  double mod_index_rad = 0.2;          // peak phase deviation m
  double bias_rad = kPi / 2.0;         // intensity modulator bias (quadrature)
  std::optional<int> max_order;        // default: first n with |J_n(m)| < 1e-6

  int resolved_max_order() const;
};

/// Integer-order Bessel function of the first kind, any sign of n.
double bessel_j(int n, double x);

OpticalSpectrum cw_carrier(double freq_hz, double power_w,
                           double pol_angle_from_te_rad);

/// Jacobi-Anger expansion: the line at f_c + n f_RF carries i^n J_n(m).
OpticalSpectrum phase_modulate(const OpticalSpectrum& spec,
                               const ModulatorDrive& drive);

/// Push-pull Mach-Zehnder: E = cos(bias/2 + m cos(w t)) E_in.
OpticalSpectrum intensity_modulate(const OpticalSpectrum& spec,
                                   const ModulatorDrive& drive);

}  // namespace ringlink

#endif  // RINGLINK_MODULATION_HPP
