// SPDX-License-Identifier: Apache-2.0

#include "ringlink/link.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cstdint>
#include <limits>
#include <sstream>

#include "ringlink/parallel.hpp"

namespace ringlink {

namespace {

double line_power(const OpticalSpectrum& spec, double f_hz) {
  const SpectralLine* line = spec.find(f_hz);
  return line ? line->power_w() : 0.0;
}

bool near_any_resonance(const RingModel& ring, double f_hz) {
  for (PolMode pol : kPolModes) {
    const double f_res = nearest_resonance(ring, pol, f_hz);
    const double fwhm = airy_fwhm_hz(ring.coupling(pol).pole(), ring.fsr_hz(pol));
    if (std::abs(f_res - f_hz) <= fwhm) return true;
  }
  return false;
}

}  // namespace

std::vector<Complex> project_field(std::span<const SpectralLine> ring_out,
                                   PolarizerAngle theta) {
  // P = u u^T with u = (sin, cos): the transmitted field is u (u . E).
  const double s = std::sin(theta.radians());
  const double c = std::cos(theta.radians());
  std::vector<Complex> out;
  out.reserve(ring_out.size());
  for (const auto& line : ring_out) {
    out.push_back(s * line.field.te + c * line.field.tm);
  }
  return out;
}

OssbReport simulate_ossb(const OssbConfig& cfg) {
  const auto input = intensity_modulate(
      cw_carrier(cfg.carrier_freq_hz, cfg.carrier_power_w, cfg.launch_angle_rad),
      cfg.drive);

  OssbReport report;
  report.carrier_freq_hz = cfg.carrier_freq_hz;
  report.drop_spectrum = input.transformed(
      [&](double f) { return ring_drop_operator(cfg.ring, f); });

  if (!near_any_resonance(cfg.ring, cfg.carrier_freq_hz)) {
    report.warnings.emplace_back(
        "carrier is more than one linewidth away from every resonance");
  }

  const double upper = cfg.carrier_freq_hz + cfg.drive.rf_freq_hz;
  const double lower = cfg.carrier_freq_hz - cfg.drive.rf_freq_hz;
  const double p_upper = line_power(report.drop_spectrum, upper);
  const double p_lower = line_power(report.drop_spectrum, lower);
  if (!(p_upper > 0.0 || p_lower > 0.0)) {
    throw DomainError("OCSR undefined: the spectrum carries no sideband power");
  }
  const bool upper_selected = p_upper >= p_lower;
  report.selected_sideband_hz = upper_selected ? upper : lower;
  report.rejected_sideband_hz = upper_selected ? lower : upper;
  const double p_sel = std::max(p_upper, p_lower);
  const double p_rej = std::min(p_upper, p_lower);
  report.unused_sideband_suppression_db =
      p_rej > 0.0 ? power_to_db(p_sel / p_rej)
                  : std::numeric_limits<double>::infinity();

  const OpticalSpectrum* out = &report.drop_spectrum;
  if (cfg.polarizer) {
    const JonesMatrix pol = polarizer_matrix(*cfg.polarizer);
    report.projected_spectrum =
        report.drop_spectrum.transformed([&](double) { return pol; });
    out = &*report.projected_spectrum;
  }
  const double p_carrier = line_power(*out, cfg.carrier_freq_hz);
  const double p_sideband = line_power(*out, report.selected_sideband_hz);
  if (!(p_sideband > 0.0)) {
    throw DomainError("OCSR undefined: selected sideband fully extinguished");
  }
  report.ocsr_db = p_carrier > 0.0 ? power_to_db(p_carrier / p_sideband)
                                   : -std::numeric_limits<double>::infinity();
  return report;
}

PerPol<Complex> photodetect_by_pol(const OpticalSpectrum& spec, double rf_hz,
                                   double responsivity_a_per_w) {
  if (!(rf_hz > 0.0)) throw DomainError("rf frequency must be > 0");
  PerPol<Complex> beat{};
  for (const auto& line : spec.lines()) {
    const SpectralLine* partner = spec.find(line.freq_hz + rf_hz);
    if (partner == nullptr) continue;
    for (PolMode pol : kPolModes) {
      beat[pol] += std::conj(line.field[pol]) * partner->field[pol];
    }
  }
  for (PolMode pol : kPolModes) beat[pol] *= responsivity_a_per_w;
  return beat;
}

Complex photodetect(const OpticalSpectrum& spec, double rf_hz,
                    double responsivity_a_per_w) {
  const auto beat = photodetect_by_pol(spec, rf_hz, responsivity_a_per_w);
  return beat.te + beat.tm;
}

RfBeat equalizer_beat(const EqualizerConfig& cfg, double rf_hz) {
  ModulatorDrive drive;
  drive.rf_freq_hz = rf_hz;
  drive.mod_index_rad = cfg.mod_index_rad;
  const auto modulated = phase_modulate(
      cw_carrier(cfg.carrier_freq_hz, cfg.carrier_power_w, cfg.input_angle_rad),
      drive);
  const auto out = modulated.transformed(
      [&](double f) { return ring_through_operator(cfg.ring, f); });
  RfBeat beat;
  beat.by_pol = photodetect_by_pol(out, rf_hz, cfg.pd_responsivity_a_per_w);
  beat.total = beat.by_pol.te + beat.by_pol.tm;
  return beat;
}

namespace {

double db_or_floor(double ratio) {
  if (!(ratio > 0.0)) return kS21FloorDb;
  return std::max(amplitude_to_db(ratio), kS21FloorDb);
}

double channel_linewidth(const RingModel& ring, PolMode pol, double f_res) {
  return resonance_metrics(ring, pol, f_res).fwhm_hz;
}

}  // namespace

RfResponse simulate_equalizer(const EqualizerConfig& cfg) {
  if (cfg.rf_grid_hz.empty()) throw DomainError("rf grid is empty");
  for (std::size_t i = 0; i < cfg.rf_grid_hz.size(); ++i) {
    if (!(cfg.rf_grid_hz[i] > 0.0) ||
        (i > 0 && !(cfg.rf_grid_hz[i] > cfg.rf_grid_hz[i - 1]))) {
      throw DomainError("rf grid must be positive and strictly increasing");
    }
  }
  const auto beats = parallel_map(
      cfg.rf_grid_hz.size(),
      [&](std::size_t i) { return equalizer_beat(cfg, cfg.rf_grid_hz[i]); },
      cfg.threads);

  RfResponse resp;
  if (cfg.absolute_reference_a) {
    resp.reference_a = *cfg.absolute_reference_a;
  } else {
    for (const auto& b : beats) {
      resp.reference_a = std::max(resp.reference_a, std::abs(b.total));
    }
  }
  if (!(resp.reference_a > 0.0)) {
    throw DomainError("equalizer response is identically zero on the grid");
  }
  resp.points.reserve(beats.size());
  for (std::size_t i = 0; i < beats.size(); ++i) {
    RfPoint p;
    p.rf_hz = cfg.rf_grid_hz[i];
    p.s21_db = db_or_floor(std::abs(beats[i].total) / resp.reference_a);
    for (PolMode pol : kPolModes) {
      p.s21_pol_db[pol] = db_or_floor(std::abs(beats[i].by_pol[pol]) / resp.reference_a);
    }
    resp.points.push_back(p);
  }
  return resp;
}

std::vector<double> default_rf_grid(const EqualizerConfig& cfg,
                                    std::size_t points) {
  if (points < 2) throw DomainError("rf grid needs at least two points");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (PolMode pol : kPolModes) {
    const double f_res = nearest_resonance(cfg.ring, pol, cfg.carrier_freq_hz);
    const double center = std::abs(f_res - cfg.carrier_freq_hz);
    const double fwhm = channel_linewidth(cfg.ring, pol, f_res);
    lo = std::min(lo, center - 5.0 * fwhm);
    hi = std::max(hi, center + 5.0 * fwhm);
  }
  lo = std::max(lo, 1e-3 * hi);
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return grid;
}

Passband analyze_passband(const EqualizerConfig& cfg, PolMode pol) {
  Passband band;
  band.pol = pol;
  band.resonance_hz = nearest_resonance(cfg.ring, pol, cfg.carrier_freq_hz);
  band.nominal_center_hz = std::abs(band.resonance_hz - cfg.carrier_freq_hz);
  const double fwhm = channel_linewidth(cfg.ring, pol, band.resonance_hz);
  if (band.nominal_center_hz < fwhm) {
    throw DomainError("carrier sits within a linewidth of the " +
                      std::string(to_string(pol)) +
                      " resonance; passband not resolvable");
  }

  EqualizerConfig unit = cfg;
  unit.carrier_power_w = 1.0;
  unit.pd_responsivity_a_per_w = 1.0;
  unit.input_angle_rad = pol == PolMode::TE ? 0.0 : kPi / 2.0;
  auto response = [&](double rf) {
    return std::abs(equalizer_beat(unit, rf).by_pol[pol]);
  };

  const double lo = std::max(band.nominal_center_hz - 2.0 * fwhm, 0.5 * fwhm);
  const double hi = band.nominal_center_hz + 2.0 * fwhm;
  auto [peak_rf, neg_peak] = boost::math::tools::brent_find_minima(
      [&](double rf) { return -response(rf); }, lo, hi, 40);
  const double peak = -neg_peak;
  band.peak_rf_hz = peak_rf;
  band.peak_beat_a = std::abs(equalizer_beat(cfg, peak_rf).by_pol[pol]);

  const double half = peak / std::sqrt(2.0);
  auto g = [&](double rf) { return response(rf) - half; };
  auto edge = [&](double direction) {
    double step = fwhm;
    double outer = peak_rf + direction * step;
    while (g(outer) > 0.0) {
      step *= 2.0;
      outer = peak_rf + direction * step;
      if (outer <= 0.0 || step > 0.5 * cfg.ring.fsr_hz(pol)) {
        throw DomainError("passband has no -3 dB edge");
      }
    }
    boost::math::tools::eps_tolerance<double> tol(44);
    std::uintmax_t iters = 200;
    auto [a, b] = boost::math::tools::toms748_solve(
        g, std::min(peak_rf, outer), std::max(peak_rf, outer), tol, iters);
    return 0.5 * (a + b);
  };
  const double left = edge(-1.0);
  const double right = edge(+1.0);
  band.width_3db_hz = right - left;
  band.center_hz = 0.5 * (left + right);
  return band;
}

std::vector<ErPoint> equalizer_er_curve(const EqualizerConfig& cfg,
                                        std::span<const double> thetas_rad) {
  const Passband te = analyze_passband(cfg, PolMode::TE);
  const Passband tm = analyze_passband(cfg, PolMode::TM);
  const double fwhm = std::max(te.width_3db_hz, tm.width_3db_hz);
  if (std::abs(te.center_hz - tm.center_hz) < fwhm) {
    throw DomainError(
        "TE and TM passbands overlap; carrier is equidistant within a linewidth");
  }
  return parallel_map(
      thetas_rad.size(),
      [&](std::size_t i) {
        EqualizerConfig c = cfg;
        c.input_angle_rad = thetas_rad[i];
        ErPoint p;
        p.theta_rad = thetas_rad[i];
        p.peak_beat_a.te = std::abs(equalizer_beat(c, te.peak_rf_hz).by_pol.te);
        p.peak_beat_a.tm = std::abs(equalizer_beat(c, tm.peak_rf_hz).by_pol.tm);
        if (!(p.peak_beat_a.te > 0.0 && p.peak_beat_a.tm > 0.0)) {
          std::ostringstream msg;
          msg << "extinction ratio diverges at theta = " << rad_to_deg(p.theta_rad)
              << " deg (one channel is dark)";
          throw DomainError(msg.str());
        }
        p.er_db = power_to_db(p.peak_beat_a.te / p.peak_beat_a.tm);
        return p;
      },
      cfg.threads);
}

std::vector<PassbandTrack> passband_center_tracking(
    const EqualizerConfig& cfg, std::span<const double> carrier_offsets_hz) {
  return parallel_map(
      carrier_offsets_hz.size(),
      [&](std::size_t i) {
        EqualizerConfig c = cfg;
        c.carrier_freq_hz += carrier_offsets_hz[i];
        PassbandTrack track;
        track.offset_hz = carrier_offsets_hz[i];
        for (PolMode pol : kPolModes) {
          const Passband band = analyze_passband(c, pol);
          track.center_hz[pol] = band.center_hz;
          track.nominal_center_hz[pol] = band.nominal_center_hz;
          track.resonance_hz[pol] = band.resonance_hz;
        }
        return track;
      },
      cfg.threads);
}

}  // namespace ringlink
