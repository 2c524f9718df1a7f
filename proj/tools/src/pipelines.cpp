// SPDX-License-Identifier: Apache-2.0

#include "ringlink/cli/pipelines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ringlink/parallel.hpp"

namespace ringlink::cli {

namespace {

std::string key(std::string_view prefix, PolMode pol, std::string_view suffix) {
  return std::string(prefix) + "_" + std::string(to_string(pol)) + "_" + std::string(suffix);
}

Json lines_json(const OpticalSpectrum& spec) {
  Json arr = Json::array();
  for (const auto& l : spec.lines()) {
    arr.push_back({{"freq_hz", l.freq_hz},
                   {"power_w", l.power_w()},
                   {"te_re", l.field.te.real()},
                   {"te_im", l.field.te.imag()},
                   {"tm_re", l.field.tm.real()},
                   {"tm_im", l.field.tm.imag()}});
  }
  return arr;
}

RunOutput run_spectrum(const SpectrumExperiment& e) {
  RunOutput out;
  const RingModel& m = e.ring.model;
  Json rows = Json::array();
  for (std::size_t i = 0; i < e.points; ++i) {
    const double f = e.f_start_hz + (e.f_stop_hz - e.f_start_hz) * static_cast<double>(i) /
                                        static_cast<double>(e.points - 1);
    rows.push_back({{"freq_hz", f},
                    {"drop_te", std::norm(drop_transfer(m, PolMode::TE, f))},
                    {"drop_tm", std::norm(drop_transfer(m, PolMode::TM, f))},
                    {"through_te", std::norm(through_transfer(m, PolMode::TE, f))},
                    {"through_tm", std::norm(through_transfer(m, PolMode::TM, f))}});
  }
  out.outputs["transmission"] = std::move(rows);

  Json resonances = Json::array();
  const double center = 0.5 * (e.f_start_hz + e.f_stop_hz);
  bool both_present = true;
  for (PolMode pol : kPolModes) {
    const auto found = find_resonances(m, pol, e.f_start_hz, e.f_stop_hz);
    for (double f : found) {
      resonances.push_back({{"pol", std::string(to_string(pol))},
                            {"freq_hz", f},
                            {"wavelength_m", frequency_to_wavelength(f)}});
    }
    both_present = both_present && !found.empty();
    const double f0 = nearest_resonance(m, pol, center);
    const ResonanceMetrics r = resonance_metrics(m, pol, f0);
    out.scalars[key("fsr", pol, "hz")] = m.fsr_hz(pol);
    out.scalars[key("resonance", pol, "hz")] = r.f0_hz;
    out.scalars[key("resonance", pol, "count")] = found.size();
    out.scalars[key("fwhm", pol, "hz")] = r.fwhm_hz;
    out.scalars["q_" + std::string(to_string(pol))] = r.q;
    if (r.bw20db_hz) out.scalars[key("bw20db", pol, "hz")] = *r.bw20db_hz;
    out.scalars[key("notch_depth", pol, "db")] = r.notch_depth_db;
    out.scalars[key("drop_loss", pol, "db")] = r.drop_loss_db;
  }
  out.outputs["resonances"] = std::move(resonances);
  out.scalars["temperature_c"] = m.temperature_c();
  if (both_present) {
    const ModeInterval mi = mode_interval(m, e.f_start_hz, e.f_stop_hz);
    out.scalars["mode_interval_hz"] = mi.delta_hz;
    out.scalars["complementary_interval_hz"] = mi.complementary_hz;
    out.scalars["interval_plus_fsr_hz"] = mi.delta_hz + m.fsr_hz(PolMode::TE);
  } else {
    out.warnings.emplace_back("window lacks a resonance of each mode; no mode interval");
  }
  return out;
}

RunOutput run_ossb(const OssbExperiment& e) {
  RunOutput out;
  const OssbReport r = simulate_ossb(e.cfg);
  out.outputs["drop_spectrum"] = lines_json(r.drop_spectrum);
  if (r.projected_spectrum) out.outputs["output_spectrum"] = lines_json(*r.projected_spectrum);
  out.scalars["carrier_freq_hz"] = r.carrier_freq_hz;
  out.scalars["selected_sideband_hz"] = r.selected_sideband_hz;
  out.scalars["rejected_sideband_hz"] = r.rejected_sideband_hz;
  out.scalars["ocsr_db"] = r.ocsr_db;
  out.scalars["unused_sideband_suppression_db"] = r.unused_sideband_suppression_db;
  // The law is cot^2 for a carrier dropped by TM; a TE carrier inverts it.
  PolMode carrier_mode = PolMode::TE;
  double best = std::numeric_limits<double>::infinity();
  for (PolMode pol : kPolModes) {
    const double d = std::abs(nearest_resonance(e.cfg.ring, pol, r.carrier_freq_hz) -
                              r.carrier_freq_hz);
    if (d < best) {
      best = d;
      carrier_mode = pol;
    }
  }
  out.outputs["carrier_mode"] = std::string(to_string(carrier_mode));
  if (e.cfg.polarizer) {
    out.scalars["polarizer_deg"] = e.cfg.polarizer->degrees();
    const double tan_theta = std::tan(e.cfg.polarizer->radians());
    if (tan_theta != 0.0 && std::isfinite(tan_theta)) {
      const double cot2_db = power_to_db(ocsr_theory(*e.cfg.polarizer));
      const double law = carrier_mode == PolMode::TM ? cot2_db : -cot2_db;
      out.scalars["ocsr_theory_db"] = law;
      out.scalars["ocsr_excess_db"] = r.ocsr_db - law;
    }
  }
  out.warnings = r.warnings;
  return out;
}

RunOutput run_equalizer(const EqualizerExperiment& e, unsigned threads) {
  RunOutput out;
  EqualizerConfig cfg = e.cfg;
  cfg.threads = threads;
  const RfResponse resp = simulate_equalizer(cfg);
  Json rows = Json::array();
  for (const auto& p : resp.points) {
    rows.push_back({{"rf_hz", p.rf_hz},
                    {"s21_db", p.s21_db},
                    {"s21_te_db", p.s21_pol_db.te},
                    {"s21_tm_db", p.s21_pol_db.tm}});
  }
  out.outputs["response"] = std::move(rows);
  out.scalars["reference_a"] = resp.reference_a;
  out.scalars["carrier_freq_hz"] = cfg.carrier_freq_hz;
  out.scalars["input_angle_deg"] = rad_to_deg(cfg.input_angle_rad);

  PerPol<double> peak{};
  bool both = true;
  for (PolMode pol : kPolModes) {
    try {
      const Passband b = analyze_passband(cfg, pol);
      out.scalars[key("passband", pol, "center_hz")] = b.center_hz;
      out.scalars[key("passband", pol, "nominal_center_hz")] = b.nominal_center_hz;
      out.scalars[key("passband", pol, "width_3db_hz")] = b.width_3db_hz;
      out.scalars[key("passband", pol, "peak_rf_hz")] = b.peak_rf_hz;
      out.scalars[key("passband", pol, "peak_beat_a")] = b.peak_beat_a;
      peak[pol] = b.peak_beat_a;
    } catch (const DomainError& err) {
      out.warnings.emplace_back(err.what());
      both = false;
    }
  }
  // A channel lit only by rounding residue (launch along one axis) has no ER.
  const double lit = 1e-12 * std::max(peak.te, peak.tm);
  if (both && peak.te > lit && peak.tm > lit) {
    out.scalars["er_db"] = power_to_db(peak.te / peak.tm);
    const double tan_theta = std::tan(cfg.input_angle_rad);
    if (tan_theta != 0.0 && std::isfinite(tan_theta)) {
      out.scalars["er_theory_db"] = power_to_db(1.0 / (tan_theta * tan_theta));
    }
  }
  return out;
}

Json fit_branch_json(const FitBranch& b) {
  return {{"t", b.t}, {"a", b.a}, {"f0_hz", b.f0_hz},
          {"amplitude_scale", b.amplitude_scale}, {"cost", b.cost}};
}

RunOutput run_fit(const FitExperiment& e) {
  RunOutput out;
  const ResonanceGuess guess = e.guess ? *e.guess : initial_guess(e.trace);
  const FitResult r = fit_resonance(e.trace, guess);

  SpectralRingParams p;
  p.f0_hz = {r.f0_hz, r.f0_hz};
  p.fsr_hz = {e.trace.fsr_hz, e.trace.fsr_hz};
  p.coupling = Coupling{r.t, r.a};
  const RingModel fitted = ring_from_spectral(p);
  Json rows = Json::array();
  for (const auto& s : e.trace.samples) {
    const Complex h = e.trace.port == Port::Drop ? drop_transfer(fitted, PolMode::TE, s.freq_hz)
                                                 : through_transfer(fitted, PolMode::TE, s.freq_hz);
    rows.push_back({{"freq_hz", s.freq_hz},
                    {"power", s.power},
                    {"model", r.amplitude_scale * std::norm(h)}});
  }
  out.outputs["trace"] = std::move(rows);
  out.outputs["notes"] = r.notes;
  out.outputs["flags"] = {{"pinned_at_bound", r.pinned_at_bound},
                          {"lossless_singular", r.lossless_singular},
                          {"depth_uncalibrated", r.depth_uncalibrated}};
  if (r.alternate) out.outputs["alternate"] = fit_branch_json(*r.alternate);
  out.outputs["initial_guess"] = {{"t", guess.t}, {"a", guess.a},
                                  {"f0_hz", guess.f0_hz}, {"scale", guess.scale}};

  out.scalars["t"] = r.t;
  out.scalars["a"] = r.a;
  out.scalars["f0_hz"] = r.f0_hz;
  out.scalars["amplitude_scale"] = r.amplitude_scale;
  out.scalars["rms_residual"] = r.rms_residual;
  out.scalars["fwhm_hz"] = r.fwhm_hz;
  out.scalars["q"] = r.q;
  out.scalars["iterations"] = r.iterations;
  out.scalars["std_error_t"] = r.std_error[0];
  out.scalars["std_error_a"] = r.std_error[1];
  out.scalars["std_error_f0_hz"] = r.std_error[2];
  out.scalars["std_error_scale"] = r.std_error[3];
  out.warnings = r.notes;
  return out;
}

RunOutput run_single(const ExperimentConfig& cfg, unsigned threads) {
  return std::visit(
      [&](const auto& body) -> RunOutput {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, SpectrumExperiment>) return run_spectrum(body);
        if constexpr (std::is_same_v<T, OssbExperiment>) return run_ossb(body);
        if constexpr (std::is_same_v<T, EqualizerExperiment>) return run_equalizer(body, threads);
        if constexpr (std::is_same_v<T, FitExperiment>) return run_fit(body);
        if constexpr (std::is_same_v<T, SweepExperiment>) {
          throw DomainError("nested sweeps are not supported");
        }
        if constexpr (std::is_same_v<T, std::monostate>) {
          throw DomainError("experiment config was not parsed");
        }
      },
      cfg.body);
}

// Column of a scalar over all records; empty when any record lacks it.
std::vector<double> column(const Json& records, const std::string& name) {
  std::vector<double> out;
  for (const auto& r : records) {
    if (!r.contains(name)) return {};
    out.push_back(r[name].get<double>());
  }
  return out;
}

double span(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

// Points whose law value lies within +/-30 dB: near the axes the law
// diverges and any finite leakage dominates the measured ratio.
constexpr double kLawWindowDb = 30.0;

void summarize_sweep(const SweepExperiment& sw, const Json& records, Json& scalars) {
  scalars["points"] = sw.values.size();
  const std::vector<double>& x = sw.values;
  scalars["param_span"] = span(x);
  if (sw.param == "theta_deg" && sw.pipeline == "ossb") {
    if (auto ocsr = column(records, "ocsr_db"); !ocsr.empty()) {
      scalars["ocsr_range_db"] = span(ocsr);
      scalars["ocsr_endpoint_swing_db"] = std::abs(ocsr.front() - ocsr.back());
    }
    std::vector<double> excess;
    for (const auto& r : records) {
      if (r.contains("ocsr_excess_db") &&
          std::abs(r["ocsr_theory_db"].get<double>()) <= kLawWindowDb) {
        excess.push_back(r["ocsr_excess_db"].get<double>());
      }
    }
    if (!excess.empty()) scalars["ocsr_excess_spread_db"] = span(excess);
  } else if (sw.param == "theta_deg" && sw.pipeline == "equalizer") {
    std::vector<double> er;
    double worst = 0.0;
    for (const auto& r : records) {
      if (!r.contains("er_db")) continue;
      er.push_back(r["er_db"].get<double>());
      if (r.contains("er_theory_db")) {
        worst = std::max(worst, std::abs(r["er_db"].get<double>() -
                                         r["er_theory_db"].get<double>()));
      }
    }
    if (!er.empty()) {
      scalars["er_span_db"] = span(er);
      scalars["er_max_deviation_db"] = worst;
    }
  } else if (sw.param == "temperature_c" && x.size() >= 2) {
    for (PolMode pol : kPolModes) {
      if (auto f = column(records, key("resonance", pol, "hz")); !f.empty()) {
        const LineFit line = fit_line(x, f);
        double worst = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
          worst = std::max(worst, std::abs(f[i] - (line.intercept + line.slope * x[i])));
        }
        scalars[key("thermal_rate", pol, "hz_per_c")] = -line.slope;
        scalars[key("linearity_residual", pol, "hz")] = worst;
      }
      if (auto c = column(records, key("passband", pol, "center_hz")); !c.empty()) {
        scalars[key("passband", pol, "center_slope_hz_per_c")] = fit_line(x, c).slope;
      }
    }
    if (auto d = column(records, "mode_interval_hz"); !d.empty()) {
      scalars["interval_slope_hz_per_c"] = fit_line(x, d).slope;
    }
  } else if (sw.param == "carrier_offset_hz" && x.size() >= 2) {
    for (PolMode pol : kPolModes) {
      auto c = column(records, key("passband", pol, "center_hz"));
      if (c.empty()) continue;
      scalars[key("passband", pol, "center_slope")] = fit_line(x, c).slope;
      scalars[key("passband", pol, "coverage_hz")] = span(c);
    }
  }
}

RunOutput run_sweep(const SweepExperiment& sw, unsigned threads) {
  auto results = parallel_map(
      sw.points.size(), [&](std::size_t i) { return run_single(sw.points[i], 1); },
      threads);
  RunOutput out;
  Json records = Json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    Json rec = results[i].scalars;
    rec[sw.param] = sw.values[i];
    records.push_back(std::move(rec));
    for (const auto& w : results[i].warnings) {
      out.warnings.push_back(sw.param + "=" + format_double(sw.values[i]) + ": " + w);
    }
  }
  summarize_sweep(sw, records, out.scalars);
  out.outputs["records"] = std::move(records);
  return out;
}

}  // namespace

RunOutput run_experiment(const ExperimentConfig& cfg, unsigned threads) {
  if (const auto* sw = std::get_if<SweepExperiment>(&cfg.body)) return run_sweep(*sw, threads);
  return run_single(cfg, threads);
}

}  // namespace ringlink::cli
