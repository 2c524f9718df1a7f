// SPDX-License-Identifier: Apache-2.0

#include "ringlink/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace ringlink {

Port parse_port(std::string_view text) {
  if (text == "through") return Port::Through;
  if (text == "drop") return Port::Drop;
  throw DomainError("unknown port '" + std::string(text) + "'");
}

void MeasuredTrace::validate() const {
  if (samples.size() < 20) {
    throw DomainError("trace needs at least 20 samples, got " +
                      std::to_string(samples.size()));
  }
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].freq_hz > samples[i - 1].freq_hz)) {
      throw DomainError("trace frequencies must be strictly increasing");
    }
  }
  for (const auto& s : samples) {
    if (!std::isfinite(s.power)) throw DomainError("trace power is not finite");
  }
  if (!(fsr_hz > 0.0)) throw DomainError("trace fsr_hz must be > 0");
}

MeasuredTrace simulate_trace(const RingModel& ring, PolMode pol, Port port,
                             double f0_hz, double half_span_hz, std::size_t n,
                             double scale) {
  if (n < 2) throw DomainError("simulated trace needs at least two points");
  MeasuredTrace trace;
  trace.port = port;
  trace.pol = pol;
  trace.fsr_hz = ring.fsr_hz(pol);
  trace.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = f0_hz - half_span_hz +
                     2.0 * half_span_hz * static_cast<double>(i) /
                         static_cast<double>(n - 1);
    const Complex h = port == Port::Drop ? drop_transfer(ring, pol, f)
                                         : through_transfer(ring, pol, f);
    trace.samples.push_back({f, scale * std::norm(h)});
  }
  return trace;
}

namespace {

constexpr double kMaxT = 1.0 - 1e-12;
constexpr double kMinA = 1e-6;
// LM approaches a bound asymptotically; this close counts as on it.
constexpr double kBoundSlack = 1e-7;

// |D|^2 or |T|^2 and its partial derivatives in (t, a, phi).
struct ModelEval {
  double value;
  double d_t;
  double d_a;
  double d_phi;
};

ModelEval eval_model(Port port, double t, double a, double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  const double r = t * t * a;
  const double den = 1.0 - 2.0 * r * c + r * r;
  const double dden_dr = -2.0 * c + 2.0 * r;
  const double dden_dt = dden_dr * 2.0 * t * a;
  const double dden_da = dden_dr * t * t;
  const double dden_dphi = 2.0 * r * s;

  double num, dnum_dt, dnum_da, dnum_dphi;
  if (port == Port::Drop) {
    const double k2 = 1.0 - t * t;
    num = k2 * k2 * a;
    dnum_dt = -4.0 * t * k2 * a;
    dnum_da = k2 * k2;
    dnum_dphi = 0.0;
  } else {
    const double q = 1.0 - 2.0 * a * c + a * a;
    num = t * t * q;
    dnum_dt = 2.0 * t * q;
    dnum_da = t * t * (-2.0 * c + 2.0 * a);
    dnum_dphi = t * t * 2.0 * a * s;
  }
  const double den2 = den * den;
  return {num / den, (dnum_dt * den - num * dden_dt) / den2,
          (dnum_da * den - num * dden_da) / den2,
          (dnum_dphi * den - num * dden_dphi) / den2};
}

// Internal parameters: t, a, d = (f0 - f_ref) / fsr, u = log(scale / scale_ref).
using Vec4 = Eigen::Vector4d;

struct Problem {
  Port port;
  std::vector<double> x;  // (f - f_ref) / fsr
  std::vector<double> y;
  double f_ref;
  double fsr;
  double scale_ref;
  std::array<bool, 4> free;
};

double residuals(const Problem& pb, const Vec4& p, Eigen::VectorXd& r,
                 Eigen::MatrixXd* jac) {
  const std::size_t n = pb.x.size();
  const double scale = pb.scale_ref * std::exp(p[3]);
  r.resize(static_cast<Eigen::Index>(n));
  int n_free = 0;
  for (bool f : pb.free) n_free += f ? 1 : 0;
  if (jac) jac->resize(static_cast<Eigen::Index>(n), n_free);
  for (std::size_t i = 0; i < n; ++i) {
    const double phi = kTwoPi * (pb.x[i] - p[2]);
    const ModelEval m = eval_model(pb.port, p[0], p[1], phi);
    const auto row = static_cast<Eigen::Index>(i);
    r[row] = scale * m.value - pb.y[i];
    if (jac) {
      const std::array<double, 4> grad{scale * m.d_t, scale * m.d_a,
                                       -kTwoPi * scale * m.d_phi,
                                       scale * m.value};
      Eigen::Index col = 0;
      for (int k = 0; k < 4; ++k) {
        if (pb.free[static_cast<std::size_t>(k)]) (*jac)(row, col++) = grad[static_cast<std::size_t>(k)];
      }
    }
  }
  return r.squaredNorm();
}

Vec4 clamp_params(Vec4 p) {
  p[0] = std::clamp(p[0], 0.0, kMaxT);
  p[1] = std::clamp(p[1], kMinA, 1.0);
  return p;
}

struct LmOutcome {
  Vec4 params;
  double cost;
  int iterations;
  std::vector<double> history;
  Eigen::MatrixXd jtj;
};

// Levenberg-Marquardt: lambda starts at 1e-3, x10 on reject, /10 on accept;
// stops on relative cost change < 1e-12, on a stationary point (lambda
// saturates) or errors out after 200 trials.
LmOutcome levenberg_marquardt(const Problem& pb, Vec4 p) {
  constexpr int kMaxIterations = 200;
  constexpr double kRelTol = 1e-12;
  constexpr double kLambdaCeiling = 1e16;

  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  LmOutcome out;
  p = clamp_params(p);
  double cost = residuals(pb, p, r, &jac);
  double lambda = 1e-3;
  bool converged = false;
  int it = 0;
  for (; it < kMaxIterations && !converged; ++it) {
    if (cost == 0.0) {
      converged = true;
      break;
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd grad = jac.transpose() * r;
    Eigen::MatrixXd damped = jtj;
    for (Eigen::Index k = 0; k < damped.rows(); ++k) {
      damped(k, k) += lambda * std::max(jtj(k, k), 1e-300);
    }
    const Eigen::VectorXd step = damped.ldlt().solve(-grad);

    Vec4 cand = p;
    Eigen::Index col = 0;
    for (int k = 0; k < 4; ++k) {
      if (pb.free[static_cast<std::size_t>(k)]) cand[k] += step[col++];
    }
    cand = clamp_params(cand);

    Eigen::VectorXd r_new;
    const double cost_new = step.allFinite() ? residuals(pb, cand, r_new, nullptr)
                                             : std::numeric_limits<double>::infinity();
    if (cost_new < cost) {
      const double rel = (cost - cost_new) / cost;
      p = cand;
      cost = residuals(pb, p, r, &jac);
      out.history.push_back(cost);
      lambda = std::max(lambda / 10.0, 1e-12);
      if (rel < kRelTol) converged = true;
    } else {
      lambda *= 10.0;
      if (lambda > kLambdaCeiling) converged = true;
    }
  }
  if (!converged) {
    throw FitError("least-squares fit did not converge within 200 iterations");
  }
  out.params = p;
  out.cost = cost;
  out.iterations = it;
  out.jtj = jac.transpose() * jac;
  return out;
}

double model_value(Port port, const ResonanceGuess& g, double fsr, double f) {
  const double phi = kTwoPi * (f - g.f0_hz) / fsr;
  return eval_model(port, g.t, g.a, phi).value;
}

}  // namespace

ResonanceGuess initial_guess(const MeasuredTrace& trace) {
  trace.validate();
  const auto& s = trace.samples;
  const bool drop = trace.port == Port::Drop;

  auto by_power = [](const TraceSample& x, const TraceSample& y) {
    return x.power < y.power;
  };
  const auto ext_it = drop ? std::max_element(s.begin(), s.end(), by_power)
                           : std::min_element(s.begin(), s.end(), by_power);
  const auto i_ext = static_cast<std::size_t>(ext_it - s.begin());
  const double edge_ref = drop ? std::min(s.front().power, s.back().power)
                               : std::max(s.front().power, s.back().power);
  const double contrast = std::abs(edge_ref - ext_it->power);
  double max_abs = 0.0;
  for (const auto& x : s) max_abs = std::max(max_abs, std::abs(x.power));
  if (!(contrast > 1e-6 * max_abs) || i_ext == 0 || i_ext + 1 == s.size()) {
    throw DomainError("trace has no resolvable resonance extremum");
  }

  const double level = 0.5 * (edge_ref + ext_it->power);
  // Signed so that "inside the resonance" is positive.
  auto inside = [&](std::size_t i) {
    return drop ? s[i].power - level : level - s[i].power;
  };
  auto crossing = [&](int dir) -> double {
    std::size_t i = i_ext;
    while (true) {
      if ((dir < 0 && i == 0) || (dir > 0 && i + 1 == s.size())) {
        throw DomainError("resonance half-depth crossing lies outside the trace");
      }
      const std::size_t j = dir < 0 ? i - 1 : i + 1;
      if (inside(j) <= 0.0) {
        const double w = inside(i) / (inside(i) - inside(j));
        return s[i].freq_hz + w * (s[j].freq_hz - s[i].freq_hz);
      }
      i = j;
    }
  };
  const double left = crossing(-1);
  const double right = crossing(+1);

  ResonanceGuess g;
  g.f0_hz = 0.5 * (left + right);
  const double fwhm = right - left;
  const double r = pole_for_fwhm(fwhm, trace.fsr_hz);
  g.a = std::max(kDefaultRoundTripA, std::sqrt(r));
  g.t = std::sqrt(r / g.a);
  g.scale = 1.0;
  if (!trace.calibrated) {
    const double ref_f = drop ? g.f0_hz
                              : (s.front().power >= s.back().power ? s.front().freq_hz
                                                                    : s.back().freq_hz);
    const double ref_p = drop ? ext_it->power : edge_ref;
    g.scale = ref_p / model_value(trace.port, g, trace.fsr_hz, ref_f);
  }
  return g;
}

FitResult fit_resonance(const MeasuredTrace& trace, const ResonanceGuess& guess) {
  trace.validate();
  if (!(guess.t >= 0.0 && guess.t < 1.0 && guess.a > 0.0 && guess.a <= 1.0 &&
        guess.scale > 0.0 && guess.f0_hz > 0.0)) {
    throw DomainError("initial guess lies outside the model bounds");
  }

  Problem pb;
  pb.port = trace.port;
  pb.f_ref = guess.f0_hz;
  pb.fsr = trace.fsr_hz;
  pb.scale_ref = trace.calibrated ? 1.0 : guess.scale;
  pb.x.reserve(trace.samples.size());
  pb.y.reserve(trace.samples.size());
  for (const auto& s : trace.samples) {
    pb.x.push_back((s.freq_hz - pb.f_ref) / pb.fsr);
    pb.y.push_back(s.power);
  }
  const bool drop_uncal = trace.port == Port::Drop && !trace.calibrated;
  pb.free = {true, !drop_uncal, true, !trace.calibrated};

  Vec4 start{guess.t, guess.a, 0.0, 0.0};
  LmOutcome best = levenberg_marquardt(pb, start);

  std::optional<FitBranch> alternate;
  if (pb.free[0] && pb.free[1]) {
    // Mirror start: swap the roles of t^2 and a at the same pole radius.
    Vec4 mirror{std::sqrt(guess.a), guess.t * guess.t, 0.0, 0.0};
    try {
      LmOutcome other = levenberg_marquardt(pb, mirror);
      if (other.cost < best.cost) std::swap(best, other);
      const double tol = 0.01 * std::max(best.cost, 1e-300);
      const bool distinct =
          std::abs(other.params[1] - best.params[1]) > 1e-6 * best.params[1] ||
          std::abs(other.params[0] - best.params[0]) > 1e-6 * best.params[0];
      if (distinct && other.cost - best.cost <= tol) {
        alternate = FitBranch{other.params[0], other.params[1],
                              pb.f_ref + other.params[2] * pb.fsr,
                              pb.scale_ref * std::exp(other.params[3]), other.cost};
      }
    } catch (const FitError&) {
      // Mirror branch failing to converge leaves the primary result intact.
    }
  }

  const Vec4& p = best.params;
  FitResult res;
  res.t = p[0];
  res.a = p[1];
  res.f0_hz = pb.f_ref + p[2] * pb.fsr;
  res.amplitude_scale = pb.scale_ref * std::exp(p[3]);
  const auto n = static_cast<double>(pb.x.size());
  res.rms_residual = std::sqrt(best.cost / n);
  res.iterations = best.iterations;
  res.cost_history = std::move(best.history);
  res.alternate = alternate;
  res.fwhm_hz = airy_fwhm_hz(res.t * res.t * res.a, pb.fsr);
  res.q = res.f0_hz / res.fwhm_hz;

  const Eigen::Index n_free = best.jtj.rows();
  if (n > static_cast<double>(n_free)) {
    const double sigma2 = best.cost / (n - static_cast<double>(n_free));
    Eigen::FullPivLU<Eigen::MatrixXd> lu(best.jtj);
    if (lu.isInvertible()) {
      const Eigen::MatrixXd cov = sigma2 * lu.inverse();
      const std::array<double, 4> unit{1.0, 1.0, pb.fsr, res.amplitude_scale};
      Eigen::Index col = 0;
      for (std::size_t k = 0; k < 4; ++k) {
        if (!pb.free[k]) continue;
        res.std_error[k] = unit[k] * std::sqrt(std::max(cov(col, col), 0.0));
        ++col;
      }
    } else {
      res.notes.emplace_back("normal matrix is singular; no covariance");
    }
  }

  const bool a_lossless = res.a >= 1.0 - kBoundSlack;
  res.pinned_at_bound = (pb.free[0] && res.t >= kMaxT - kBoundSlack) ||
                        (pb.free[1] && (a_lossless || res.a <= kMinA));
  if (pb.free[1] && a_lossless) {
    res.lossless_singular = true;
    res.notes.emplace_back(
        "fitted a = 1: lossless ring, notch extinction exceeds any finite floor");
  }
  if (drop_uncal) {
    res.depth_uncalibrated = true;
    res.notes.emplace_back(
        "uncalibrated drop trace: only t^2 a is identified; a pinned at the guess");
  }
  return res;
}

std::vector<TraceSample> trace_from_db_wavelength(
    std::span<const double> wavelength_m, std::span<const double> power_db) {
  if (wavelength_m.size() != power_db.size()) {
    throw DomainError("wavelength and power columns differ in length");
  }
  std::vector<TraceSample> out;
  out.reserve(wavelength_m.size());
  for (std::size_t i = 0; i < wavelength_m.size(); ++i) {
    if (!(wavelength_m[i] > 0.0)) throw DomainError("wavelength must be > 0");
    out.push_back({wavelength_to_frequency(wavelength_m[i]), db_to_power(power_db[i])});
  }
  std::sort(out.begin(), out.end(), [](const TraceSample& x, const TraceSample& y) {
    return x.freq_hz < y.freq_hz;
  });
  return out;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DomainError("line fit needs matching x/y with at least two points");
  }
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("rank-deficient regression: x has no spread");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

ThermalRates fit_thermal_rates(std::span<const ThermalSample> samples) {
  ThermalRates out;
  for (PolMode pol : kPolModes) {
    std::vector<double> temps, freqs;
    for (const auto& s : samples) {
      if (s.pol != pol) continue;
      temps.push_back(s.temperature_c);
      freqs.push_back(s.f0_hz);
    }
    if (temps.size() < 3) {
      throw DomainError("thermal fit needs at least three temperatures per polarization");
    }
    const LineFit line = fit_line(temps, freqs);
    out.rate_hz_per_c[pol] = -line.slope;
    out.f0_at_zero_c_hz[pol] = line.intercept;
  }
  out.interval_slope_hz_per_c = out.rate_hz_per_c.te - out.rate_hz_per_c.tm;
  return out;
}

ThermalRates fit_thermal_rates(std::span<const TemperatureTrace> traces) {
  std::vector<ThermalSample> samples;
  samples.reserve(traces.size());
  for (const auto& tt : traces) {
    const FitResult fit = fit_resonance(tt.trace, initial_guess(tt.trace));
    samples.push_back({tt.temperature_c, tt.trace.pol, fit.f0_hz});
  }
  return fit_thermal_rates(samples);
}

}  // namespace ringlink
