// SPDX-License-Identifier: Apache-2.0

#include "ringlink/ring_model.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cstdint>
#include <limits>
#include <string>

namespace ringlink {

PolMode parse_pol_mode(std::string_view text) {
  if (text == "te" || text == "TE") return PolMode::TE;
  if (text == "tm" || text == "TM") return PolMode::TM;
  throw DomainError("unknown polarization mode '" + std::string(text) + "'");
}

void validate(const Coupling& c) {
  if (!(c.t >= 0.0 && c.t < 1.0)) {
    throw DomainError("self-coupling t must lie in [0, 1), got " +
                      std::to_string(c.t));
  }
  if (!(c.a > 0.0 && c.a <= 1.0)) {
    throw DomainError("round-trip amplitude a must lie in (0, 1], got " +
                      std::to_string(c.a));
  }
}

RingModel::RingModel(PerPol<PhaseLaw> phase, PerPol<Coupling> coupling,
                     ThermalTuning thermal)
    : phase_(phase),
      coupling_(coupling),
      thermal_(thermal),
      temperature_c_(thermal.t_ref_c) {
  for (PolMode pol : kPolModes) {
    validate(coupling_[pol]);
    if (!(phase_[pol].fsr_hz > 0.0) || !std::isfinite(phase_[pol].fsr_hz)) {
      throw DomainError("phase law must be strictly increasing (fsr > 0)");
    }
  }
}

double RingModel::thermal_shift_hz(PolMode pol) const {
  return thermal_.rate_hz_per_c[pol] * (temperature_c_ - thermal_.t_ref_c);
}

double RingModel::phase(PolMode pol, double f_hz) const {
  // A comb redshifted by s is the cold comb evaluated at f + s.
  return phase_[pol](f_hz + thermal_shift_hz(pol));
}

RingModel RingModel::with_coupling(PolMode pol, Coupling c) const {
  validate(c);
  RingModel out = *this;
  out.coupling_[pol] = c;
  return out;
}

RingModel RingModel::with_temperature(double temperature_c) const {
  RingModel out = *this;
  out.temperature_c_ = temperature_c;
  return out;
}

RingModel ring_from_physical(const PhysicalRingParams& p) {
  if (!(p.radius_m > 0.0)) throw DomainError("radius_m must be > 0");
  if (!(p.lambda_ref_m > 0.0)) throw DomainError("lambda_ref_m must be > 0");
  validate(p.coupling);

  const double length = kTwoPi * p.radius_m;
  PerPol<PhaseLaw> phase;
  for (PolMode pol : kPolModes) {
    const double n0 = p.n_eff[pol];
    if (!(n0 >= 1.0)) throw DomainError("n_eff must be >= 1");
    const double dn = p.dn_dlambda_per_m[pol];
    // n(lambda) = n0 + dn (lambda - lambda_ref) gives
    // phi(f) = 2 pi L / c * (f * n_g + dn * c),  n_g = n0 - dn * lambda_ref.
    const double n_group = n0 - dn * p.lambda_ref_m;
    if (!(n_group > 0.0)) {
      throw DomainError("dispersion makes the group index non-positive");
    }
    phase[pol] = PhaseLaw{0.0, kSpeedOfLight / (n_group * length),
                          kTwoPi * length * dn};
  }
  return RingModel(phase, {p.coupling, p.coupling}, p.thermal);
}

double airy_fwhm_hz(double pole, double fsr_hz) {
  // |1 - r e^{i phi}|^2 = 2 (1 - r)^2 at the half-power phase.
  const double r = pole;
  const double c = (1.0 + r * r - 2.0 * (1.0 - r) * (1.0 - r)) / (2.0 * r);
  if (!(c > -1.0 && c < 1.0)) {
    throw DomainError("pole radius has no half-power points");
  }
  return 2.0 * std::acos(c) * fsr_hz / kTwoPi;
}

double pole_for_fwhm(double fwhm_hz, double fsr_hz) {
  if (!(fwhm_hz > 0.0)) throw DomainError("fwhm must be > 0");
  if (!(fwhm_hz < fsr_hz)) {
    throw DomainError("infeasible linewidth: fwhm must be below the fsr");
  }
  const double c = std::cos(kPi * fwhm_hz / fsr_hz);
  // r^2 + (2c - 4) r + 1 = 0, root inside (0, 1).
  const double b = 2.0 - c;
  const double r = b - std::sqrt(b * b - 1.0);
  if (!(r > 0.0 && r < 1.0)) {
    throw DomainError("infeasible linewidth for an add-drop ring");
  }
  return r;
}

Coupling coupling_for_fwhm(double fwhm_hz, double fsr_hz, double pinned_a) {
  const double r = pole_for_fwhm(fwhm_hz, fsr_hz);
  if (!(pinned_a > 0.0 && pinned_a <= 1.0)) {
    throw DomainError("pinned round-trip amplitude must lie in (0, 1]");
  }
  if (r >= pinned_a) {
    throw DomainError(
        "linewidth too narrow for the pinned round-trip loss (needs t >= 1)");
  }
  return Coupling{std::sqrt(r / pinned_a), pinned_a};
}

RingModel ring_from_spectral(const SpectralRingParams& p) {
  if (p.coupling.has_value() == p.fwhm_hz.has_value()) {
    throw DomainError("spectral ring needs exactly one of coupling or fwhm");
  }
  PerPol<PhaseLaw> phase;
  PerPol<Coupling> coupling;
  for (PolMode pol : kPolModes) {
    if (!(p.f0_hz[pol] > 0.0)) throw DomainError("f0 must be > 0");
    if (!(p.fsr_hz[pol] > 0.0)) throw DomainError("fsr must be > 0");
    phase[pol] = PhaseLaw{p.f0_hz[pol], p.fsr_hz[pol], 0.0};
    if (p.fwhm_hz) {
      coupling[pol] = coupling_for_fwhm(*p.fwhm_hz, p.fsr_hz[pol], p.tie_break_a);
    } else {
      coupling[pol] = *p.coupling;
    }
  }
  return RingModel(phase, coupling, p.thermal);
}

namespace {

void require_positive_frequency(double f_hz) {
  if (!(f_hz > 0.0)) throw DomainError("optical frequency must be > 0");
}

}  // namespace

Complex drop_transfer(const RingModel& m, PolMode pol, double f_hz) {
  require_positive_frequency(f_hz);
  const Coupling& c = m.coupling(pol);
  const double phi = m.phase(pol, f_hz);
  const Complex num = -c.k_squared() * std::sqrt(c.a) * std::polar(1.0, phi / 2.0);
  const Complex den = 1.0 - c.pole() * std::polar(1.0, phi);
  return num / den;
}

Complex through_transfer(const RingModel& m, PolMode pol, double f_hz) {
  require_positive_frequency(f_hz);
  const Coupling& c = m.coupling(pol);
  const Complex e = std::polar(1.0, m.phase(pol, f_hz));
  return c.t * (1.0 - c.a * e) / (1.0 - c.pole() * e);
}

namespace {

// Root of phase(f) - target inside [lo, hi] with phase increasing.
double refine_phase_root(const RingModel& m, PolMode pol, double target,
                         double lo, double hi) {
  const double guess = std::clamp(
      lo + (target - m.phase(pol, lo)) / m.phase_slope(pol), lo, hi);
  auto fn = [&](double f) {
    return std::make_pair(m.phase(pol, f) - target, m.phase_slope(pol));
  };
  // Digits chosen so the relative step tolerance is ~1e-12.
  constexpr int kDigits = 40;
  std::uintmax_t iters = 50;
  return boost::math::tools::newton_raphson_iterate(fn, guess, lo, hi, kDigits,
                                                    iters);
}

}  // namespace

std::vector<double> find_resonances(const RingModel& m, PolMode pol,
                                    double f_lo_hz, double f_hi_hz) {
  std::vector<double> out;
  if (!(f_lo_hz < f_hi_hz)) return out;
  require_positive_frequency(f_lo_hz);

  // Bracketing grid of 32 points per FSR.
  const double step = m.fsr_hz(pol) / 32.0;
  const auto n_steps =
      static_cast<std::size_t>(std::ceil((f_hi_hz - f_lo_hz) / step));
  double lo = f_lo_hz;
  double phi_lo = m.phase(pol, lo);
  for (std::size_t i = 0; i < n_steps; ++i) {
    const double hi = (i + 1 == n_steps) ? f_hi_hz : f_lo_hz + (i + 1) * step;
    const double phi_hi = m.phase(pol, hi);
    const bool last = (i + 1 == n_steps);
    // Orders m with phi_lo <= 2 pi m < phi_hi (closed at the band's top).
    const double first = std::ceil(phi_lo / kTwoPi);
    for (double order = first;; order += 1.0) {
      const double target = order * kTwoPi;
      if (target > phi_hi || (!last && target == phi_hi)) break;
      out.push_back(refine_phase_root(m, pol, target, lo, hi));
    }
    lo = hi;
    phi_lo = phi_hi;
  }
  return out;
}

double nearest_resonance(const RingModel& m, PolMode pol, double f_hz) {
  const double fsr = m.fsr_hz(pol);
  auto roots = find_resonances(m, pol, f_hz - 0.75 * fsr, f_hz + 0.75 * fsr);
  if (roots.empty()) throw DomainError("no resonance near the requested frequency");
  return *std::min_element(roots.begin(), roots.end(), [&](double x, double y) {
    return std::abs(x - f_hz) < std::abs(y - f_hz);
  });
}

namespace {

double drop_power(const RingModel& m, PolMode pol, double f) {
  return std::norm(drop_transfer(m, pol, f));
}

// Offset from f0 (searching outward up to half an FSR) where the drop power
// falls to `level`.
std::optional<double> level_crossing(const RingModel& m, PolMode pol, double f0,
                                     double level, double direction) {
  const double half_fsr = 0.5 * m.fsr_hz(pol);
  auto g = [&](double x) { return drop_power(m, pol, f0 + direction * x) - level; };
  if (g(half_fsr) >= 0.0) return std::nullopt;
  boost::math::tools::eps_tolerance<double> tol(48);
  std::uintmax_t iters = 200;
  auto [a, b] = boost::math::tools::toms748_solve(g, 0.0, half_fsr, tol, iters);
  return 0.5 * (a + b);
}

}  // namespace

ResonanceMetrics resonance_metrics(const RingModel& m, PolMode pol,
                                   double f0_hz) {
  require_positive_frequency(f0_hz);
  const double wrapped = std::remainder(m.phase(pol, f0_hz), kTwoPi);
  if (std::abs(wrapped) > kTwoPi * 1e-6) {
    throw DomainError("frequency is not a resonance of the " +
                      std::string(to_string(pol)) + " comb");
  }
  ResonanceMetrics out;
  out.f0_hz = f0_hz;
  const double peak = drop_power(m, pol, f0_hz);
  auto lo = level_crossing(m, pol, f0_hz, 0.5 * peak, -1.0);
  auto hi = level_crossing(m, pol, f0_hz, 0.5 * peak, +1.0);
  if (!lo || !hi) throw DomainError("resonance has no half-power points");
  out.fwhm_hz = *lo + *hi;
  out.q = f0_hz / out.fwhm_hz;
  auto lo20 = level_crossing(m, pol, f0_hz, 0.01 * peak, -1.0);
  auto hi20 = level_crossing(m, pol, f0_hz, 0.01 * peak, +1.0);
  if (lo20 && hi20) out.bw20db_hz = *lo20 + *hi20;
  out.notch_depth_db = power_to_db(std::norm(through_transfer(m, pol, f0_hz)));
  out.drop_loss_db = power_to_db(peak);
  return out;
}

ModeInterval mode_interval(const RingModel& m, double f_lo_hz, double f_hi_hz) {
  const auto te = find_resonances(m, PolMode::TE, f_lo_hz, f_hi_hz);
  const auto tm = find_resonances(m, PolMode::TM, f_lo_hz, f_hi_hz);
  if (te.empty() || tm.empty()) {
    throw DomainError("band must contain at least one TE and one TM resonance");
  }
  ModeInterval best;
  best.delta_hz = std::numeric_limits<double>::infinity();
  for (double fte : te) {
    auto it = std::lower_bound(tm.begin(), tm.end(), fte);
    for (auto cand : {it, it == tm.begin() ? it : std::prev(it)}) {
      if (cand == tm.end()) continue;
      const double d = std::abs(*cand - fte);
      if (d < best.delta_hz) {
        best.delta_hz = d;
        best.f_te_hz = fte;
        best.f_tm_hz = *cand;
      }
    }
  }
  best.complementary_hz = m.fsr_hz(PolMode::TE) - best.delta_hz;
  return best;
}

RingModel at_temperature(const RingModel& m, double temperature_c) {
  return m.with_temperature(temperature_c);
}

}  // namespace ringlink
