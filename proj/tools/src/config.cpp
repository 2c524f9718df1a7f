// SPDX-License-Identifier: Apache-2.0

#include "ringlink/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "ringlink/cli/trace_io.hpp"

namespace ringlink::cli {

namespace fs = std::filesystem;

Section::Section(const Json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
  if (!obj_.is_object()) {
    throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }
}

std::string Section::key_path(std::string_view key) const {
  return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
}

bool Section::has(std::string_view key) const { return obj_.contains(key); }

const Json* Section::get(std::string_view key) const {
  used_.insert(std::string(key));
  auto it = obj_.find(key);
  return it == obj_.end() ? nullptr : &*it;
}

const Json& Section::raw(std::string_view key) const {
  const Json* v = get(key);
  if (!v) throw ConfigError(key_path(key), "required key is missing");
  return *v;
}

std::optional<double> Section::optional_number(std::string_view key) const {
  const Json* v = get(key);
  if (!v) return std::nullopt;
  if (!v->is_number()) throw ConfigError(key_path(key), "expected a number");
  const double d = v->get<double>();
  if (!std::isfinite(d)) throw ConfigError(key_path(key), "expected a finite number");
  return d;
}

double Section::number(std::string_view key) const {
  auto v = optional_number(key);
  if (!v) throw ConfigError(key_path(key), "required key is missing");
  return *v;
}

double Section::number_or(std::string_view key, double fallback) const {
  return optional_number(key).value_or(fallback);
}

std::optional<long long> Section::optional_integer(std::string_view key) const {
  const Json* v = get(key);
  if (!v) return std::nullopt;
  if (!v->is_number_integer()) throw ConfigError(key_path(key), "expected an integer");
  return v->get<long long>();
}

long long Section::integer(std::string_view key) const {
  auto v = optional_integer(key);
  if (!v) throw ConfigError(key_path(key), "required key is missing");
  return *v;
}

std::optional<std::string> Section::optional_string(std::string_view key) const {
  const Json* v = get(key);
  if (!v) return std::nullopt;
  if (!v->is_string()) throw ConfigError(key_path(key), "expected a string");
  return v->get<std::string>();
}

std::string Section::string(std::string_view key) const {
  auto v = optional_string(key);
  if (!v) throw ConfigError(key_path(key), "required key is missing");
  return *v;
}

bool Section::boolean_or(std::string_view key, bool fallback) const {
  const Json* v = get(key);
  if (!v) return fallback;
  if (!v->is_boolean()) throw ConfigError(key_path(key), "expected true or false");
  return v->get<bool>();
}

std::vector<double> Section::number_array(std::string_view key) const {
  const Json& v = raw(key);
  if (!v.is_array()) throw ConfigError(key_path(key), "expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(key_path(key), "expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Section Section::object(std::string_view key) const {
  return Section(raw(key), key_path(key));
}

void Section::finish() const {
  for (auto it = obj_.begin(); it != obj_.end(); ++it) {
    if (!used_.contains(it.key())) throw ConfigError(key_path(it.key()), "unknown key");
  }
}

Json read_json_file(const fs::path& path, const std::string& what) {
  std::ifstream in(path);
  if (!in) throw ConfigError(what, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(what, path.string() + ": " + e.what());
  }
}

Json load_ring_file(const fs::path& path) {
  if (path.extension() == ".json") return read_json_file(path, "ring_path");
  std::ifstream in(path);
  if (!in) throw ConfigError("ring_path", "cannot open " + path.string());
  Json ring = Json::object();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) {
      throw ConfigError("ring_path", path.string() + ":" + std::to_string(line_no) +
                                         ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("ring_path", path.string() + ":" + std::to_string(line_no) +
                                         ": empty key or value");
    }
    if (ring.contains(key)) throw ConfigError("ring." + key, "duplicate key in " + path.string());
    double d = 0.0;
    const char* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, d);
    if (ec == std::errc{} && ptr == end) {
      ring[key] = d;
    } else if (value == "true" || value == "false") {
      ring[key] = value == "true";
    } else {
      ring[key] = value;
    }
  }
  return ring;
}

namespace {

PolMode pol_value(const Section& s, std::string_view key) {
  try {
    return parse_pol_mode(s.string(key));
  } catch (const DomainError& e) {
    throw ConfigError(s.key_path(key), e.what());
  }
}

Port port_value(const Section& s, std::string_view key) {
  try {
    return parse_port(s.string(key));
  } catch (const DomainError& e) {
    throw ConfigError(s.key_path(key), e.what());
  }
}

std::size_t count_value(const Section& s, std::string_view key, long long min) {
  const long long n = s.integer(key);
  if (n < min) throw ConfigError(s.key_path(key), "must be >= " + std::to_string(min));
  return static_cast<std::size_t>(n);
}

ThermalTuning parse_thermal(const Section& s) {
  ThermalTuning th;
  th.t_ref_c = s.number_or("t_ref_c", th.t_ref_c);
  th.rate_hz_per_c.te = s.number_or("thermal_rate_te_hz_per_c", 0.0);
  th.rate_hz_per_c.tm = s.number_or("thermal_rate_tm_hz_per_c", 0.0);
  return th;
}

std::optional<Coupling> parse_coupling(const Section& s, bool required) {
  const bool has_t = s.has("t");
  const bool has_a = s.has("a");
  if (!has_t && !has_a && !required) return std::nullopt;
  return Coupling{s.number("t"), s.number("a")};
}

}  // namespace

RingSpec parse_ring(const Section& s) {
  const std::string form = s.string("form");
  const ThermalTuning thermal = parse_thermal(s);
  std::optional<RingModel> model;
  double reference = 0.0;
  if (form == "spectral") {
    SpectralRingParams p;
    p.f0_hz = {s.number("f0_te_hz"), s.number("f0_tm_hz")};
    p.fsr_hz = {s.number("fsr_te_hz"), s.number("fsr_tm_hz")};
    p.coupling = parse_coupling(s, false);
    p.fwhm_hz = s.optional_number("fwhm_hz");
    p.tie_break_a = s.number_or("tie_break_a", kDefaultRoundTripA);
    if (p.coupling.has_value() == p.fwhm_hz.has_value()) {
      throw ConfigError(s.key_path("fwhm_hz"),
                        "give exactly one of fwhm_hz or the pair t / a");
    }
    p.thermal = thermal;
    model = ring_from_spectral(p);
    reference = p.f0_hz.te;
  } else if (form == "physical") {
    PhysicalRingParams p;
    p.radius_m = s.number("radius_m");
    p.n_eff = {s.number("n_eff_te"), s.number("n_eff_tm")};
    p.dn_dlambda_per_m = {s.number_or("dn_dlambda_te_per_m", 0.0),
                          s.number_or("dn_dlambda_tm_per_m", 0.0)};
    p.lambda_ref_m = s.number_or("lambda_ref_m", p.lambda_ref_m);
    p.coupling = *parse_coupling(s, true);
    p.thermal = thermal;
    model = ring_from_physical(p);
    reference = wavelength_to_frequency(p.lambda_ref_m);
  } else {
    throw ConfigError(s.key_path("form"), "expected \"spectral\" or \"physical\"");
  }
  const double temperature = s.number_or("temperature_c", thermal.t_ref_c);
  s.finish();
  return {at_temperature(*model, temperature), reference};
}

double parse_carrier(const Section& s, const RingSpec& ring) {
  const auto absolute = s.optional_number("carrier_freq_hz");
  const auto anchor = s.optional_string("carrier_anchor");
  const auto offset = s.optional_number("carrier_offset_hz");
  if (absolute.has_value() == anchor.has_value()) {
    throw ConfigError(s.key_path("carrier_freq_hz"),
                      "give exactly one of carrier_freq_hz or carrier_anchor");
  }
  if (absolute) {
    if (offset) throw ConfigError(s.key_path("carrier_offset_hz"), "needs carrier_anchor");
    return *absolute;
  }
  const PolMode pol = pol_value(s, "carrier_anchor");
  const RingModel cold = at_temperature(ring.model, ring.model.thermal().t_ref_c);
  return nearest_resonance(cold, pol, ring.reference_hz) + offset.value_or(0.0);
}

namespace {

SpectrumExperiment parse_spectrum(const Section& s, const RingSpec& ring) {
  SpectrumExperiment e{ring};
  e.f_start_hz = s.number("f_start_hz");
  e.f_stop_hz = s.number("f_stop_hz");
  e.points = count_value(s, "points", 2);
  if (!(e.f_start_hz > 0.0 && e.f_stop_hz > e.f_start_hz)) {
    throw ConfigError(s.key_path("f_stop_hz"), "need 0 < f_start_hz < f_stop_hz");
  }
  s.finish();
  return e;
}

OssbExperiment parse_ossb(const Section& s, const RingSpec& ring) {
  OssbExperiment e{OssbConfig{.ring = ring.model}};
  OssbConfig& c = e.cfg;
  c.carrier_freq_hz = parse_carrier(s, ring);
  c.carrier_power_w = s.number_or("carrier_power_w", c.carrier_power_w);
  c.launch_angle_rad = deg_to_rad(s.number_or("launch_angle_deg", 45.0));
  c.drive.rf_freq_hz = s.number("rf_freq_hz");
  c.drive.mod_index_rad = s.number_or("mod_index_rad", c.drive.mod_index_rad);
  c.drive.bias_rad = s.number_or("bias_rad", c.drive.bias_rad);
  if (auto n = s.optional_integer("max_order")) c.drive.max_order = static_cast<int>(*n);
  if (auto th = s.optional_number("polarizer_deg")) {
    c.polarizer = PolarizerAngle::from_degrees(*th);
  }
  s.finish();
  return e;
}

EqualizerExperiment parse_equalizer(const Section& s, const RingSpec& ring) {
  EqualizerExperiment e{EqualizerConfig{.ring = ring.model}};
  EqualizerConfig& c = e.cfg;
  c.carrier_freq_hz = parse_carrier(s, ring);
  c.carrier_power_w = s.number_or("carrier_power_w", c.carrier_power_w);
  c.input_angle_rad = deg_to_rad(s.number_or("input_angle_deg", 90.0));
  c.mod_index_rad = s.number_or("mod_index_rad", c.mod_index_rad);
  c.pd_responsivity_a_per_w = s.number_or("responsivity_a_per_w", 1.0);
  c.absolute_reference_a = s.optional_number("reference_a");
  const auto start = s.optional_number("rf_start_hz");
  const auto stop = s.optional_number("rf_stop_hz");
  const std::size_t points = s.has("rf_points") ? count_value(s, "rf_points", 2) : 201;
  if (start.has_value() != stop.has_value()) {
    throw ConfigError(s.key_path(start ? "rf_stop_hz" : "rf_start_hz"),
                      "rf_start_hz and rf_stop_hz go together");
  }
  if (start) {
    if (!(*start > 0.0 && *stop > *start)) {
      throw ConfigError(s.key_path("rf_stop_hz"), "need 0 < rf_start_hz < rf_stop_hz");
    }
    c.rf_grid_hz.resize(points);
    for (std::size_t i = 0; i < points; ++i) {
      c.rf_grid_hz[i] = *start + (*stop - *start) * static_cast<double>(i) /
                                     static_cast<double>(points - 1);
    }
  } else {
    c.rf_grid_hz = default_rf_grid(c, points);
  }
  s.finish();
  return e;
}

std::optional<ResonanceGuess> parse_guess(const Section& s) {
  if (!s.has("initial_guess")) return std::nullopt;
  const Section g = s.object("initial_guess");
  ResonanceGuess guess{g.number("t"), g.number("a"), g.number("f0_hz"),
                       g.number_or("scale", 1.0)};
  g.finish();
  return guess;
}

MeasuredTrace synthetic_trace(const Section& s, const RingSpec& ring) {
  const PolMode pol = pol_value(s, "pol");
  const Port port = port_value(s, "port");
  const RingModel& m = ring.model;
  const double center =
      nearest_resonance(m, pol, ring.reference_hz) + s.number_or("center_offset_hz", 0.0);
  MeasuredTrace tr = simulate_trace(m, pol, port, center, s.number("half_span_hz"),
                                    count_value(s, "points", 20), s.number_or("scale", 1.0));
  tr.calibrated = s.boolean_or("calibrated", false);
  if (auto snr = s.optional_number("snr_db")) {
    const long long seed = s.optional_integer("seed").value_or(0);
    double peak = 0.0;
    for (const auto& x : tr.samples) peak = std::max(peak, std::abs(x.power));
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    std::normal_distribution<double> noise(0.0, peak * db_to_power(-*snr));
    for (auto& x : tr.samples) x.power += noise(rng);
  }
  s.finish();
  return tr;
}

// Returns the normalized (trace-inlined) fit section alongside the parsed one.
std::pair<FitExperiment, Json> parse_fit(const Section& s, const Json& raw,
                                         const std::optional<RingSpec>& ring,
                                         const fs::path& base_dir) {
  FitExperiment e;
  Json normalized = raw;
  const int sources = static_cast<int>(s.has("samples")) +
                      static_cast<int>(s.has("trace_path")) +
                      static_cast<int>(s.has("synthetic"));
  if (sources != 1) {
    throw ConfigError(s.key_path("samples"),
                      "give exactly one of samples, trace_path or synthetic");
  }
  if (s.has("synthetic")) {
    if (!ring) throw ConfigError("ring", "a synthetic trace needs a ring");
    e.trace = synthetic_trace(s.object("synthetic"), *ring);
  } else if (s.has("trace_path")) {
    fs::path trace_path = s.string("trace_path");
    if (trace_path.is_relative()) trace_path = base_dir / trace_path;
    fs::path sidecar = trace_path.string() + ".json";
    if (auto side = s.optional_string("sidecar_path")) {
      sidecar = fs::path(*side).is_relative() ? base_dir / *side : fs::path(*side);
    }
    e.trace = read_trace(trace_path, sidecar);
    normalized.erase("trace_path");
    normalized.erase("sidecar_path");
    Json samples = Json::array();
    for (const auto& x : e.trace.samples) samples.push_back({x.freq_hz, x.power});
    normalized["samples"] = samples;
    const Json meta = trace_sidecar(e.trace);
    for (auto it = meta.begin(); it != meta.end(); ++it) normalized[it.key()] = it.value();
  } else {
    const Json& samples = s.raw("samples");
    if (!samples.is_array()) throw ConfigError(s.key_path("samples"), "expected [[freq_hz, power], ...]");
    for (const auto& row : samples) {
      if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number()) {
        throw ConfigError(s.key_path("samples"), "expected [[freq_hz, power], ...]");
      }
      e.trace.samples.push_back({row[0].get<double>(), row[1].get<double>()});
    }
    e.trace.port = port_value(s, "port");
    e.trace.pol = pol_value(s, "pol");
    e.trace.fsr_hz = s.number("fsr_hz");
    e.trace.calibrated = s.boolean_or("calibrated", false);
  }
  e.guess = parse_guess(s);
  s.finish();
  return {std::move(e), std::move(normalized)};
}

constexpr std::array<std::string_view, 5> kSections{"spectrum", "ossb", "equalizer",
                                                    "fit", "sweep"};

// JSON pointer the sweep parameter writes to, for a given pipeline.
std::string sweep_pointer(const std::string& param, const std::string& pipeline,
                          const std::string& key) {
  if (param == "temperature_c" && pipeline != "fit") return "/ring/temperature_c";
  if (param == "theta_deg" && pipeline == "ossb") return "/ossb/polarizer_deg";
  if (param == "theta_deg" && pipeline == "equalizer") return "/equalizer/input_angle_deg";
  if (param == "carrier_offset_hz" && (pipeline == "ossb" || pipeline == "equalizer")) {
    return "/" + pipeline + "/carrier_offset_hz";
  }
  throw ConfigError(key, "parameter '" + param + "' cannot drive the " + pipeline +
                             " pipeline");
}

std::vector<double> sweep_values(const Section& s) {
  if (s.has("values")) {
    if (s.has("start") || s.has("stop") || s.has("points")) {
      throw ConfigError(s.key_path("values"), "give values or start/stop/points, not both");
    }
    auto v = s.number_array("values");
    if (v.empty()) throw ConfigError(s.key_path("values"), "must not be empty");
    return v;
  }
  const double start = s.number("start");
  const double stop = s.number("stop");
  const std::size_t n = count_value(s, "points", 1);
  if (n == 1) return {start};
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return v;
}

}  // namespace

ExperimentConfig parse_experiment(const Json& raw, const fs::path& base_dir) {
  const Section root(raw, "");
  const long long version = root.integer("schema_version");
  if (version != kSchemaVersion) {
    throw ConfigError("schema_version", "unsupported version " + std::to_string(version) +
                                            " (expected " + std::to_string(kSchemaVersion) + ")");
  }

  ExperimentConfig cfg;
  cfg.normalized = Json{{"schema_version", kSchemaVersion}};

  Json ring_json;
  if (root.has("ring") && root.has("ring_path")) {
    throw ConfigError("ring_path", "give ring or ring_path, not both");
  }
  if (root.has("ring")) {
    ring_json = root.raw("ring");
  } else if (root.has("ring_path")) {
    fs::path p = root.string("ring_path");
    ring_json = load_ring_file(p.is_relative() ? base_dir / p : p);
  }

  std::string section;
  for (auto name : kSections) {
    if (!root.has(name)) continue;
    if (!section.empty()) {
      throw ConfigError(std::string(name), "only one experiment section is allowed (found " +
                                               section + " too)");
    }
    section = name;
  }
  if (section.empty()) {
    throw ConfigError("<root>", "missing experiment section (spectrum, ossb, equalizer, fit or sweep)");
  }
  cfg.experiment = section;
  const Json& body = root.raw(section);
  const Section sec(body, section);

  std::optional<RingSpec> ring;
  if (!ring_json.is_null()) {
    ring = parse_ring(Section(ring_json, "ring"));
    cfg.normalized["ring"] = ring_json;
  } else if (section != "fit") {
    throw ConfigError("ring", "required key is missing");
  }

  if (section == "spectrum") {
    cfg.body = parse_spectrum(sec, *ring);
    cfg.normalized[section] = body;
  } else if (section == "ossb") {
    cfg.body = parse_ossb(sec, *ring);
    cfg.normalized[section] = body;
  } else if (section == "equalizer") {
    cfg.body = parse_equalizer(sec, *ring);
    cfg.normalized[section] = body;
  } else if (section == "fit") {
    auto [fit, normalized] = parse_fit(sec, body, ring, base_dir);
    cfg.body = std::move(fit);
    cfg.normalized[section] = std::move(normalized);
  } else {
    SweepExperiment sw;
    sw.param = sec.string("param");
    sw.pipeline = sec.string("pipeline");
    if (sw.pipeline != "spectrum" && sw.pipeline != "ossb" && sw.pipeline != "equalizer") {
      throw ConfigError(sec.key_path("pipeline"), "expected spectrum, ossb or equalizer");
    }
    const std::string pointer = sweep_pointer(sw.param, sw.pipeline, sec.key_path("param"));
    sw.values = sweep_values(sec);
    const Json& inner = sec.raw(sw.pipeline);
    sec.finish();

    Json point = {{"schema_version", kSchemaVersion},
                  {"ring", ring_json},
                  {sw.pipeline, inner}};
    for (double v : sw.values) {
      point[Json::json_pointer(pointer)] = v;
      try {
        sw.points.push_back(parse_experiment(point, base_dir));
      } catch (const ConfigError& e) {
        const bool in_pipeline = e.key().rfind(sw.pipeline, 0) == 0;
        throw ConfigError(in_pipeline ? "sweep." + e.key() : e.key(), e.detail());
      }
    }
    cfg.normalized[section] = body;
    cfg.body = std::move(sw);
  }
  root.finish();
  return cfg;
}

}  // namespace ringlink::cli
