// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration: strict JSON reading (unknown keys are errors and
// every message names the dotted key path), ring parameter files, and the
// normalized config that results are echoed with.

#ifndef RINGLINK_CLI_CONFIG_HPP
#define RINGLINK_CLI_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ringlink/cli/canonical_json.hpp"
#include "ringlink/fit.hpp"
#include "ringlink/link.hpp"

namespace ringlink::cli {

inline constexpr int kSchemaVersion = 1;

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, std::string detail)
      : std::runtime_error("config key '" + key + "': " + detail),
        key_(std::move(key)),
        detail_(std::move(detail)) {}
  const std::string& key() const { return key_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string key_;
  std::string detail_;
};

/// View over one JSON object that records which keys were read, so that
/// finish() can reject the rest.
class Section {
 public:
  Section(const Json& obj, std::string path);

  const std::string& path() const { return path_; }
  std::string key_path(std::string_view key) const;
  bool has(std::string_view key) const;

  double number(std::string_view key) const;
  std::optional<double> optional_number(std::string_view key) const;
  double number_or(std::string_view key, double fallback) const;
  long long integer(std::string_view key) const;
  std::optional<long long> optional_integer(std::string_view key) const;
  std::string string(std::string_view key) const;
  std::optional<std::string> optional_string(std::string_view key) const;
  bool boolean_or(std::string_view key, bool fallback) const;
  std::vector<double> number_array(std::string_view key) const;
  Section object(std::string_view key) const;
  const Json& raw(std::string_view key) const;

  void finish() const;

 private:
  const Json* get(std::string_view key) const;

  const Json& obj_;
  std::string path_;
  mutable std::set<std::string, std::less<>> used_;
};

/// Parses a ring parameter file: JSON, or `key = value` lines with `#`
/// comments. Numbers are converted; the `form` value stays a string.
Json load_ring_file(const std::filesystem::path& path);

struct RingSpec {
  RingModel model;
  /// Frequency carrier anchors refer to: the spectral TE anchor, or
  /// c / lambda_ref for the physical form.
  double reference_hz = 0.0;
};

RingSpec parse_ring(const Section& ring);

/// Carrier placement: `carrier_freq_hz`, or `carrier_anchor` (te|tm) plus
/// `carrier_offset_hz` from that mode's resonance nearest the reference
/// frequency, located at the reference temperature (the laser stays put
/// when the ring is heated).
double parse_carrier(const Section& s, const RingSpec& ring);

struct SpectrumExperiment {
  RingSpec ring;
  double f_start_hz = 0.0;
  double f_stop_hz = 0.0;
  std::size_t points = 0;
};

struct OssbExperiment {
  OssbConfig cfg;
};

struct EqualizerExperiment {
  EqualizerConfig cfg;
};

struct FitExperiment {
  MeasuredTrace trace;
  std::optional<ResonanceGuess> guess;
};

struct ExperimentConfig;

struct SweepExperiment {
  std::string param;
  std::string pipeline;
  std::vector<double> values;
  std::vector<ExperimentConfig> points;
};

struct ExperimentConfig {
  std::string experiment;  // spectrum | ossb | equalizer | fit | sweep
  Json normalized;         // self-contained; re-running it reproduces results
  std::variant<std::monostate, SpectrumExperiment, OssbExperiment, EqualizerExperiment,
               FitExperiment, SweepExperiment>
      body;
};

/// `base_dir` resolves relative ring_path / trace_path entries.
ExperimentConfig parse_experiment(const Json& raw,
                                  const std::filesystem::path& base_dir);

/// Reads JSON from disk; syntax errors become ConfigError.
Json read_json_file(const std::filesystem::path& path, const std::string& what);

}  // namespace ringlink::cli

#endif  // RINGLINK_CLI_CONFIG_HPP
