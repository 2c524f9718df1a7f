// SPDX-License-Identifier: Apache-2.0

#include "ringlink/cli/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "ringlink/cli/config.hpp"

namespace ringlink::cli {

namespace {

bool parse_double(std::string_view tok, double& out) {
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

}  // namespace

std::vector<TraceSample> read_trace_samples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("fit.trace_path", "cannot open " + path.string());
  std::vector<TraceSample> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& c : line) {
      if (c == ',' || c == '\t' || c == '\r') c = ' ';
    }
    std::istringstream fields(line);
    std::vector<std::string> toks;
    for (std::string tok; fields >> tok;) toks.push_back(tok);
    if (toks.empty()) continue;
    TraceSample s;
    if (toks.size() != 2 || !parse_double(toks[0], s.freq_hz) ||
        !parse_double(toks[1], s.power)) {
      throw ConfigError("fit.trace_path", path.string() + ":" + std::to_string(line_no) +
                                              ": expected two numeric columns");
    }
    out.push_back(s);
  }
  return out;
}

MeasuredTrace read_trace(const std::filesystem::path& path,
                         const std::filesystem::path& sidecar) {
  MeasuredTrace trace;
  trace.samples = read_trace_samples(path);
  const Json meta = read_json_file(sidecar, "fit.sidecar_path");
  const Section s(meta, "sidecar");
  try {
    trace.port = parse_port(s.string("port"));
  } catch (const DomainError& e) {
    throw ConfigError(s.key_path("port"), e.what());
  }
  try {
    trace.pol = parse_pol_mode(s.string("pol"));
  } catch (const DomainError& e) {
    throw ConfigError(s.key_path("pol"), e.what());
  }
  trace.fsr_hz = s.number("fsr_hz");
  trace.calibrated = s.boolean_or("calibrated", false);
  s.finish();
  return trace;
}

Json trace_sidecar(const MeasuredTrace& trace) {
  return Json{{"port", std::string(to_string(trace.port))},
              {"pol", std::string(to_string(trace.pol))},
              {"fsr_hz", trace.fsr_hz},
              {"calibrated", trace.calibrated}};
}

void write_trace(const MeasuredTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "# freq_hz power_linear\n";
  for (const auto& s : trace.samples) {
    out << format_double(s.freq_hz) << ' ' << format_double(s.power) << '\n';
  }
  std::ofstream side(path.string() + ".json");
  if (!side) throw std::runtime_error("cannot write sidecar for " + path.string());
  side << canonical_dump(trace_sidecar(trace));
}

}  // namespace ringlink::cli
