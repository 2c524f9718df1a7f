// SPDX-License-Identifier: Apache-2.0
//
// Trace files: whitespace- or comma-separated `freq_hz power_linear` rows,
// `#` starts a comment. Metadata lives in a JSON sidecar:
//   {"port": "through"|"drop", "pol": "te"|"tm", "fsr_hz": <number>,
//    "calibrated": <bool, optional, default false>}

#ifndef RINGLINK_CLI_TRACE_IO_HPP
#define RINGLINK_CLI_TRACE_IO_HPP

#include <filesystem>
#include <vector>

#include "ringlink/cli/canonical_json.hpp"
#include "ringlink/fit.hpp"

namespace ringlink::cli {

std::vector<TraceSample> read_trace_samples(const std::filesystem::path& path);
/// Loads samples plus sidecar metadata (default sidecar: `<path>.json`).
MeasuredTrace read_trace(const std::filesystem::path& path,
                         const std::filesystem::path& sidecar);

void write_trace(const MeasuredTrace& trace, const std::filesystem::path& path);
Json trace_sidecar(const MeasuredTrace& trace);

}  // namespace ringlink::cli

#endif  // RINGLINK_CLI_TRACE_IO_HPP
