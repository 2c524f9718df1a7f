// SPDX-License-Identifier: Apache-2.0
//
// Executes a parsed experiment and collects plot-ready outputs plus the
// derived scalars reported in the result envelope.

#ifndef RINGLINK_CLI_PIPELINES_HPP
#define RINGLINK_CLI_PIPELINES_HPP

#include <string>
#include <vector>

#include "ringlink/cli/config.hpp"

namespace ringlink::cli {

struct RunOutput {
  Json outputs = Json::object();
  Json scalars = Json::object();
  std::vector<std::string> warnings;
};

/// `threads` bounds the workers used by sweeps and RF grids.
RunOutput run_experiment(const ExperimentConfig& cfg, unsigned threads = 1);

}  // namespace ringlink::cli

#endif  // RINGLINK_CLI_PIPELINES_HPP
