// SPDX-License-Identifier: Apache-2.0
//
//   ringlink <subcommand> (--config <path> | --recipe <name>) --out <path> [--csv]
//
// Exit status: 0 success, 1 config error (nothing written), 2 domain error
// from the simulation, 64 usage error or unknown subcommand, 73 output file
// not writable.

#ifndef RINGLINK_CLI_APP_HPP
#define RINGLINK_CLI_APP_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ringlink/cli/config.hpp"
#include "ringlink/cli/pipelines.hpp"
#include "ringlink/cli/recipes.hpp"

namespace ringlink::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitCantCreate = 73;

std::string_view tool_version();

/// Experiment section (and sweep parameter) a subcommand requires.
struct SubcommandSpec {
  std::string_view name;
  std::string_view experiment;
  std::string_view sweep_param;  // empty unless a sweep
};
const std::vector<SubcommandSpec>& subcommands();

Json make_envelope(std::string_view subcommand, const ExperimentConfig& cfg,
                   const RunOutput& run, const Recipe* recipe);

/// Worker count from RINGLINK_THREADS, else the hardware concurrency.
unsigned thread_count_from_env();

int run_app(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ringlink::cli

#endif  // RINGLINK_CLI_APP_HPP
