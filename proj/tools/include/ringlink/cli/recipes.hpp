// SPDX-License-Identifier: Apache-2.0
//
// Built-in experiment configs. Each figN recipe regenerates the data behind
// one measured figure on the reference device and names the acceptance
// check that consumes it.

#ifndef RINGLINK_CLI_RECIPES_HPP
#define RINGLINK_CLI_RECIPES_HPP

#include <string>
#include <vector>

#include "ringlink/cli/canonical_json.hpp"

namespace ringlink::cli {

struct Recipe {
  std::string name;
  std::string subcommand;
  std::string mirrors;   // the figure and what it shows
  std::string consumer;  // acceptance check fed by this recipe, or "none"
  Json config;
};

const std::vector<Recipe>& recipes();
const Recipe* find_recipe(std::string_view name);

/// Spectral-form ring JSON of the reference device: TE at 1550.47 nm, TM
/// 16.6 GHz above, 49 GHz FSR, 140 MHz linewidth, 1.77 / 1.67 GHz per degree
/// redshift from 23 C.
Json reference_ring();

}  // namespace ringlink::cli

#endif  // RINGLINK_CLI_RECIPES_HPP
