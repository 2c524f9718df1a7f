// SPDX-License-Identifier: Apache-2.0
//
// Byte-stable JSON and CSV emission: sorted keys, doubles as 17 significant
// digits in lowercase e-notation.

#ifndef RINGLINK_CLI_CANONICAL_JSON_HPP
#define RINGLINK_CLI_CANONICAL_JSON_HPP

#include <cstdint>
#include <json.hpp>
#include <string>

namespace ringlink::cli {

using Json = nlohmann::json;

std::string format_double(double v);

/// indent < 0 gives the compact form used for hashing.
std::string canonical_dump(const Json& j, int indent = 2);

std::uint64_t fnv1a64(std::string_view bytes);
std::string config_hash(const Json& config);

/// Long-format projection of every array of objects under `outputs`:
/// one `table,row,column,value` record per scalar cell.
std::string outputs_to_csv(const Json& outputs);

}  // namespace ringlink::cli

#endif  // RINGLINK_CLI_CANONICAL_JSON_HPP
