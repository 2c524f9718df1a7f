// SPDX-License-Identifier: Apache-2.0

#include "ringlink/cli/canonical_json.hpp"

#include <cmath>
#include <cstdio>
#include <map>

namespace ringlink::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // fold -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

namespace {

void newline(std::string& out, int indent, int depth) {
  if (indent < 0) return;
  out += '\n';
  out.append(static_cast<std::size_t>(indent * depth), ' ');
}

void dump(const Json& j, int indent, int depth, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      // nlohmann's default object is a std::map, so iteration is sorted.
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(out, indent, depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        dump(it.value(), indent, depth + 1, out);
      }
      newline(out, indent, depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        newline(out, indent, depth + 1);
        dump(v, indent, depth + 1, out);
      }
      newline(out, indent, depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      const std::string s = format_double(v);
      out += std::isfinite(v) ? s : Json(s).dump();
      return;
    }
    default:
      out += j.dump();
  }
}

void csv_cell(std::string& out, const Json& v) {
  if (v.is_number_float()) {
    out += format_double(v.get<double>());
  } else if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) {
      out += s;
    } else {
      out += '"';
      for (char c : s) {
        if (c == '"') out += '"';
        out += c;
      }
      out += '"';
    }
  } else {
    out += v.dump();
  }
}

}  // namespace

std::string canonical_dump(const Json& j, int indent) {
  std::string out;
  dump(j, indent, 0, out);
  if (indent >= 0) out += '\n';
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const Json& config) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_dump(config, -1))));
  return buf;
}

std::string outputs_to_csv(const Json& outputs) {
  std::string out = "table,row,column,value\n";
  for (auto it = outputs.begin(); it != outputs.end(); ++it) {
    if (!it.value().is_array()) continue;
    std::size_t row = 0;
    for (const auto& rec : it.value()) {
      if (rec.is_object()) {
        for (auto f = rec.begin(); f != rec.end(); ++f) {
          if (f.value().is_structured()) continue;
          out += it.key() + ',' + std::to_string(row) + ',' + f.key() + ',';
          csv_cell(out, f.value());
          out += '\n';
        }
      } else if (!rec.is_structured()) {
        out += it.key() + ',' + std::to_string(row) + ",value,";
        csv_cell(out, rec);
        out += '\n';
      }
      ++row;
    }
  }
  return out;
}

}  // namespace ringlink::cli
