// SPDX-License-Identifier: Apache-2.0

#include "ringlink/cli/app.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <thread>

namespace ringlink::cli {

namespace fs = std::filesystem;

#ifndef RINGLINK_VERSION
#define RINGLINK_VERSION "0.0.0"
#endif

std::string_view tool_version() { return RINGLINK_VERSION; }

const std::vector<SubcommandSpec>& subcommands() {
  static const std::vector<SubcommandSpec> all{
      {"spectrum", "spectrum", ""},
      {"ossb", "ossb", ""},
      {"equalizer", "equalizer", ""},
      {"fit", "fit", ""},
      {"sweep-theta", "sweep", "theta_deg"},
      {"sweep-temp", "sweep", "temperature_c"},
      {"sweep-carrier", "sweep", "carrier_offset_hz"},
  };
  return all;
}

Json make_envelope(std::string_view subcommand, const ExperimentConfig& cfg,
                   const RunOutput& run, const Recipe* recipe) {
  Json env{{"tool", "ringlink"},
           {"tool_version", std::string(tool_version())},
           {"schema_version", kSchemaVersion},
           {"subcommand", std::string(subcommand)},
           {"experiment", cfg.experiment},
           {"config", cfg.normalized},
           {"config_hash", config_hash(cfg.normalized)},
           {"outputs", run.outputs},
           {"scalars", run.scalars},
           {"warnings", run.warnings}};
  if (recipe) {
    env["recipe"] = {{"name", recipe->name},
                     {"mirrors", recipe->mirrors},
                     {"consumer", recipe->consumer}};
  }
  return env;
}

unsigned thread_count_from_env() {
  if (const char* v = std::getenv("RINGLINK_THREADS"); v && *v) {
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (*end == '\0' && n > 0) return static_cast<unsigned>(n);
    throw CLI::ValidationError("RINGLINK_THREADS", "must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

fs::path csv_path(const fs::path& out) {
  fs::path p = out;
  if (p.extension() == ".json") return p.replace_extension(".csv");
  return fs::path(out.string() + ".csv");
}

// Write to a sibling temp file, then rename, so a failed run never leaves a
// partial output behind.
bool write_atomic(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) return false;
    f << text;
    if (!f.flush()) return false;
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) fs::remove(tmp, ec);
  return !ec;
}

void print_usage(std::ostream& os) {
  os << "usage: ringlink <subcommand> (--config <path> | --recipe <name>) --out <path> [--csv]\n"
        "subcommands:";
  for (const auto& s : subcommands()) os << ' ' << s.name;
  os << "\nrecipes:";
  for (const auto& r : recipes()) os << ' ' << r.name;
  os << "\n";
}

}  // namespace

int run_app(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty()) {
    print_usage(err);
    return kExitUsage;
  }
  const std::string& name = args.front();
  if (name == "--help" || name == "-h") {
    print_usage(out);
    return kExitOk;
  }
  if (name == "--version") {
    out << "ringlink " << tool_version() << "\n";
    return kExitOk;
  }
  if (name == "--list-recipes") {
    for (const auto& r : recipes()) {
      out << r.name << "\t" << r.subcommand << "\t" << r.mirrors << " [" << r.consumer << "]\n";
    }
    return kExitOk;
  }
  const auto sub = std::find_if(subcommands().begin(), subcommands().end(),
                                [&](const SubcommandSpec& s) { return s.name == name; });
  if (sub == subcommands().end()) {
    err << "ringlink: unknown subcommand '" << name << "'\n";
    print_usage(err);
    return kExitUsage;
  }

  CLI::App app("ringlink " + name, "ringlink " + name);
  std::string config_path, recipe_name, out_path;
  bool csv = false;
  auto* config_opt = app.add_option("--config", config_path, "experiment config (JSON)");
  auto* recipe_opt = app.add_option("--recipe", recipe_name, "built-in recipe name");
  config_opt->excludes(recipe_opt);
  app.add_option("--out", out_path, "result envelope path (JSON)")->required();
  app.add_flag("--csv", csv, "also write a long-format CSV next to the envelope");
  std::vector<std::string> rest(args.begin() + 1, args.end());
  std::reverse(rest.begin(), rest.end());  // CLI11 consumes from the back
  try {
    app.parse(rest);
    if (config_path.empty() == recipe_name.empty()) {
      throw CLI::RequiredError("exactly one of --config or --recipe");
    }
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "ringlink " << name << ": " << e.what() << "\n";
    return kExitUsage;
  }

  const Recipe* recipe = nullptr;
  if (!recipe_name.empty()) {
    recipe = find_recipe(recipe_name);
    if (!recipe) {
      err << "ringlink: unknown recipe '" << recipe_name << "'\n";
      print_usage(err);
      return kExitUsage;
    }
    if (recipe->subcommand != name) {
      err << "ringlink: recipe '" << recipe_name << "' runs under '" << recipe->subcommand
          << "', not '" << name << "'\n";
      return kExitUsage;
    }
  }

  unsigned threads = 1;
  try {
    threads = thread_count_from_env();
  } catch (const CLI::ValidationError& e) {
    err << "ringlink: " << e.what() << "\n";
    return kExitUsage;
  }

  ExperimentConfig cfg;
  RunOutput run;
  try {
    if (recipe) {
      cfg = parse_experiment(recipe->config, fs::current_path());
    } else {
      const fs::path p(config_path);
      cfg = parse_experiment(read_json_file(p, "<file>"), p.parent_path());
    }
    if (cfg.experiment != sub->experiment) {
      throw ConfigError(cfg.experiment, "subcommand '" + name + "' needs a " +
                                            std::string(sub->experiment) + " section");
    }
    if (const auto* sw = std::get_if<SweepExperiment>(&cfg.body);
        sw && sw->param != sub->sweep_param) {
      throw ConfigError("sweep.param", "subcommand '" + name + "' sweeps " +
                                           std::string(sub->sweep_param) + ", config has " +
                                           sw->param);
    }
  } catch (const ConfigError& e) {
    err << "ringlink: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "ringlink: " << e.what() << "\n";
    return kExitDomain;
  }

  try {
    run = run_experiment(cfg, threads);
  } catch (const DomainError& e) {
    err << "ringlink: " << e.what() << "\n";
    return kExitDomain;
  }

  for (const auto& w : run.warnings) err << "ringlink: warning: " << w << "\n";
  const Json env = make_envelope(name, cfg, run, recipe);
  if (!write_atomic(out_path, canonical_dump(env))) {
    err << "ringlink: cannot write " << out_path << "\n";
    return kExitCantCreate;
  }
  if (csv && !write_atomic(csv_path(out_path), outputs_to_csv(run.outputs))) {
    err << "ringlink: cannot write " << csv_path(out_path).string() << "\n";
    return kExitCantCreate;
  }
  return kExitOk;
}

}  // namespace ringlink::cli
