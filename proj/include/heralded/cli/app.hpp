#pragma once

// Argument handling for the heralded executable. run() takes argv as strings
// and returns the process exit code:
//   0  success (and, for verify, every check passed)
//   1  verify ran but some checks failed
//   2  bad arguments or config file
//   3  runtime failure (I/O, truncation too small, ...)

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "heralded/cli/commands.hpp"
#include "heralded/cli/io.hpp"

namespace heralded::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

/// Raw flag values as strings; typed parsing happens in one place so file and
/// command-line values produce the same diagnostics.
struct RawArgs {
  std::string scenario, alpha, nbar, r, herald, grid, ncut, cutoffs, at, out, format, tol, preset, config;
};

namespace detail {

// Validators for every key a config file may carry.
inline const std::map<std::string, std::function<void(const std::string&)>>& key_checks() {
  static const std::map<std::string, std::function<void(const std::string&)>> checks = {
      {"scenario",
       [](const std::string& v) {
         if (v != "coherent" && v != "thermal" && v != "squeezed") {
           throw ConfigError("scenario", "expected coherent|thermal|squeezed, got '" + v + "'");
         }
       }},
      {"alpha", [](const std::string& v) { parse_complex(v, "alpha"); }},
      {"nbar", [](const std::string& v) { parse_double(v, "nbar"); }},
      {"r", [](const std::string& v) { parse_double(v, "r"); }},
      {"herald", [](const std::string& v) { parse_int_list(v, "herald"); }},
      {"grid", [](const std::string& v) { parse_grid(v); }},
      {"ncut", [](const std::string& v) { parse_int(v, "ncut"); }},
      {"cutoffs", [](const std::string& v) { parse_int_list(v, "cutoffs"); }},
      {"at", [](const std::string& v) { parse_double(v, "at"); }},
      {"out", [](const std::string&) {}},
      {"format",
       [](const std::string& v) {
         if (v != "csv" && v != "json") throw ConfigError("format", "expected csv|json, got '" + v + "'");
       }},
      {"tol", [](const std::string& v) { parse_double(v, "tol"); }},
      {"preset",
       [](const std::string& v) {
         if (v != "small" && v != "full") throw ConfigError("preset", "expected small|full, got '" + v + "'");
       }},
  };
  return checks;
}

// Config-file entries as "--key value" pairs, checked with line numbers.
inline std::vector<std::string> config_arguments(const std::string& path) {
  std::vector<std::string> args;
  for (const auto& kv : read_key_value_file(path)) {
    const auto it = key_checks().find(kv.key);
    if (it == key_checks().end()) throw ConfigError(kv.key, "unknown key in " + path, kv.line);
    try {
      it->second(kv.value);
    } catch (const ConfigError& e) {
      throw ConfigError(kv.key, std::string(e.what()) + " (in " + path + ")", kv.line);
    }
    args.push_back("--" + kv.key);
    args.push_back(kv.value);
  }
  return args;
}

// The value of --config, if present, without invoking the full parser.
inline std::optional<std::string> find_config(const std::vector<std::string>& args) {
  std::optional<std::string> path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[++i];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  return path;
}

inline ScenarioSpec build_scenario(const RawArgs& a) {
  if (a.scenario.empty()) throw ConfigError("scenario", "required (coherent|thermal|squeezed)");
  key_checks().at("scenario")(a.scenario);
  auto need = [](const std::string& v, const char* field) {
    if (v.empty()) throw ConfigError(field, "required for this scenario");
    return v;
  };
  if (a.scenario == "coherent") return Coherent{parse_complex(need(a.alpha, "alpha"), "alpha")};
  if (a.scenario == "thermal") {
    const double nbar = parse_double(need(a.nbar, "nbar"), "nbar");
    if (nbar < 0.0) throw ConfigError("nbar", "must be >= 0");
    return Thermal{nbar};
  }
  const double r = parse_double(need(a.r, "r"), "r");
  if (r < 0.0) throw ConfigError("r", "must be >= 0");
  return SqueezedVacuum{r};
}

inline OutputFormat build_format(const RawArgs& a) {
  if (a.format.empty() || a.format == "csv") return OutputFormat::csv;
  key_checks().at("format")(a.format);
  return OutputFormat::json;
}

inline std::optional<TruncationConfig> build_cutoffs(const RawArgs& a) {
  if (a.cutoffs.empty()) return std::nullopt;
  const auto v = parse_int_list(a.cutoffs, "cutoffs");
  if (v.size() != 2) throw ConfigError("cutoffs", "expected 'n_max_a,n_max_b'");
  try {
    return TruncationConfig(v[0], v[1]);
  } catch (const std::exception& e) {
    throw ConfigError("cutoffs", e.what());
  }
}

inline std::optional<int> build_ncut(const RawArgs& a) {
  if (a.ncut.empty()) return std::nullopt;
  return parse_int(a.ncut, "ncut");
}

// Writes through `emit` to --out, or to `out` when no path is given.
inline void write_output(const std::string& path, std::ostream& out,
                         const std::function<void(std::ostream&)>& emit) {
  if (path.empty()) {
    emit(out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  emit(file);
  if (!file) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  if (args.empty()) args.emplace_back("heralded");

  CLI::App app{"Heralded multiphoton states from two beamsplitter-coupled modes", "heralded"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.fallthrough();

  RawArgs a;
  app.add_option("--scenario", a.scenario, "coherent|thermal|squeezed");
  app.add_option("--alpha", a.alpha, "coherent amplitude, re[,im]");
  app.add_option("--nbar", a.nbar, "thermal mean photon number");
  app.add_option("--r", a.r, "squeezing parameter");
  app.add_option("--herald", a.herald, "herald photon numbers, comma separated");
  app.add_option("--grid", a.grid, "start,stop,steps in units of pi");
  app.add_option("--ncut", a.ncut, "photon cutoff for closed-form distributions");
  app.add_option("--cutoffs", a.cutoffs, "oracle truncation n_max_a,n_max_b");
  app.add_option("--at", a.at, "lambda t / pi for dist");
  app.add_option("--out", a.out, "output path (default stdout)");
  app.add_option("--format", a.format, "csv|json");
  app.add_option("--tol", a.tol, "verify tolerance");
  app.add_option("--preset", a.preset, "small|full");
  app.add_option("--config", a.config, "flat key=value file mirroring the flags");

  auto* sweep = app.add_subcommand("sweep", "time sweep of mean, Mandel Q and herald probability");
  auto* dist = app.add_subcommand("dist", "photon distribution of the heralded state");
  auto* verify = app.add_subcommand("verify", "closed forms against the truncated-Fock oracle");

  try {
    // File values go first so command-line flags (taken last) override them.
    std::vector<std::string> merged{args.front()};
    if (const auto path = detail::find_config(args)) {
      const auto from_file = detail::config_arguments(*path);
      merged.insert(merged.end(), from_file.begin(), from_file.end());
    }
    merged.insert(merged.end(), args.begin() + 1, args.end());

    std::vector<std::string> reversed(merged.rbegin(), merged.rend() - 1);
    try {
      app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << '\n';
      return kExitConfig;
    }

    if (*sweep) {
      SweepConfig cfg;
      cfg.scenario = detail::build_scenario(a);
      cfg.heralds = a.herald.empty() ? std::vector<int>{1} : parse_int_list(a.herald, "herald");
      cfg.grid = a.grid.empty() ? Grid{0.0, 0.5, 201} : parse_grid(a.grid);
      cfg.cutoffs = detail::build_cutoffs(a);
      cfg.n_cut = detail::build_ncut(a);
      cfg.out = a.out;
      cfg.format = detail::build_format(a);
      const auto rows = run_sweep(cfg);
      detail::write_output(cfg.out, out, [&](std::ostream& os) {
        if (cfg.format == OutputFormat::csv) write_sweep_csv(os, rows);
        else write_sweep_json(os, rows);
      });
      return kExitOk;
    }

    if (*dist) {
      const auto spec = detail::build_scenario(a);
      const auto heralds = a.herald.empty() ? std::vector<int>{1} : parse_int_list(a.herald, "herald");
      if (heralds.size() != 1) throw ConfigError("herald", "dist takes a single herald outcome");
      const double at = a.at.empty() ? 0.25 : parse_double(a.at, "at");
      const auto table = run_dist(spec, heralds.front(), at, detail::build_ncut(a));
      if (table.diagnostic) err << "note: " << *table.diagnostic << '\n';
      const auto format = detail::build_format(a);
      detail::write_output(a.out, out, [&](std::ostream& os) {
        if (format == OutputFormat::csv) write_dist_csv(os, table);
        else write_dist_json(os, table);
      });
      return kExitOk;
    }

    if (*verify) {
      const double tol = a.tol.empty() ? 1e-8 : parse_double(a.tol, "tol");
      if (tol < 0.0) throw ConfigError("tol", "must be >= 0");
      Preset preset = Preset::small;
      if (!a.preset.empty()) {
        detail::key_checks().at("preset")(a.preset);
        preset = a.preset == "full" ? Preset::full : Preset::small;
      }
      const auto report = run_verify(tol, preset);
      detail::write_output(a.out, out, [&](std::ostream& os) { os << report_json(report).dump(2) << '\n'; });
      err << "verify " << report.preset << ": " << report.passed() << "/" << report.checks.size()
          << " checks passed (tol " << format_number(tol) << ", rel " << format_number(report.rel_tolerance)
          << ")\n";
      return report.ok() ? kExitOk : kExitVerifyFailed;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}

}  // namespace heralded::cli
