#pragma once

// Text formats shared by the command-line front end: CSV/JSON tables,
// flag-value parsers and the flat key=value config file.

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "heralded/analytics.hpp"
#include "heralded/scenario.hpp"

namespace heralded::cli {

inline constexpr std::string_view kUndefined = "undefined";
inline constexpr std::string_view kSweepHeader = "lambda_t_over_pi,herald_n,mean_photons,mandel_q,herald_prob";
inline constexpr std::string_view kDistHeader = "n,p_n";

/// Bad user input. Carries the offending field and, for config files, the line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message, int line = 0)
      : std::runtime_error(compose(field, message, line)), field_(std::move(field)), line_(line) {}
  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  static std::string compose(const std::string& field, const std::string& message, int line) {
    std::string out = line > 0 ? "line " + std::to_string(line) + ": " : "";
    return out + "'" + field + "': " + message;
  }
  std::string field_;
  int line_;
};

// 17 significant digits round-trip every double.
inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string format_optional(const std::optional<double>& x) {
  return x ? format_number(*x) : std::string(kUndefined);
}

// ---------------------------------------------------------------------------
// Value parsers.

inline double parse_double(std::string_view text, const std::string& field) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw ConfigError(field, "expected a number, got an empty value");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
    throw ConfigError(field, "expected a finite number, got '" + s + "'");
  }
  return v;
}

inline int parse_int(std::string_view text, const std::string& field) {
  const double v = parse_double(text, field);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw ConfigError(field, "expected an integer, got '" + std::string(text) + "'");
  }
  return static_cast<int>(v);
}

inline std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const auto next = text.find(sep, pos);
    parts.emplace_back(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

/// "re" or "re,im".
inline cplx parse_complex(std::string_view text, const std::string& field) {
  const auto parts = split(text, ',');
  if (parts.size() == 1) return {parse_double(parts[0], field), 0.0};
  if (parts.size() == 2) return {parse_double(parts[0], field), parse_double(parts[1], field)};
  throw ConfigError(field, "expected 're' or 're,im', got '" + std::string(text) + "'");
}

inline std::vector<int> parse_int_list(std::string_view text, const std::string& field) {
  std::vector<int> out;
  for (const auto& p : split(text, ',')) out.push_back(parse_int(p, field));
  return out;
}

/// Grid over lambda t in units of pi: `steps` evenly spaced points from start to stop.
struct Grid {
  double start = 0.0;
  double stop = 0.5;
  int steps = 2;

  std::vector<double> points() const {
    std::vector<double> pts(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
      pts[static_cast<std::size_t>(i)] = (i == steps - 1) ? stop : start + (stop - start) * i / (steps - 1);
    }
    return pts;
  }
};

inline Grid parse_grid(std::string_view text, const std::string& field = "grid") {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw ConfigError(field, "expected 'start,stop,steps', got '" + std::string(text) + "'");
  Grid g{parse_double(parts[0], field), parse_double(parts[1], field), parse_int(parts[2], field)};
  if (g.steps < 2) throw ConfigError(field, "steps must be >= 2");
  if (g.start < 0.0 || g.stop > 1.0 || g.start > g.stop) {
    throw ConfigError(field, "grid must satisfy 0 <= start <= stop <= 1 (units of pi)");
  }
  return g;
}

struct KeyValue {
  std::string key;
  std::string value;
  int line = 0;
};

/// Flat key=value file; '#' starts a comment. Keys may carry a leading "--".
inline std::vector<KeyValue> parse_key_value(std::istream& in) {
  std::vector<KeyValue> out;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected key=value", lineno);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    if (key.empty()) throw ConfigError("", "empty key", lineno);
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    out.push_back({std::move(key), std::move(value), lineno});
  }
  return out;
}

inline std::vector<KeyValue> read_key_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  return parse_key_value(in);
}

// ---------------------------------------------------------------------------
// Tables.

inline void write_sweep_csv(std::ostream& os, std::span<const HeraldRecord> rows) {
  os << kSweepHeader << '\n';
  for (const auto& r : rows) {
    os << format_number(r.lambda_t_over_pi) << ',' << r.herald_n << ',' << format_optional(r.mean) << ','
       << format_optional(r.mandel_q) << ',' << format_number(r.herald_prob) << '\n';
  }
}

inline nlohmann::ordered_json optional_json(const std::optional<double>& x) {
  return x ? nlohmann::ordered_json(*x) : nlohmann::ordered_json(nullptr);
}

inline nlohmann::ordered_json sweep_json(std::span<const HeraldRecord> rows) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    arr.push_back({{"lambda_t_over_pi", r.lambda_t_over_pi},
                   {"herald_n", r.herald_n},
                   {"mean_photons", optional_json(r.mean)},
                   {"mandel_q", optional_json(r.mandel_q)},
                   {"herald_prob", r.herald_prob}});
  }
  return arr;
}

inline void write_sweep_json(std::ostream& os, std::span<const HeraldRecord> rows) {
  os << sweep_json(rows).dump(2) << '\n';
}

/// Reads the CSV written by write_sweep_csv. Distribution and radians are
/// not part of the table; lambda_t is rebuilt from the pi-unit column.
inline std::vector<HeraldRecord> parse_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSweepHeader) throw ConfigError("csv", "missing sweep header");
  std::vector<HeraldRecord> rows;
  int lineno = 1;
  auto opt = [](const std::string& s, const std::string& field) -> std::optional<double> {
    if (s == kUndefined) return std::nullopt;
    return parse_double(s, field);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 5) throw ConfigError("csv", "expected 5 columns", lineno);
    HeraldRecord r;
    r.lambda_t_over_pi = parse_double(f[0], "lambda_t_over_pi");
    r.lambda_t = CouplingPhase::from_pi_units(r.lambda_t_over_pi).radians();
    r.herald_n = parse_int(f[1], "herald_n");
    r.mean = opt(f[2], "mean_photons");
    r.mandel_q = opt(f[3], "mandel_q");
    r.herald_prob = parse_double(f[4], "herald_prob");
    rows.push_back(std::move(r));
  }
  return rows;
}

struct DistTable {
  int herald_n = 0;
  double lambda_t_over_pi = 0.0;
  double herald_prob = 0.0;
  std::vector<std::pair<int, double>> rows;  // (n, P_n), zero entries omitted
  std::optional<std::string> diagnostic;
};

inline void write_dist_csv(std::ostream& os, const DistTable& t) {
  os << kDistHeader << '\n';
  for (const auto& [n, p] : t.rows) os << n << ',' << format_number(p) << '\n';
}

inline void write_dist_json(std::ostream& os, const DistTable& t) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& [n, p] : t.rows) arr.push_back({{"n", n}, {"p_n", p}});
  os << arr.dump(2) << '\n';
}

inline std::vector<std::pair<int, double>> parse_dist_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kDistHeader) throw ConfigError("csv", "missing dist header");
  std::vector<std::pair<int, double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 2) throw ConfigError("csv", "expected 2 columns");
    rows.emplace_back(parse_int(f[0], "n"), parse_double(f[1], "p_n"));
  }
  return rows;
}

}  // namespace heralded::cli
