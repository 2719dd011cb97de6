#pragma once

// sweep / dist / verify drivers. Everything here returns values; the
// executable in tools/ owns argument parsing and file output.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "heralded/cli/io.hpp"
#include "heralded/scenario.hpp"

namespace heralded::cli {

enum class OutputFormat { csv, json };

struct SweepConfig {
  ScenarioSpec scenario = Coherent{2.0};
  std::vector<int> heralds{1};
  Grid grid{};
  std::optional<TruncationConfig> cutoffs;  // oracle truncation override
  std::optional<int> n_cut;                 // closed-form distribution length override
  std::string out;                          // empty means stdout
  OutputFormat format = OutputFormat::csv;
};

/// Runs fn(0..count-1) on a small thread pool. The first exception thrown by
/// any task is rethrown on the calling thread after all workers stop.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                         unsigned workers = std::thread::hardware_concurrency()) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

inline int closed_form_cutoff(const ScenarioSpec& spec, const std::optional<int>& n_cut) {
  return n_cut ? *n_cut : default_oracle_config(spec).n_max_a();
}

inline void validate(const SweepConfig& cfg) {
  if (cfg.heralds.empty()) throw ConfigError("herald", "at least one herald outcome is required");
  for (int n : cfg.heralds) {
    if (n < 0) throw ConfigError("herald", "herald outcomes must be >= 0");
  }
  if (cfg.grid.steps < 2) throw ConfigError("grid", "steps must be >= 2");
  if (cfg.grid.start < 0.0 || cfg.grid.stop > 1.0 || cfg.grid.start > cfg.grid.stop) {
    throw ConfigError("grid", "grid must satisfy 0 <= start <= stop <= 1 (units of pi)");
  }
  if (cfg.n_cut && (*cfg.n_cut < 1 || *cfg.n_cut > kMaxCutoff)) {
    throw ConfigError("ncut", "must lie in 1..200");
  }
}

namespace detail {

// Closed forms for N >= 1; the oracle for N = 0 and for inputs the closed
// forms reject (squeezing r = 0).
inline HeraldRecord sweep_point(const ScenarioSpec& spec, int herald_n, const CouplingPhase& phase,
                                int n_cut, const std::function<const OraclePipeline&()>& oracle) {
  if (herald_n >= 1) {
    try {
      return closed_form_record(spec, herald_n, phase, n_cut);
    } catch (const DegenerateInput&) {
    }
  }
  return oracle().record(herald_n, phase);
}

// Lazily built, shared oracle. Construction happens at most once.
class LazyOracle {
 public:
  LazyOracle(ScenarioSpec spec, std::optional<TruncationConfig> cutoffs)
      : spec_(std::move(spec)), cutoffs_(cutoffs) {}
  const OraclePipeline& get() const {
    std::call_once(once_, [this] {
      pipeline_.emplace(spec_, cutoffs_ ? *cutoffs_ : default_oracle_config(spec_));
    });
    return *pipeline_;
  }

 private:
  ScenarioSpec spec_;
  std::optional<TruncationConfig> cutoffs_;
  mutable std::once_flag once_;
  mutable std::optional<OraclePipeline> pipeline_;
};

}  // namespace detail

/// One row per (N, lambda t), N-major in the order given, lambda t in grid order.
inline std::vector<HeraldRecord> run_sweep(const SweepConfig& cfg) {
  validate(cfg);
  const auto points = cfg.grid.points();
  const int n_cut = closed_form_cutoff(cfg.scenario, cfg.n_cut);
  detail::LazyOracle oracle(cfg.scenario, cfg.cutoffs);
  std::vector<HeraldRecord> rows(cfg.heralds.size() * points.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    const int herald_n = cfg.heralds[i / points.size()];
    const auto phase = CouplingPhase::from_pi_units(points[i % points.size()]);
    rows[i] = detail::sweep_point(cfg.scenario, herald_n, phase, n_cut,
                                  [&]() -> const OraclePipeline& { return oracle.get(); });
  });
  return rows;
}

inline DistTable run_dist(const ScenarioSpec& spec, int herald_n, double lambda_t_over_pi,
                          std::optional<int> n_cut = std::nullopt) {
  if (herald_n < 0) throw ConfigError("herald", "herald outcome must be >= 0");
  if (!(lambda_t_over_pi >= 0.0 && lambda_t_over_pi <= 1.0)) {
    throw ConfigError("lambda_t_over_pi", "must lie in [0, 1]");
  }
  if (n_cut && (*n_cut < 1 || *n_cut > kMaxCutoff)) throw ConfigError("ncut", "must lie in 1..200");
  const auto phase = CouplingPhase::from_pi_units(lambda_t_over_pi);
  detail::LazyOracle oracle(spec, std::nullopt);
  const auto rec = detail::sweep_point(spec, herald_n, phase, closed_form_cutoff(spec, n_cut),
                                       [&]() -> const OraclePipeline& { return oracle.get(); });

  DistTable table;
  table.herald_n = herald_n;
  table.lambda_t_over_pi = lambda_t_over_pi;
  table.herald_prob = rec.herald_prob;
  if (rec.degenerate() || rec.herald_prob < kZeroProbability) {
    table.diagnostic = "herald outcome N=" + std::to_string(herald_n) + " has zero probability at lambda_t/pi=" +
                       format_number(lambda_t_over_pi) +
                       (std::holds_alternative<SqueezedVacuum>(spec) && herald_n % 2 == 1
                            ? " (parity-forbidden: the squeezed register holds only even photon numbers)"
                            : "");
    return table;
  }
  for (std::size_t n = 0; n < rec.distribution.size(); ++n) {
    if (rec.distribution[n] != 0.0) table.rows.emplace_back(static_cast<int>(n), rec.distribution[n]);
  }
  return table;
}

// ---------------------------------------------------------------------------
// verify

enum class Preset { small, full };

struct VerifyCheck {
  std::string scenario;
  std::string parameter;
  int herald_n = 0;
  double lambda_t_over_pi = 0.0;
  std::string field;
  std::optional<double> closed_form;
  std::optional<double> oracle;
  double abs_err = 0.0;
  double rel_err = 0.0;
  bool pass = false;
};

struct VerifyReport {
  double tolerance = 0.0;
  double rel_tolerance = 0.0;
  std::string preset;
  std::vector<VerifyCheck> checks;

  std::size_t passed() const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return c.pass; }));
  }
  std::size_t failed() const { return checks.size() - passed(); }
  bool ok() const { return failed() == 0; }
};

/// Relative tolerance paired with an absolute tolerance.
inline constexpr double kRelativeFactor = 100.0;

/// Passes iff |a - b| <= tol or |a - b| / max(|a|, |b|) <= 100 tol. Two
/// undefined values agree; one undefined value does not.
inline VerifyCheck compare(std::optional<double> closed, std::optional<double> oracle, double tol) {
  VerifyCheck c;
  c.closed_form = closed;
  c.oracle = oracle;
  if (!closed && !oracle) {
    c.pass = true;
    return c;
  }
  if (!closed || !oracle) {
    c.abs_err = c.rel_err = std::numeric_limits<double>::infinity();
    return c;
  }
  c.abs_err = std::abs(*closed - *oracle);
  const double scale = std::max(std::abs(*closed), std::abs(*oracle));
  c.rel_err = scale > 0.0 ? c.abs_err / scale : (c.abs_err == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  c.pass = c.abs_err <= tol || c.rel_err <= kRelativeFactor * tol;
  return c;
}

struct VerifyGrid {
  std::vector<ScenarioSpec> scenarios;
  std::vector<int> heralds;
  std::vector<double> points;  // lambda t / pi
};

inline VerifyGrid verify_grid(Preset preset) {
  if (preset == Preset::small) return {{Coherent{1.0}}, {1}, {0.1, 0.2, 0.3, 0.4, 0.5}};
  VerifyGrid g;
  g.scenarios = {Coherent{0.5}, Coherent{1.0}, Coherent{2.0}, Thermal{1.0}, Thermal{2.0},
                 SqueezedVacuum{0.5}, SqueezedVacuum{1.0}};
  g.heralds = {1, 2};
  for (int k = 1; k <= 20; ++k) g.points.push_back(k / 40.0);
  return g;
}

/// Every field of closed-form and oracle records side by side. The closed-form
/// distribution is taken to the oracle's mode-a cutoff so entries line up.
inline std::vector<VerifyCheck> compare_records(const ScenarioSpec& spec, const HeraldRecord& closed,
                                                const HeraldRecord& oracle, double tol) {
  std::vector<VerifyCheck> out;
  auto push = [&](const std::string& field, std::optional<double> a, std::optional<double> b) {
    auto c = compare(a, b, tol);
    c.scenario = scenario_name(spec);
    c.parameter = scenario_parameter(spec);
    c.herald_n = closed.herald_n;
    c.lambda_t_over_pi = closed.lambda_t_over_pi;
    c.field = field;
    out.push_back(std::move(c));
  };
  push("mean_photons", closed.mean, oracle.mean);
  push("mandel_q", closed.mandel_q, oracle.mandel_q);
  push("herald_prob", closed.herald_prob, oracle.herald_prob);
  const std::size_t len = std::max(closed.distribution.size(), oracle.distribution.size());
  for (std::size_t n = 0; n < len; ++n) {
    auto at = [n](const HeraldRecord& r) -> std::optional<double> {
      if (r.degenerate()) return std::nullopt;
      return n < r.distribution.size() ? r.distribution[n] : 0.0;
    };
    push("p_" + std::to_string(n), at(closed), at(oracle));
  }
  return out;
}

inline VerifyReport run_verify(double tolerance, Preset preset) {
  if (!(tolerance >= 0.0) || !std::isfinite(tolerance)) throw ConfigError("tol", "must be a finite number >= 0");
  const auto grid = verify_grid(preset);
  std::vector<std::shared_ptr<const OraclePipeline>> oracles(grid.scenarios.size());
  parallel_for(grid.scenarios.size(), [&](std::size_t i) {
    oracles[i] = std::make_shared<const OraclePipeline>(grid.scenarios[i]);
  });

  const std::size_t per_scenario = grid.points.size();
  std::vector<std::vector<VerifyCheck>> chunks(grid.scenarios.size() * per_scenario);
  parallel_for(chunks.size(), [&](std::size_t i) {
    const std::size_t si = i / per_scenario;
    const auto& spec = grid.scenarios[si];
    const auto& oracle = *oracles[si];
    const auto phase = CouplingPhase::from_pi_units(grid.points[i % per_scenario]);
    const auto oracle_rows = oracle.records(grid.heralds, phase);
    for (std::size_t h = 0; h < grid.heralds.size(); ++h) {
      const auto closed = closed_form_record(spec, grid.heralds[h], phase, oracle.config().n_max_a());
      auto checks = compare_records(spec, closed, oracle_rows[h], tolerance);
      chunks[i].insert(chunks[i].end(), std::make_move_iterator(checks.begin()),
                       std::make_move_iterator(checks.end()));
    }
  });

  VerifyReport report;
  report.tolerance = tolerance;
  report.rel_tolerance = kRelativeFactor * tolerance;
  report.preset = preset == Preset::small ? "small" : "full";
  for (auto& c : chunks) {
    report.checks.insert(report.checks.end(), std::make_move_iterator(c.begin()), std::make_move_iterator(c.end()));
  }
  return report;
}

inline nlohmann::ordered_json report_json(const VerifyReport& r) {
  // Infinite errors (one side undefined) serialize as null.
  auto err = [](double x) { return std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json(nullptr); };
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"scenario", c.scenario},
                      {"parameter", c.parameter},
                      {"herald_n", c.herald_n},
                      {"lambda_t_over_pi", c.lambda_t_over_pi},
                      {"field", c.field},
                      {"closed_form", optional_json(c.closed_form)},
                      {"oracle", optional_json(c.oracle)},
                      {"abs_err", err(c.abs_err)},
                      {"rel_err", err(c.rel_err)},
                      {"pass", c.pass}});
  }
  return {{"preset", r.preset},
          {"tolerance", r.tolerance},
          {"rel_tolerance", r.rel_tolerance},
          {"summary", {{"total", r.checks.size()}, {"passed", r.passed()}, {"failed", r.failed()}}},
          {"checks", std::move(checks)}};
}

}  // namespace heralded::cli
