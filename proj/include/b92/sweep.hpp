#ifndef B92_SWEEP_HPP
#define B92_SWEEP_HPP

// Parameter sweeps over (q, m): configuration files, CSV rows and
// two-column plot data.
//
// Config files are UTF-8 `key = value` lines; `#` starts a comment. Grids
// accept comma-separated lists and `start:stop:step` ranges, e.g.
//
//   q_grid = 0.00:0.07:0.005
//   m_grid = 1e5, 1e6, 1e7

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "b92/errors.hpp"
#include "b92/finitekey.hpp"

namespace b92 {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PlotMode { kAuto, kDepolarizing, kSampleSize, kNone };

struct SweepConfig {
  double alpha = 0.39;
  double r_pub = 0.5;
  std::vector<double> q_grid{0.05};
  std::vector<std::int64_t> m_grid{100'000'000};
  SecurityParams sec;
  StatisticsMode mode = StatisticsMode::kExpected;
  std::uint64_t seed = 1;
  DepolarizingConvention convention = DepolarizingConvention::kBloch4q3;
  OptimizerOptions optimizer;
  bool normalize = true;
  std::string output_path;  // empty: CSV to the caller's stream only
  PlotMode plot = PlotMode::kAuto;
  unsigned workers = 0;  // 0: hardware concurrency

  void validate() const {
    B92Params(alpha, r_pub);
    sec.validate();
    optimizer.validate();
    if (q_grid.empty() || m_grid.empty()) throw ConfigError("q_grid and m_grid must be nonempty");
    for (double q : q_grid) {
      if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("q_grid entries must lie in [0, 1]");
    }
    for (auto m : m_grid) {
      if (m < 1) throw ConfigError("m_grid entries must be positive integers");
    }
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_real(const std::string& text) {
  const std::string s = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("'" + s + "' is not a number");
  }
  if (used != s.size()) throw ConfigError("'" + s + "' is not a number");
  return v;
}

inline std::int64_t parse_count(const std::string& text) {
  const double v = parse_real(text);
  if (!(v >= 1.0) || v > 9.0e18 || std::floor(v) != v) {
    throw ConfigError("'" + trim(text) + "' is not a positive integer");
  }
  return static_cast<std::int64_t>(v);
}

inline bool parse_bool(const std::string& text) {
  const std::string s = trim(text);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("'" + s + "' is not a boolean");
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
  return parts;
}

// "a, b, c" or "start:stop:step" (inclusive of stop up to rounding).
inline std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    if (item.empty()) throw ConfigError("empty list entry");
    const auto range = split(item, ':');
    if (range.size() == 1) {
      out.push_back(parse_real(item));
    } else if (range.size() == 3) {
      const double start = parse_real(range[0]), stop = parse_real(range[1]), step = parse_real(range[2]);
      if (!(step > 0.0) || stop < start) throw ConfigError("range '" + item + "' needs step > 0 and stop >= start");
      const auto count = static_cast<std::int64_t>(std::floor((stop - start) / step + 1e-9));
      for (std::int64_t i = 0; i <= count; ++i) {
        // Round to 12 decimals so that 0.1 + 0.2 style drift never shows up
        // in the CSV.
        out.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
      }
    } else {
      throw ConfigError("malformed range '" + item + "' (expected start:stop:step)");
    }
  }
  return out;
}

inline PlotMode parse_plot_mode(const std::string& s) {
  if (s == "auto") return PlotMode::kAuto;
  if (s == "q") return PlotMode::kDepolarizing;
  if (s == "m") return PlotMode::kSampleSize;
  if (s == "none") return PlotMode::kNone;
  throw ConfigError("unknown plot mode '" + s + "' (expected auto, q, m or none)");
}

}  // namespace detail

inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "alpha",          "r_pub",          "q_grid",          "m_grid",       "eps_pe",
      "eps_bar",        "eps_pa",         "mode",            "seed",         "depolarizing_convention",
      "max_iterations", "restarts",       "penalty_schedule", "step_scale",  "convergence_tol",
      "optimizer_seed", "full_parameter_space", "normalize", "output",       "plot",
      "workers"};
  return keys;
}

// Applies one key = value assignment; throws ConfigError on unknown keys or
// malformed values.
inline void apply_setting(SweepConfig& cfg, const std::string& key, const std::string& raw) {
  using namespace detail;
  const std::string value = trim(raw);
  try {
    if (key == "alpha") {
      cfg.alpha = parse_real(value);
    } else if (key == "r_pub") {
      cfg.r_pub = parse_real(value);
    } else if (key == "q_grid") {
      cfg.q_grid = parse_real_list(value);
    } else if (key == "m_grid") {
      cfg.m_grid.clear();
      for (double v : parse_real_list(value)) cfg.m_grid.push_back(parse_count(std::to_string(v)));
    } else if (key == "eps_pe") {
      cfg.sec.eps_pe = parse_real(value);
    } else if (key == "eps_bar") {
      cfg.sec.eps_bar = parse_real(value);
    } else if (key == "eps_pa") {
      cfg.sec.eps_pa = parse_real(value);
    } else if (key == "mode") {
      cfg.mode = parse_statistics_mode(value);
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
    } else if (key == "depolarizing_convention") {
      cfg.convention = parse_depolarizing_convention(value);
    } else if (key == "max_iterations") {
      cfg.optimizer.max_iterations = static_cast<int>(parse_count(value));
    } else if (key == "restarts") {
      cfg.optimizer.restarts = static_cast<int>(parse_count(value));
    } else if (key == "penalty_schedule") {
      cfg.optimizer.penalty_schedule = parse_real_list(value);
    } else if (key == "step_scale") {
      cfg.optimizer.step_scale = parse_real(value);
    } else if (key == "convergence_tol") {
      cfg.optimizer.convergence_tol = parse_real(value);
    } else if (key == "optimizer_seed") {
      cfg.optimizer.seed = static_cast<std::uint64_t>(std::stoull(value));
    } else if (key == "full_parameter_space") {
      cfg.optimizer.full_parameter_space = parse_bool(value);
    } else if (key == "normalize") {
      cfg.normalize = parse_bool(value);
    } else if (key == "output") {
      cfg.output_path = value;
    } else if (key == "plot") {
      cfg.plot = parse_plot_mode(value);
    } else if (key == "workers") {
      cfg.workers = static_cast<unsigned>(std::stoul(value));
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("bad value for '" + key + "': " + e.what());
  }
}

inline SweepConfig parse_config(std::istream& in, const std::string& source = "config") {
  SweepConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    try {
      apply_setting(cfg, detail::trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

inline SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

struct SweepRow {
  double q = 0.0;
  std::int64_t m = 0;
  std::int64_t n = 0;
  double rate_per_n = std::numeric_limits<double>::quiet_NaN();
  double rate_per_m = std::numeric_limits<double>::quiet_NaN();
  double asymptotic_rate = std::numeric_limits<double>::quiet_NaN();
  double min_sxep_normalized = std::numeric_limits<double>::quiet_NaN();
  double leak = std::numeric_limits<double>::quiet_NaN();
  double delta_per_n = std::numeric_limits<double>::quiet_NaN();
  double kl_threshold = std::numeric_limits<double>::quiet_NaN();
  bool feasible = false;
  std::uint64_t seed = 0;
  std::string warning;
  bool failed = false;
};

inline const char* csv_header() {
  return "q,m,n,rate_per_n,rate_per_m,asymptotic_rate,min_SXEP_normalized,leak_HXY,delta_per_n,kl_threshold,"
         "feasible,seed,warning";
}

// Nine significant digits, "nan" for missing values.
inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << csv_header() << "\n";
  for (const auto& r : rows) {
    out << format_real(r.q) << ',' << r.m << ',' << r.n << ',' << format_real(r.rate_per_n) << ','
        << format_real(r.rate_per_m) << ',' << format_real(r.asymptotic_rate) << ','
        << format_real(r.min_sxep_normalized) << ',' << format_real(r.leak) << ',' << format_real(r.delta_per_n)
        << ',' << format_real(r.kl_threshold) << ',' << (r.feasible ? "true" : "false") << ',' << r.seed << ','
        << csv_quote(r.warning) << "\n";
  }
}

// Evaluates one grid point; errors are recorded in the row, never thrown.
inline SweepRow evaluate_point(const SweepConfig& cfg, double q, std::int64_t m, std::uint64_t seed,
                               double asymptotic) {
  SweepRow row;
  row.q = q;
  row.m = m;
  row.seed = seed;
  row.asymptotic_rate = asymptotic;
  try {
    FiniteRateRequest req;
    req.channel = depolarizing(q, cfg.convention);
    req.alpha = cfg.alpha;
    req.r_pub = cfg.r_pub;
    req.m = m;
    req.sec = cfg.sec;
    req.mode = cfg.mode;
    req.seed = seed;
    req.opts = cfg.optimizer;
    req.normalize = cfg.normalize;
    const RateReport rep = finite_rate(req);
    row.n = rep.n;
    row.rate_per_n = rep.rate;
    row.rate_per_m = rep.rate_per_m();
    row.min_sxep_normalized = rep.min_eve_ambiguity_normalized;
    row.leak = rep.leak;
    row.delta_per_n = rep.delta_per_n;
    row.kl_threshold = rep.kl_threshold;
    row.feasible = rep.feasible;
    std::string joined;
    for (const auto& w : rep.warnings) joined += (joined.empty() ? "" : "; ") + w;
    row.warning = joined;
  } catch (const std::exception& e) {
    row.failed = true;
    row.warning = std::string("error: ") + e.what();
  }
  return row;
}

// Rows come back in grid order (q outer, m inner) regardless of which worker
// finished first. Point i uses seed ^ i.
inline std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const std::size_t nq = cfg.q_grid.size(), nm = cfg.m_grid.size();

  std::vector<double> asymptotic(nq, std::numeric_limits<double>::quiet_NaN());
  std::vector<SweepRow> rows(nq * nm);
  const std::size_t jobs = nq + nq * nm;

  unsigned workers = cfg.workers != 0 ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, jobs));

  // Asymptotic rates first (one per q), then the grid points.
  std::atomic<std::size_t> next{0};
  const auto work_asymptotic = [&] {
    for (std::size_t j; (j = next.fetch_add(1)) < nq;) {
      try {
        asymptotic[j] =
            asymptotic_key_rate(depolarizing(cfg.q_grid[j], cfg.convention), cfg.alpha, cfg.r_pub, cfg.optimizer)
                .rate;
      } catch (const std::exception&) {
        // Left as NaN; the finite-rate row reports its own error if any.
      }
    }
  };
  const auto work_points = [&] {
    for (std::size_t j; (j = next.fetch_add(1)) < nq * nm;) {
      const std::size_t iq = j / nm, im = j % nm;
      rows[j] = evaluate_point(cfg, cfg.q_grid[iq], cfg.m_grid[im], cfg.seed ^ static_cast<std::uint64_t>(j),
                               asymptotic[iq]);
    }
  };
  const auto run_pool = [&](const auto& body) {
    next = 0;
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();
  };
  run_pool(work_asymptotic);
  run_pool(work_points);
  return rows;
}

// Two-column (x, rate_per_n) blocks separated by blank lines. Depolarizing
// mode plots x = q with one block per m; sample-size mode plots
// x = log10(m) with one block per q.
inline void write_plot_data(std::ostream& out, const SweepConfig& cfg, const std::vector<SweepRow>& rows,
                            PlotMode mode) {
  const std::size_t nq = cfg.q_grid.size(), nm = cfg.m_grid.size();
  const bool by_q = mode == PlotMode::kDepolarizing;
  out << "# x = " << (by_q ? "q" : "log10(m)") << ", y = rate_per_n\n";
  const std::size_t outer = by_q ? nm : nq, inner = by_q ? nq : nm;
  for (std::size_t o = 0; o < outer; ++o) {
    if (o > 0) out << "\n";
    if (by_q) {
      out << "# m = " << cfg.m_grid[o] << "\n";
    } else {
      out << "# q = " << format_real(cfg.q_grid[o]) << "\n";
    }
    for (std::size_t i = 0; i < inner; ++i) {
      const SweepRow& r = by_q ? rows[i * nm + o] : rows[o * nm + i];
      const double x = by_q ? r.q : std::log10(static_cast<double>(r.m));
      out << format_real(x) << ' ' << format_real(r.rate_per_n) << "\n";
    }
  }
}

inline std::vector<PlotMode> plot_modes(const SweepConfig& cfg) {
  switch (cfg.plot) {
    case PlotMode::kNone:
      return {};
    case PlotMode::kDepolarizing:
    case PlotMode::kSampleSize:
      return {cfg.plot};
    case PlotMode::kAuto:
      break;
  }
  const bool many_q = cfg.q_grid.size() > 1, many_m = cfg.m_grid.size() > 1;
  if (many_q && many_m) return {PlotMode::kDepolarizing, PlotMode::kSampleSize};
  if (many_m) return {PlotMode::kSampleSize};
  return {PlotMode::kDepolarizing};
}

inline std::string plot_path(const std::string& csv_path, PlotMode mode) {
  std::string base = csv_path;
  if (base.size() > 4 && base.substr(base.size() - 4) == ".csv") base.resize(base.size() - 4);
  return base + (mode == PlotMode::kDepolarizing ? ".fig1.dat" : ".fig2.dat");
}

}  // namespace b92

#endif  // B92_SWEEP_HPP
