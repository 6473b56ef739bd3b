// b92rate: finite-key rates for B92 over depolarizing channels.
//
//   b92rate sweep  --config configs/fig1.cfg [--key value ...]
//   b92rate single --q 0.064 --m 1e8 [--key value ...]
//   b92rate selftest

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "b92/finitekey.hpp"
#include "b92/selftest.hpp"
#include "b92/sweep.hpp"

namespace {

// One string option per config key; values are parsed by the config layer
// so that flags and files share validation and messages.
std::map<std::string, std::string>& add_overrides(CLI::App* cmd, std::map<std::string, std::string>& store) {
  for (const auto& key : b92::config_keys()) {
    cmd->add_option("--" + key, store[key], "override config key '" + key + "'");
  }
  return store;
}

void apply_overrides(b92::SweepConfig& cfg, CLI::App* cmd, const std::map<std::string, std::string>& store) {
  for (const auto& [key, value] : store) {
    if (cmd->count("--" + key) == 0) continue;
    try {
      b92::apply_setting(cfg, key, value);
    } catch (const b92::ConfigError& e) {
      throw b92::ConfigError(std::string("--") + key + ": " + e.what());
    }
  }
}

void print_channel(std::ostream& out, const b92::BlochChannel& ch) {
  char buf[160];
  out << "argmin channel (z, x, y):\n";
  for (int i = 0; i < 3; ++i) {
    std::snprintf(buf, sizeof buf, "  R[%d] = % .9f % .9f % .9f    t[%d] = % .9f\n", i, ch.R(i, 0), ch.R(i, 1),
                  ch.R(i, 2), i, ch.t(i));
    out << buf;
  }
}

int run_single(const b92::SweepConfig& cfg) {
  cfg.validate();
  b92::FiniteRateRequest req;
  req.channel = b92::depolarizing(cfg.q_grid.front(), cfg.convention);
  req.alpha = cfg.alpha;
  req.r_pub = cfg.r_pub;
  req.m = cfg.m_grid.front();
  req.sec = cfg.sec;
  req.mode = cfg.mode;
  req.seed = cfg.seed;
  req.opts = cfg.optimizer;
  req.normalize = cfg.normalize;
  const auto rep = b92::finite_rate(req);

  using b92::format_real;
  std::cout << "q                    " << format_real(cfg.q_grid.front()) << "\n"
            << "alpha                " << format_real(cfg.alpha) << "\n"
            << "r_pub                " << format_real(cfg.r_pub) << "\n"
            << "mode                 " << b92::to_string(rep.mode) << "\n"
            << "m                    " << rep.m << "\n"
            << "n                    " << rep.n << "\n"
            << "rate_per_n           " << format_real(rep.rate) << "\n"
            << "rate_per_m           " << format_real(rep.rate_per_m()) << "\n"
            << "min_SXEP             " << format_real(rep.min_eve_ambiguity) << "\n"
            << "min_SXEP_normalized  " << format_real(rep.min_eve_ambiguity_normalized) << "\n"
            << "sift_probability     " << format_real(rep.sift_probability) << "\n"
            << "leak_HXY             " << format_real(rep.leak) << "\n"
            << "delta_per_n          " << format_real(rep.delta_per_n) << "\n"
            << "kl_threshold         " << format_real(rep.kl_threshold) << "\n"
            << "feasible             " << (rep.feasible ? "true" : "false") << "\n";
  print_channel(std::cout, rep.argmin_channel);
  for (const auto& w : rep.warnings) std::cout << "warning: " << w << "\n";
  return 0;
}

int run_sweep_command(const b92::SweepConfig& cfg) {
  const auto rows = b92::run_sweep(cfg);
  if (cfg.output_path.empty()) {
    b92::write_csv(std::cout, rows);
  } else {
    std::ofstream csv(cfg.output_path, std::ios::binary);
    if (!csv) throw b92::ConfigError("cannot write '" + cfg.output_path + "'");
    b92::write_csv(csv, rows);
    for (auto mode : b92::plot_modes(cfg)) {
      const auto path = b92::plot_path(cfg.output_path, mode);
      std::ofstream dat(path, std::ios::binary);
      if (!dat) throw b92::ConfigError("cannot write '" + path + "'");
      b92::write_plot_data(dat, cfg, rows, mode);
    }
  }
  int failed = 0;
  for (const auto& r : rows) {
    if (r.failed) {
      ++failed;
      std::cerr << "point q=" << b92::format_real(r.q) << " m=" << r.m << " failed: " << r.warning << "\n";
    }
  }
  return failed == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-key rates for the B92 protocol"};
  app.require_subcommand(1);

  std::string sweep_config, single_config;
  std::map<std::string, std::string> sweep_flags, single_flags;

  auto* sweep = app.add_subcommand("sweep", "evaluate a (q, m) grid and write CSV and plot data");
  sweep->add_option("--config", sweep_config, "key = value configuration file")->check(CLI::ExistingFile);
  add_overrides(sweep, sweep_flags);

  auto* single = app.add_subcommand("single", "evaluate one point and print the full report");
  single->add_option("--config", single_config, "key = value configuration file")->check(CLI::ExistingFile);
  std::string q_flag, m_flag;
  single->add_option("--q", q_flag, "depolarizing rate (same as --q_grid with one value)");
  single->add_option("--m", m_flag, "number of transmitted qubits (same as --m_grid with one value)");
  add_overrides(single, single_flags);

  app.add_subcommand("selftest", "run fast invariant checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) {
      auto cfg = sweep_config.empty() ? b92::SweepConfig{} : b92::load_config(sweep_config);
      apply_overrides(cfg, sweep, sweep_flags);
      return run_sweep_command(cfg);
    }
    if (*single) {
      auto cfg = single_config.empty() ? b92::SweepConfig{} : b92::load_config(single_config);
      apply_overrides(cfg, single, single_flags);
      if (!q_flag.empty()) b92::apply_setting(cfg, "q_grid", q_flag);
      if (!m_flag.empty()) b92::apply_setting(cfg, "m_grid", m_flag);
      if (cfg.q_grid.size() != 1 || cfg.m_grid.size() != 1) {
        throw b92::ConfigError("single: q_grid and m_grid must hold exactly one value each");
      }
      return run_single(cfg);
    }
    return b92::run_selftest(std::cout) == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
