#ifndef B92_FINITEKEY_HPP
#define B92_FINITEKEY_HPP

// Finite-key rate per privacy-amplified bit:
//
//   rate = min_{channels in region} S(X|EP) / Pr(sift) - H(X'|Y') - Delta/n
//
// with Delta/n = 7 sqrt(log2(2/eps_bar) / n) + (2/n) log2(1/eps_pa).

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "b92/b92core.hpp"
#include "b92/channel.hpp"
#include "b92/errors.hpp"
#include "b92/estimation.hpp"
#include "b92/optimize.hpp"

namespace b92 {

struct SecurityParams {
  double eps_pe = 1e-5;
  double eps_bar = 1e-5;
  double eps_pa = 1e-5;

  void validate() const {
    const auto in_unit = [](double e) { return e > 0.0 && e < 1.0; };
    if (!in_unit(eps_pe) || !in_unit(eps_bar) || !in_unit(eps_pa)) {
      throw DomainError("security parameters eps_pe, eps_bar, eps_pa must lie in (0, 1)");
    }
  }
};

struct RateReport {
  double rate = 0.0;  // bits per privacy-amplified bit
  double min_eve_ambiguity = 0.0;
  double min_eve_ambiguity_normalized = 0.0;
  double sift_probability = 0.0;  // at the minimizing channel
  double leak = 0.0;              // H(X'|Y') from the empirical sift statistics
  double delta_per_n = 0.0;
  double kl_threshold = 0.0;
  std::int64_t n = 0;
  std::int64_t m = 0;
  BlochChannel argmin_channel;
  bool feasible = false;
  StatisticsMode mode = StatisticsMode::kExpected;
  std::vector<std::string> warnings;

  // Same key length spread over every transmitted qubit.
  double rate_per_m() const { return rate * static_cast<double>(n) / static_cast<double>(m); }
};

// Number of kept-secret conclusive clicks (outcome 8). For sampled
// statistics this is the multinomial count itself.
inline std::int64_t privacy_block_size(const OutcomeDistribution& lam, std::int64_t m) {
  if (m < 1) throw DomainError("privacy_block_size: m must be at least 1");
  const auto n = static_cast<std::int64_t>(std::llround(static_cast<double>(m) * lam.probs[kSecretOutcome]));
  if (n <= 0) throw DegenerateError("privacy amplification block is empty (n = 0)");
  return n;
}

inline double delta_correction(std::int64_t n, const SecurityParams& sec) {
  if (n < 1) throw DomainError("delta_correction: n must be at least 1");
  sec.validate();
  const double nd = static_cast<double>(n);
  return 7.0 * std::sqrt(std::log2(2.0 / sec.eps_bar) / nd) + 2.0 / nd * std::log2(1.0 / sec.eps_pa);
}

// H(X'|Y') from the disclosed conclusive clicks of the empirical statistics
// (outcomes 0, 1, 4, 5).
inline double empirical_leak(const OutcomeDistribution& lambda_m) {
  const auto& p = lambda_m.probs;
  const std::array<double, 4> joint{p[0], p[1], p[4], p[5]};
  if (!(joint[0] + joint[1] + joint[2] + joint[3] > 0.0)) {
    throw DegenerateError("no disclosed conclusive clicks: H(X'|Y') is undefined");
  }
  return conditional_entropy_xy(joint);
}

struct FiniteRateRequest {
  BlochChannel channel;
  double alpha = 0.39;
  double r_pub = 0.5;
  std::int64_t m = 100'000'000;
  SecurityParams sec;
  StatisticsMode mode = StatisticsMode::kExpected;
  std::uint64_t seed = 0;
  OptimizerOptions opts;
  // Divide min S(X|EP) by the sift probability at the minimizer; false
  // gives the unnormalized reading of the rate formula.
  bool normalize = true;
};

inline RateReport finite_rate(const FiniteRateRequest& req) {
  const B92Params params(req.alpha, req.r_pub);
  req.sec.validate();
  if (req.m < 1) throw DomainError("finite_rate: m must be at least 1");

  const DensityMatrix rho1 = joint_state(req.channel, req.alpha);
  const auto lam_inf = theoretical_distribution(rho1, req.alpha, req.r_pub);
  const auto lam_m = empirical_distribution(lam_inf, req.m, req.mode, req.seed);
  const auto region = make_region(lam_m, req.sec.eps_pe, req.alpha, req.r_pub);
  const std::int64_t n = privacy_block_size(lam_m, req.m);

  std::vector<BlochChannel> probes;
  if (req.mode == StatisticsMode::kExpected) probes.push_back(req.channel);
  probes.push_back(BlochChannel::identity());
  const auto opt = min_eve_ambiguity(region, req.opts, probes);

  RateReport rep;
  rep.m = req.m;
  rep.mode = req.mode;
  rep.kl_threshold = region.kl_threshold;
  rep.argmin_channel = opt.argmin_channel;
  rep.feasible = opt.feasible;
  rep.min_eve_ambiguity = opt.min_value;
  rep.sift_probability = sift_probability(joint_state(opt.argmin_channel, req.alpha), req.alpha);
  if (!(rep.sift_probability > 0.0)) throw DegenerateError("sift probability at the minimizer is zero");
  rep.min_eve_ambiguity_normalized = req.normalize ? opt.min_value / rep.sift_probability : opt.min_value;
  rep.leak = empirical_leak(lam_m);
  rep.n = n;
  rep.delta_per_n = delta_correction(rep.n, req.sec);
  rep.rate = rep.min_eve_ambiguity_normalized - rep.leak - rep.delta_per_n;
  if (rep.rate < 0.0) rep.warnings.emplace_back("no secure key: rate is negative");
  return rep;
}

inline RateReport finite_rate_depolarizing(double q, FiniteRateRequest req,
                                           DepolarizingConvention convention = DepolarizingConvention::kBloch4q3) {
  req.channel = depolarizing(q, convention);
  return finite_rate(req);
}

struct AsymptoticReport {
  double rate = 0.0;
  double min_eve_ambiguity = 0.0;
  double sift_probability = 0.0;
  double leak = 0.0;
  BlochChannel argmin_channel;
};

// Infinite-statistics key rate: the minimum of S(X|EP)/Pr(sift) - H(X'|Y')
// over all CP channels that reproduce the nine-outcome distribution of
// `ch`. Pr(sift) and H(X'|Y') are constant on that set.
inline AsymptoticReport asymptotic_key_rate(const BlochChannel& ch, double alpha, double r_pub,
                                            const OptimizerOptions& opts = {}) {
  const DensityMatrix rho1 = joint_state(ch, alpha);
  AsymptoticReport rep;
  rep.sift_probability = sift_probability(rho1, alpha);
  if (!(rep.sift_probability > 0.0)) throw DegenerateError("asymptotic_key_rate: sift probability is zero");
  rep.leak = reconciliation_entropy(rho1, alpha);
  const auto opt = min_eve_ambiguity_consistent(ch, alpha, r_pub, opts);
  rep.min_eve_ambiguity = opt.min_value;
  rep.argmin_channel = opt.argmin_channel;
  rep.rate = opt.min_value / rep.sift_probability - rep.leak;
  return rep;
}

}  // namespace b92

#endif  // B92_FINITEKEY_HPP
