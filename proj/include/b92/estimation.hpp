#ifndef B92_ESTIMATION_HPP
#define B92_ESTIMATION_HPP

// Nine-outcome channel-estimation statistics and the KL-divergence
// confidence region over Bloch channels.
//
// Outcomes 0-7 are (Alice's bit a, Bob's click k) with
// index 4a + {F0, F1, F0bar, F1bar}; the conclusive clicks are disclosed
// with probability r_pub. Outcome 8 is a conclusive click kept secret.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <sstream>

#include "b92/b92core.hpp"
#include "b92/channel.hpp"
#include "b92/errors.hpp"
#include "b92/qmath.hpp"

namespace b92 {

inline constexpr int kOutcomes = 9;
inline constexpr int kSecretOutcome = 8;

using EstimationPovm = std::array<ComplexMatrix, kOutcomes>;

inline EstimationPovm estimation_povm(double alpha, double r_pub) {
  const B92Params params(alpha, r_pub);
  const auto f = sift_povm(alpha);
  ComplexMatrix a0 = ComplexMatrix::Zero(2, 2), a1 = ComplexMatrix::Zero(2, 2);
  a0(0, 0) = 1.0;
  a1(1, 1) = 1.0;
  EstimationPovm e;
  e[0] = r_pub * tensor(a0, f.f0);
  e[1] = r_pub * tensor(a0, f.f1);
  e[2] = tensor(a0, f.f0bar);
  e[3] = tensor(a0, f.f1bar);
  e[4] = r_pub * tensor(a1, f.f0);
  e[5] = r_pub * tensor(a1, f.f1);
  e[6] = tensor(a1, f.f0bar);
  e[7] = tensor(a1, f.f1bar);
  e[8] = (1.0 - r_pub) * tensor(pauli::identity(), f.sifted());
  return e;
}

enum class StatisticsMode { kExpected, kSampled };

inline std::string to_string(StatisticsMode m) {
  return m == StatisticsMode::kExpected ? "expected" : "sampled";
}

inline StatisticsMode parse_statistics_mode(const std::string& s) {
  if (s == "expected") return StatisticsMode::kExpected;
  if (s == "sampled") return StatisticsMode::kSampled;
  throw DomainError("unknown statistics mode '" + s + "' (expected 'expected' or 'sampled')");
}

struct OutcomeDistribution {
  std::array<double, kOutcomes> probs{};
  // Number of transmitted qubits behind an empirical distribution; empty
  // for the theoretical distribution.
  std::optional<std::int64_t> sample_count;
  StatisticsMode mode = StatisticsMode::kExpected;

  bool is_theoretical() const { return !sample_count.has_value(); }
};

// Tr[rho E_i] for an arbitrary (possibly non-physical) operator.
inline std::array<double, kOutcomes> outcome_probabilities_raw(const ComplexMatrix& rho1,
                                                                const EstimationPovm& povm) {
  std::array<double, kOutcomes> p{};
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = (rho1 * povm[i]).trace().real();
  return p;
}

inline OutcomeDistribution theoretical_distribution(const DensityMatrix& rho1, double alpha, double r_pub) {
  check_ab(rho1);
  auto p = outcome_probabilities_raw(rho1.matrix(), estimation_povm(alpha, r_pub));
  bool clamped = false;
  for (double& x : p) {
    if (x < -1e-10) {
      std::ostringstream msg;
      msg << "theoretical_distribution: negative outcome probability " << x;
      throw NotAStateError(msg.str());
    }
    if (x < 0.0) {
      x = 0.0;
      clamped = true;
    }
  }
  if (clamped) {
    double total = 0.0;
    for (double x : p) total += x;
    for (double& x : p) x /= total;
  }
  return {p, std::nullopt, StatisticsMode::kExpected};
}

// Expected mode returns lambda_inf itself tagged with m; sampled mode draws
// a multinomial of m trials from a generator seeded with `seed`.
inline OutcomeDistribution empirical_distribution(const OutcomeDistribution& lam_inf, std::int64_t m,
                                                  StatisticsMode mode, std::uint64_t seed = 0) {
  if (m <= 0) throw DomainError("empirical_distribution: m must be positive");
  OutcomeDistribution out{lam_inf.probs, m, mode};
  if (mode == StatisticsMode::kExpected) return out;

  std::mt19937_64 rng(seed);
  std::int64_t remaining = m;
  double mass_left = 1.0;
  for (int i = 0; i < kOutcomes; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    std::int64_t count = 0;
    if (i == kOutcomes - 1) {
      count = remaining;
    } else if (remaining > 0 && mass_left > 0.0) {
      const double p = std::clamp(lam_inf.probs[idx] / mass_left, 0.0, 1.0);
      std::binomial_distribution<std::int64_t> draw(remaining, p);
      count = draw(rng);
    }
    out.probs[idx] = static_cast<double>(count) / static_cast<double>(m);
    remaining -= count;
    mass_left -= lam_inf.probs[idx];
  }
  return out;
}

// D(p||q) in bits; +infinity when p puts mass where q has none.
inline double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw DomainError("kl_divergence: size mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    d += p[i] * std::log2(p[i] / q[i]);
  }
  return std::max(0.0, d);
}

inline double kl_divergence(const OutcomeDistribution& p, const OutcomeDistribution& q) {
  return kl_divergence(std::span<const double>(p.probs), std::span<const double>(q.probs));
}

// Radius t with (m + 1)^9 2^(-m t) = eps_pe, the type-class bound on
// P[D(lambda_m || lambda_inf) > t] for nine outcomes.
inline double kl_threshold(std::int64_t m, double eps_pe) {
  if (m < 1) throw DomainError("kl_threshold: m must be at least 1");
  if (!(eps_pe > 0.0 && eps_pe < 1.0)) throw DomainError("kl_threshold: eps_pe must lie in (0, 1)");
  const double md = static_cast<double>(m);
  return (kOutcomes * std::log2(md + 1.0) + std::log2(1.0 / eps_pe)) / md;
}

struct ConfidenceRegion {
  OutcomeDistribution lambda_m;
  double kl_threshold = 0.0;
  double cp_tol = kDefaultCpTol;
  double alpha = 0.39;
  double r_pub = 0.5;
};

inline ConfidenceRegion make_region(const OutcomeDistribution& lambda_m, double eps_pe, double alpha,
                                    double r_pub, double cp_tol = kDefaultCpTol) {
  if (!lambda_m.sample_count) throw DomainError("make_region: lambda_m must be an empirical distribution");
  const B92Params params(alpha, r_pub);
  return {lambda_m, kl_threshold(*lambda_m.sample_count, eps_pe), cp_tol, alpha, r_pub};
}

// D(lambda_m || lambda_inf(ch)) for a CP channel.
inline double region_divergence(const ConfidenceRegion& region, const BlochChannel& ch) {
  const DensityMatrix rho1(joint_state_raw(ch, region.alpha), ab_factors(), DensityMatrix::Trusted{});
  const auto lam = theoretical_distribution(rho1, region.alpha, region.r_pub);
  return kl_divergence(region.lambda_m, lam);
}

inline bool region_contains(const ConfidenceRegion& region, const BlochChannel& ch) {
  if (!is_cp(ch, region.cp_tol)) return false;
  return region_divergence(region, ch) <= region.kl_threshold;
}

}  // namespace b92

#endif  // B92_ESTIMATION_HPP
