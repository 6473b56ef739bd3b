#ifndef B92_SELFTEST_HPP
#define B92_SELFTEST_HPP

// Fast invariant checks run by `b92rate selftest`; each takes well under a
// second.

#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "b92/b92core.hpp"
#include "b92/channel.hpp"
#include "b92/estimation.hpp"
#include "b92/qmath.hpp"

namespace b92 {

struct SelfTestCase {
  std::string name;
  std::function<bool()> check;
};

inline std::vector<SelfTestCase> selftest_cases() {
  constexpr double alpha = 0.39, r_pub = 0.5;
  return {
      {"sift POVM sums to identity",
       [] {
         const auto f = sift_povm(alpha);
         return max_abs(f.f0 + f.f1 + f.f0bar + f.f1bar - pauli::identity()) < 1e-12;
       }},
      {"estimation POVM sums to identity",
       [] {
         const auto e = estimation_povm(alpha, r_pub);
         ComplexMatrix sum = ComplexMatrix::Zero(4, 4);
         for (const auto& x : e) sum += x;
         return max_abs(sum - ComplexMatrix::Identity(4, 4)) < 1e-12;
       }},
      {"depolarizing channels are CP on [0, 1]",
       [] {
         for (int i = 0; i <= 20; ++i) {
           for (auto conv : {DepolarizingConvention::kBloch4q3, DepolarizingConvention::kKraus1q}) {
             if (min_choi_eigenvalue(depolarizing(i / 20.0, conv)) < -1e-12) return false;
           }
         }
         return true;
       }},
      {"noiseless channel gives rate 1",
       [] { return std::abs(asymptotic_rate(BlochChannel::identity(), alpha) - 1.0) < 1e-9; }},
      {"noiseless S(X|EP) equals 2 alpha^2 beta^2",
       [] {
         const double b2 = 1.0 - alpha * alpha;
         const auto rho1 = joint_state(BlochChannel::identity(), alpha);
         return std::abs(eve_ambiguity(rho1, alpha) - 2.0 * alpha * alpha * b2) < 1e-9;
       }},
      {"selection map preserves trace",
       [] {
         std::mt19937_64 rng(7);
         std::uniform_real_distribution<double> u(0.0, 1.0);
         for (int i = 0; i < 10; ++i) {
           const auto ch = mix(BlochChannel::identity(), depolarizing(u(rng)), u(rng));
           const auto rho1 = joint_state(ch, alpha);
           const auto rho_abe = purify(rho1).density({{"A", 2}, {"B", 2}, {"E", 4}});
           const double tr = selection_map(rho_abe, alpha).matrix().trace().real();
           if (std::abs(tr - 1.0) > 1e-10) return false;
         }
         return true;
       }},
      {"KL divergence vanishes on equal distributions",
       [] {
         const auto lam = theoretical_distribution(joint_state(depolarizing(0.05), alpha), alpha, r_pub);
         return kl_divergence(lam, lam) == 0.0;
       }},
      {"true channel lies in its expected-statistics region",
       [] {
         const auto ch = depolarizing(0.05);
         const auto lam = theoretical_distribution(joint_state(ch, alpha), alpha, r_pub);
         const auto region = make_region(empirical_distribution(lam, 100'000, StatisticsMode::kExpected), 1e-5,
                                         alpha, r_pub);
         return region_contains(region, ch);
       }},
  };
}

// Prints one PASS/FAIL line per case; returns the number of failures.
inline int run_selftest(std::ostream& out) {
  int failures = 0;
  for (const auto& c : selftest_cases()) {
    bool ok = false;
    std::string detail;
    try {
      ok = c.check();
    } catch (const std::exception& e) {
      detail = std::string(" (") + e.what() + ")";
    }
    out << (ok ? "PASS " : "FAIL ") << c.name << detail << "\n";
    if (!ok) ++failures;
  }
  return failures;
}

}  // namespace b92

#endif  // B92_SELFTEST_HPP
