#include <gtest/gtest.h>

#include <cmath>

#include "b92/finitekey.hpp"
#include "support.hpp"

namespace {

using namespace b92;
using b92::testing::expected_statistics;

constexpr double kAlpha = 0.39;
const double kSiftNoiseless = 2.0 * kAlpha * kAlpha * (1.0 - kAlpha * kAlpha);

FiniteRateRequest request(double q, std::int64_t m) {
  FiniteRateRequest req;
  req.channel = depolarizing(q);
  req.m = m;
  return req;
}

TEST(Security, Validation) {
  SecurityParams sec;
  EXPECT_NO_THROW(sec.validate());
  sec.eps_pa = 0.0;
  EXPECT_THROW(sec.validate(), DomainError);
  sec = {};
  sec.eps_bar = 1.0;
  EXPECT_THROW(sec.validate(), DomainError);
}

TEST(Delta, Examples) {
  const SecurityParams sec;
  const double expected = 7.0 * std::sqrt(std::log2(2e5) / 1e6) + 2.0 / 1e6 * std::log2(1e5);
  EXPECT_NEAR(delta_correction(1'000'000, sec), expected, 1e-15);
  EXPECT_NEAR(delta_correction(1'000'000, sec), 0.0294079, 1e-7);
  EXPECT_LT(delta_correction(1'000'000'000, sec), 1e-3);
  for (std::int64_t n = 1; n < 1'000'000'000; n *= 7) {
    EXPECT_GT(delta_correction(n, sec), delta_correction(2 * n, sec));
  }
  EXPECT_THROW(delta_correction(0, sec), DomainError);
}

TEST(BlockSize, NoiselessClosedForm) {
  const auto lam = expected_statistics(BlochChannel::identity(), 100'000'000);
  const auto n = privacy_block_size(lam, 100'000'000);
  EXPECT_EQ(n, std::llround(1e8 * 0.5 * kSiftNoiseless));
  EXPECT_EQ(n, 12'896'559);
}

TEST(BlockSize, EmptyBlockIsDegenerate) {
  OutcomeDistribution lam;
  lam.probs[0] = 1.0;
  EXPECT_THROW(privacy_block_size(lam, 1), DegenerateError);
  EXPECT_THROW(privacy_block_size(lam, 0), DomainError);
}

TEST(BlockSize, SampledModeUsesTheCount) {
  const auto lam_inf = theoretical_distribution(joint_state(depolarizing(0.05), kAlpha), kAlpha, 0.5);
  const std::int64_t m = 100'003;
  const auto lam = empirical_distribution(lam_inf, m, StatisticsMode::kSampled, 17);
  const double count = lam.probs[kSecretOutcome] * static_cast<double>(m);
  EXPECT_EQ(privacy_block_size(lam, m), std::llround(count));
  EXPECT_NEAR(count, std::round(count), 1e-6);
}

TEST(Leak, NoiselessIsZeroAndMatchesReconciliationEntropy) {
  EXPECT_NEAR(empirical_leak(expected_statistics(BlochChannel::identity(), 1000)), 0.0, 1e-12);
  const auto ch = depolarizing(0.05);
  EXPECT_NEAR(empirical_leak(expected_statistics(ch, 1000)), reconciliation_entropy(joint_state(ch, kAlpha), kAlpha),
              1e-12);
}

TEST(FiniteRate, NoiselessIsBelowOne) {
  const auto rep = finite_rate(request(0.0, 100'000'000));
  EXPECT_LT(rep.rate, 1.0 - rep.delta_per_n);
  EXPECT_GT(rep.rate, 0.9);
  EXPECT_TRUE(rep.feasible);
  EXPECT_TRUE(rep.warnings.empty());
  EXPECT_EQ(rep.rate, rep.min_eve_ambiguity_normalized - rep.leak - rep.delta_per_n);
  EXPECT_EQ(rep.n, 12'896'559);
}

TEST(FiniteRate, HighNoiseIsNegativeWithWarning) {
  const auto rep = finite_rate(request(0.2, 100'000'000));
  EXPECT_LT(rep.rate, 0.0);
  ASSERT_EQ(rep.warnings.size(), 1u);
  EXPECT_NE(rep.warnings[0].find("no secure key"), std::string::npos);
  EXPECT_EQ(rep.rate, rep.min_eve_ambiguity_normalized - rep.leak - rep.delta_per_n);
}

TEST(FiniteRate, ReportFieldsAreConsistent) {
  const auto rep = finite_rate(request(0.05, 1'000'000));
  EXPECT_EQ(rep.m, 1'000'000);
  EXPECT_EQ(rep.kl_threshold, kl_threshold(1'000'000, 1e-5));
  EXPECT_EQ(rep.delta_per_n, delta_correction(rep.n, {}));
  EXPECT_NEAR(rep.min_eve_ambiguity_normalized, rep.min_eve_ambiguity / rep.sift_probability, 1e-15);
  EXPECT_NEAR(rep.rate_per_m(), rep.rate * static_cast<double>(rep.n) / 1e6, 1e-15);
  EXPECT_NEAR(rep.sift_probability, sift_probability(joint_state(rep.argmin_channel, kAlpha), kAlpha), 1e-15);

  auto raw = request(0.05, 1'000'000);
  raw.normalize = false;
  const auto unnorm = finite_rate(raw);
  EXPECT_EQ(unnorm.min_eve_ambiguity_normalized, unnorm.min_eve_ambiguity);
  EXPECT_LT(unnorm.rate, rep.rate);
}

TEST(FiniteRate, SampledModeIsSeedDeterministic) {
  auto req = request(0.03, 1'000'000);
  req.mode = StatisticsMode::kSampled;
  req.seed = 99;
  const auto a = finite_rate(req);
  const auto b = finite_rate(req);
  EXPECT_EQ(a.rate, b.rate);
  EXPECT_EQ(a.n, b.n);
  EXPECT_EQ(a.mode, StatisticsMode::kSampled);
}

TEST(FiniteRate, IncreasesWithSampleSizeBelowAsymptote) {
  const double limit = asymptotic_key_rate(depolarizing(0.05), kAlpha, 0.5).rate;
  double previous = -std::numeric_limits<double>::infinity();
  for (std::int64_t m : {100'000LL, 1'000'000LL, 10'000'000LL, 100'000'000LL, 1'000'000'000LL}) {
    const double r = finite_rate(request(0.05, m)).rate;
    EXPECT_GT(r, previous) << m;
    EXPECT_LT(r, limit) << m;
    previous = r;
  }
}

TEST(FiniteRate, NonIncreasingAsEstimationErrorShrinks) {
  double previous = std::numeric_limits<double>::infinity();
  for (double eps : {1e-2, 1e-5, 1e-8}) {
    auto req = request(0.05, 1'000'000);
    req.sec.eps_pe = eps;
    const double r = finite_rate(req).rate;
    EXPECT_LE(r, previous + 1e-9) << eps;
    previous = r;
  }
}

TEST(FiniteRate, ApproachesAsymptoticRateForHugeSamples) {
  const double limit = asymptotic_key_rate(depolarizing(0.05), kAlpha, 0.5).rate;
  const auto rep = finite_rate(request(0.05, 1'000'000'000'000LL));
  EXPECT_LT(rep.kl_threshold, 1e-9);
  EXPECT_LT(rep.delta_per_n, 1e-4);
  EXPECT_LE(rep.rate, limit);
  EXPECT_NEAR(rep.rate, limit, 1e-3);
}

TEST(AsymptoticKeyRate, Examples) {
  const auto noiseless = asymptotic_key_rate(BlochChannel::identity(), kAlpha, 0.5);
  EXPECT_NEAR(noiseless.rate, 1.0, 1e-9);
  EXPECT_NEAR(noiseless.min_eve_ambiguity, kSiftNoiseless, 1e-9);

  EXPECT_GT(asymptotic_key_rate(depolarizing(0.064), kAlpha, 0.5).rate, 0.0);
  EXPECT_LE(asymptotic_key_rate(depolarizing(0.070), kAlpha, 0.5).rate, 0.0);
  const auto high = asymptotic_key_rate(depolarizing(0.10), kAlpha, 0.5);
  EXPECT_LT(high.rate, 0.0);
  // Minimizing over channels with equal statistics can only lower the rate
  // computed at the channel itself.
  EXPECT_LE(high.rate, asymptotic_rate(depolarizing(0.10), kAlpha) + 1e-12);
}

TEST(AsymptoticKeyRate, DecreasesWithNoise) {
  double previous = 2.0;
  for (double q : {0.0, 0.02, 0.04, 0.06, 0.08}) {
    const double r = asymptotic_key_rate(depolarizing(q), kAlpha, 0.5).rate;
    EXPECT_LT(r, previous) << q;
    previous = r;
  }
}

}  // namespace
