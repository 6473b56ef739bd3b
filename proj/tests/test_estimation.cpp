#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "b92/estimation.hpp"
#include "support.hpp"

namespace {

using namespace b92;
using b92::testing::random_cp_channel;

constexpr double kAlpha = 0.39;
constexpr double kRpub = 0.5;
const double kSiftNoiseless = 2.0 * kAlpha * kAlpha * (1.0 - kAlpha * kAlpha);

OutcomeDistribution dist(std::initializer_list<double> p) {
  OutcomeDistribution d;
  std::copy(p.begin(), p.end(), d.probs.begin());
  return d;
}

TEST(Povm, Completeness) {
  for (double r : {0.1, 0.5, 0.9}) {
    const auto e = estimation_povm(kAlpha, r);
    ComplexMatrix sum = ComplexMatrix::Zero(4, 4);
    for (const auto& x : e) {
      sum += x;
      EXPECT_GE(hermitian_eigenvalues(x).minCoeff(), -1e-12);
    }
    EXPECT_LT(max_abs(sum - ComplexMatrix::Identity(4, 4)), 1e-12);
  }
}

TEST(Povm, TraceAndRank) {
  const auto e = estimation_povm(kAlpha, kRpub);
  EXPECT_NEAR(e[8].trace().real(), 1.0, 1e-12);
  EXPECT_NEAR(e[2].trace().real(), 0.5, 1e-12);
  const auto ev = hermitian_eigenvalues(e[2]);
  EXPECT_EQ(std::count_if(ev.begin(), ev.end(), [](double x) { return std::abs(x) > 1e-12; }), 1);
}

TEST(Theoretical, NoiselessExamples) {
  const auto lam = theoretical_distribution(joint_state(BlochChannel::identity(), kAlpha), kAlpha, kRpub);
  EXPECT_NEAR(lam.probs[4], 0.0, 1e-15);
  EXPECT_NEAR(lam.probs[1], 0.0, 1e-15);
  EXPECT_NEAR(lam.probs[8], 0.5 * kSiftNoiseless, 1e-12);
  EXPECT_NEAR(lam.probs[8], 0.128966, 1e-6);
  EXPECT_TRUE(lam.is_theoretical());
}

TEST(Theoretical, SumsToOneForRandomChannels) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    const auto lam = theoretical_distribution(joint_state(random_cp_channel(rng), kAlpha), kAlpha, kRpub);
    EXPECT_NEAR(std::accumulate(lam.probs.begin(), lam.probs.end(), 0.0), 1.0, 1e-12);
    for (double p : lam.probs) EXPECT_GE(p, 0.0);
  }
}

TEST(Empirical, ExpectedModeIsExact) {
  const auto lam = theoretical_distribution(joint_state(depolarizing(0.05), kAlpha), kAlpha, kRpub);
  const auto em = empirical_distribution(lam, 12345, StatisticsMode::kExpected);
  EXPECT_EQ(em.probs, lam.probs);
  EXPECT_EQ(*em.sample_count, 12345);
  EXPECT_THROW(empirical_distribution(lam, 0, StatisticsMode::kExpected), DomainError);
}

TEST(Empirical, SingleSampleIsADelta) {
  const auto lam = theoretical_distribution(joint_state(depolarizing(0.05), kAlpha), kAlpha, kRpub);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto em = empirical_distribution(lam, 1, StatisticsMode::kSampled, seed);
    EXPECT_EQ(std::count(em.probs.begin(), em.probs.end(), 1.0), 1);
    EXPECT_EQ(std::count(em.probs.begin(), em.probs.end(), 0.0), kOutcomes - 1);
  }
}

TEST(Empirical, SampledWithinFiveSigmaAndDeterministic) {
  const auto lam = theoretical_distribution(joint_state(depolarizing(0.05), kAlpha), kAlpha, kRpub);
  const std::int64_t m = 100'000;
  double var = 0.0;
  for (double p : lam.probs) var = std::max(var, p * (1.0 - p));
  const double band = 5.0 * std::sqrt(var / static_cast<double>(m));
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto em = empirical_distribution(lam, m, StatisticsMode::kSampled, seed);
    double total = 0.0;
    for (int i = 0; i < kOutcomes; ++i) {
      EXPECT_LE(std::abs(em.probs[i] - lam.probs[i]), band);
      total += em.probs[i] * static_cast<double>(m);
      const double count = em.probs[i] * static_cast<double>(m);
      EXPECT_NEAR(count, std::round(count), 1e-6);
    }
    EXPECT_NEAR(total, static_cast<double>(m), 1e-6);
    EXPECT_EQ(em.probs, empirical_distribution(lam, m, StatisticsMode::kSampled, seed).probs);
  }
  EXPECT_NE(empirical_distribution(lam, m, StatisticsMode::kSampled, 1).probs,
            empirical_distribution(lam, m, StatisticsMode::kSampled, 2).probs);
}

TEST(Kl, Examples) {
  const auto lam = theoretical_distribution(joint_state(depolarizing(0.05), kAlpha), kAlpha, kRpub);
  EXPECT_EQ(kl_divergence(lam, lam), 0.0);

  OutcomeDistribution uniform;
  uniform.probs.fill(1.0 / 9.0);
  EXPECT_NEAR(kl_divergence(dist({1, 0, 0, 0, 0, 0, 0, 0, 0}), uniform), std::log2(9.0), 1e-12);
  EXPECT_NEAR(std::log2(9.0), 3.169925, 1e-6);

  const double expected = 0.5 * std::log2(2.0) + 0.5 * std::log2(2.0 / 3.0);
  EXPECT_NEAR(kl_divergence(dist({0.5, 0.5}), dist({0.25, 0.75})), expected, 1e-12);
  EXPECT_NEAR(expected, 0.207518, 1e-6);
}

TEST(Kl, InfiniteWhenSupportMissing) {
  EXPECT_TRUE(std::isinf(kl_divergence(dist({0.5, 0.5}), dist({1.0, 0.0}))));
  EXPECT_EQ(kl_divergence(dist({1.0, 0.0}), dist({0.5, 0.5})), 1.0);
}

TEST(Kl, NonNegativeOnRandomPairs) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    OutcomeDistribution p, q;
    double sp = 0, sq = 0;
    for (int i = 0; i < kOutcomes; ++i) sp += p.probs[i] = u(rng), sq += q.probs[i] = u(rng);
    for (int i = 0; i < kOutcomes; ++i) p.probs[i] /= sp, q.probs[i] /= sq;
    EXPECT_GT(kl_divergence(p, q), 0.0);
  }
}

TEST(Threshold, Examples) {
  EXPECT_LT(kl_threshold(1'000'000'000, 1e-5), 1e-6);
  const double t = kl_threshold(1'000'000, 1e-5);
  EXPECT_NEAR(t, (9.0 * std::log2(1000001.0) + std::log2(1e5)) / 1e6, 1e-18);
  EXPECT_NEAR(t, 1.960e-4, 1e-7);
  EXPECT_GT(kl_threshold(1000, 1e-6), kl_threshold(1000, 1e-5));
  EXPECT_GT(kl_threshold(1000, 1e-5), kl_threshold(1000, 1e-2));
  EXPECT_THROW(kl_threshold(0, 1e-5), DomainError);
  EXPECT_THROW(kl_threshold(10, 0.0), DomainError);
  EXPECT_THROW(kl_threshold(10, 1.0), DomainError);
}

TEST(Region, Examples) {
  const auto truth = depolarizing(0.05);
  const auto region = make_region(b92::testing::expected_statistics(truth, 1'000'000), 1e-5, kAlpha, kRpub);
  EXPECT_TRUE(region_contains(region, truth));
  EXPECT_EQ(region_divergence(region, truth), 0.0);

  BlochChannel flip = BlochChannel::identity();
  flip.R(2, 2) = -1.0;
  EXPECT_FALSE(region_contains(region, flip));

  // The identity channel never clicks F1 on phi_0, while the noisy
  // statistics do: infinite divergence.
  EXPECT_TRUE(std::isinf(region_divergence(region, BlochChannel::identity())));
  EXPECT_FALSE(region_contains(region, BlochChannel::identity()));

  EXPECT_THROW(make_region(theoretical_distribution(joint_state(truth, kAlpha), kAlpha, kRpub), 1e-5, kAlpha, kRpub),
               DomainError);
}

// Random members of a region: mixtures of the truth with random CP channels.
std::vector<BlochChannel> region_members(const ConfidenceRegion& region, const BlochChannel& truth, std::mt19937_64& rng,
                                         int count) {
  std::vector<BlochChannel> out;
  std::uniform_real_distribution<double> u(-5.0, -1.0);
  while (static_cast<int>(out.size()) < count) {
    const auto ch = mix(truth, random_cp_channel(rng), std::pow(10.0, u(rng)));
    if (region_contains(region, ch)) out.push_back(ch);
  }
  return out;
}

TEST(Region, MidpointConvexity) {
  std::mt19937_64 rng(3);
  const auto truth = depolarizing(0.03);
  const auto region = make_region(b92::testing::expected_statistics(truth, 100'000), 1e-5, kAlpha, kRpub);
  const auto members = region_members(region, truth, rng, 200);
  for (int i = 0; i < 100; ++i) {
    const auto& a = members[2 * i];
    const auto& b = members[2 * i + 1];
    const auto mid = mix(a, b, 0.5);
    EXPECT_TRUE(is_cp(mid));
    const double dm = region_divergence(region, mid);
    EXPECT_LE(dm, region.kl_threshold + 1e-9);
    // D(lambda_m || .) is convex along the segment.
    EXPECT_LE(dm, 0.5 * (region_divergence(region, a) + region_divergence(region, b)) + 1e-9);
  }
}

TEST(Region, CoverageInSampledMode) {
  const auto truth = depolarizing(0.05);
  const auto lam = theoretical_distribution(joint_state(truth, kAlpha), kAlpha, kRpub);
  const double eps = 0.05;
  int covered = 0;
  const int trials = 300;
  for (int seed = 0; seed < trials; ++seed) {
    const auto em = empirical_distribution(lam, 10'000, StatisticsMode::kSampled, static_cast<std::uint64_t>(seed));
    if (region_contains(make_region(em, eps, kAlpha, kRpub), truth)) ++covered;
  }
  const double p = 1.0 - eps;
  EXPECT_GE(covered, trials * p - 3.0 * std::sqrt(trials * p * (1 - p)));
}

TEST(Mode, Names) {
  EXPECT_EQ(parse_statistics_mode("sampled"), StatisticsMode::kSampled);
  EXPECT_EQ(to_string(StatisticsMode::kExpected), "expected");
  EXPECT_THROW(parse_statistics_mode("bogus"), DomainError);
}

}  // namespace
