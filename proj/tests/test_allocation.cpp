#include "bpc/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "bpc/rng.hpp"

namespace {

using bpc::AllocationResult;
using bpc::ChannelState;
using bpc::LinkBudget;
using bpc::TwoUserRegion;

std::vector<double> random_gains(bpc::Philox& rng, std::size_t n) {
  std::vector<double> g(n);
  for (double& v : g) v = rng.next_exponential();
  return g;
}

TEST(OptimalBinaryTest, SingleUser) {
  const AllocationResult res = bpc::optimal_binary(ChannelState({2.0}), LinkBudget::from_snr(1.0));
  EXPECT_EQ(res.k_star, 1u);
  EXPECT_EQ(res.allocation.active_set(), (std::vector<std::size_t>{0}));
  EXPECT_NEAR(res.rate.nats, 0.5493061443340549, 1e-15);
  EXPECT_EQ(res.policy, bpc::PolicyTag::kOptimal);
  EXPECT_TRUE(res.allocation.is_binary());
}

TEST(OptimalBinaryTest, WeakPairTransmitsTogether) {
  const AllocationResult res =
      bpc::optimal_binary(ChannelState({0.1, 0.1}), LinkBudget::from_snr(1.0));
  EXPECT_EQ(res.k_star, 2u);
  EXPECT_EQ(res.allocation.active_set(), (std::vector<std::size_t>{0, 1}));
}

TEST(OptimalBinaryTest, DominantUserTransmitsAlone) {
  const AllocationResult res =
      bpc::optimal_binary(ChannelState({3.0, 1.0}), LinkBudget::from_snr(1.0));
  EXPECT_EQ(res.k_star, 1u);
  EXPECT_EQ(res.allocation.active_set(), (std::vector<std::size_t>{0}));
}

TEST(OptimalBinaryTest, FourUserFrozenInstances) {
  const ChannelState h({0.9, 2.4, 0.3, 1.1});
  {
    const AllocationResult res = bpc::optimal_binary(h, LinkBudget::from_snr(0.05));
    EXPECT_EQ(res.k_star, 4u);
    EXPECT_EQ(res.allocation.active_set(), (std::vector<std::size_t>{0, 1, 2, 3}));
    EXPECT_NEAR(res.rate.nats, 0.09855543553075169, 1e-14);
  }
  {
    const AllocationResult res = bpc::optimal_binary(h, LinkBudget::from_snr(1.0));
    EXPECT_EQ(res.k_star, 1u);
    EXPECT_EQ(res.allocation.active_set(), (std::vector<std::size_t>{1}));
    EXPECT_NEAR(res.rate.nats, 0.6118877158110578, 1e-14);
  }
  {
    const AllocationResult res = bpc::optimal_binary(h, LinkBudget::from_snr(40.0));
    EXPECT_EQ(res.k_star, 1u);
    EXPECT_NEAR(res.rate.nats, 2.2873554892516914, 1e-13);
  }
}

TEST(OptimalBinaryTest, AllZeroGainsFallBackToSingleUser) {
  // degenerate state: every k ties at rate 0, so the smallest k wins
  const AllocationResult res =
      bpc::optimal_binary(ChannelState({0.0, 0.0, 0.0}), LinkBudget::from_snr(1.0));
  EXPECT_EQ(res.k_star, 1u);
  EXPECT_EQ(res.rate.nats, 0.0);
  EXPECT_EQ(res.allocation.active_set(), (std::vector<std::size_t>{0}));
}

TEST(OptimalBinaryTest, ResultInvariantsHold) {
  bpc::Philox rng(808, 0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.next_index(10);
    const ChannelState h(random_gains(rng, n));
    const LinkBudget b =
        LinkBudget::from_snr(std::pow(10.0, -2.0 + 4.0 * rng.next_double()));
    const AllocationResult res = bpc::optimal_binary(h, b);
    ASSERT_GE(res.k_star, 1u);
    ASSERT_LE(res.k_star, n);
    // active set is exactly the k* strongest users
    std::vector<std::size_t> expected(h.sort_order().begin(),
                                      h.sort_order().begin() + res.k_star);
    std::sort(expected.begin(), expected.end());
    ASSERT_EQ(res.allocation.active_set(), expected);
    // reported rate is the k* prefix rate
    ASSERT_EQ(res.rate.nats, bpc::best_k_rate(h, res.k_star, b).nats);
    // and it is the maximum over all prefix sizes
    for (std::size_t k = 1; k <= n; ++k)
      ASSERT_GE(res.rate.nats, bpc::best_k_rate(h, k, b).nats);
  }
}

TEST(HeuristicTest, PicksBetterOfTdmaAndWideband) {
  bpc::Philox rng(909, 0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.next_index(12);
    const ChannelState h(random_gains(rng, n));
    const LinkBudget b =
        LinkBudget::from_snr(std::pow(10.0, -2.0 + 4.0 * rng.next_double()));
    const AllocationResult heur = bpc::heuristic_wb_tdma(h, b);
    const double r1 = bpc::best_k_rate(h, 1, b).nats;
    const double rn = bpc::best_k_rate(h, n, b).nats;
    ASSERT_EQ(heur.rate.nats, std::max(r1, rn));
    ASSERT_TRUE(heur.k_star == 1 || heur.k_star == n);
    if (r1 >= rn) {
      ASSERT_EQ(heur.k_star, 1u);  // ties prefer the single user
    }
    ASSERT_EQ(heur.policy, bpc::PolicyTag::kHeuristic);
    ASSERT_LE(heur.rate.nats, bpc::optimal_binary(h, b).rate.nats);
  }
}

TEST(HeuristicTest, ExactForTwoUsers) {
  bpc::Philox rng(910, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.next_index(2);
    const ChannelState h(random_gains(rng, n));
    const LinkBudget b = LinkBudget::from_snr(0.1 + 5.0 * rng.next_double());
    ASSERT_EQ(bpc::heuristic_wb_tdma(h, b).rate.nats, bpc::optimal_binary(h, b).rate.nats);
    ASSERT_EQ(bpc::heuristic_wb_tdma(h, b).k_star, bpc::optimal_binary(h, b).k_star);
  }
}

TEST(TdmaSufficientTest, ThresholdIsInclusive) {
  const LinkBudget b = LinkBudget::from_snr(1.0);
  EXPECT_TRUE(bpc::tdma_sufficient(ChannelState({std::numbers::e - 1.0}), b));
  EXPECT_FALSE(bpc::tdma_sufficient(ChannelState({1.7}), b));
  EXPECT_TRUE(bpc::tdma_sufficient(ChannelState({0.02}), LinkBudget::from_snr(100.0)));
  EXPECT_FALSE(bpc::tdma_sufficient(ChannelState({0.017}), LinkBudget::from_snr(100.0)));
}

TEST(TdmaSufficientTest, ImpliesSingleUserOptimum) {
  bpc::Philox rng(911, 0);
  std::int64_t fired = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + rng.next_index(12);
    const ChannelState h(random_gains(rng, n));
    const LinkBudget b =
        LinkBudget::from_snr(std::pow(10.0, -1.0 + 3.0 * rng.next_double()));
    if (!bpc::tdma_sufficient(h, b)) continue;
    ++fired;
    ASSERT_EQ(bpc::optimal_binary(h, b).k_star, 1u);
  }
  EXPECT_GT(fired, 100);  // the antecedent must actually occur
}

TEST(TwoUserRegionTest, FrozenClassifications) {
  const LinkBudget b = LinkBudget::from_snr(1.0);
  EXPECT_EQ(bpc::two_user_region(3.0, 1.0, b), TwoUserRegion::kUser1Only);
  EXPECT_EQ(bpc::two_user_region(1.0, 3.0, b), TwoUserRegion::kUser2Only);
  EXPECT_EQ(bpc::two_user_region(0.1, 0.1, b), TwoUserRegion::kBoth);
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  EXPECT_EQ(bpc::two_user_region(phi, phi, b), TwoUserRegion::kBoundary);
  EXPECT_EQ(bpc::two_user_region(0.0, 0.0, b), TwoUserRegion::kBoundary);
  EXPECT_THROW(bpc::two_user_region(-1.0, 1.0, b), std::invalid_argument);
}

TEST(TwoUserRegionTest, GoldenPointRatesCoincide) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const LinkBudget b = LinkBudget::from_snr(1.0);
  const double r1 = bpc::best_k_rate(ChannelState({phi, phi}), 1, b).nats;
  const double r12 = bpc::best_k_rate(ChannelState({phi, phi}), 2, b).nats;
  EXPECT_NEAR(r1, 0.48121182505960347, 1e-15);
  EXPECT_NEAR(r12, r1, 1e-15);
}

TEST(TwoUserRegionTest, MatchesClosedFormInequalities) {
  bpc::Philox rng(912, 0);
  std::int64_t boundary = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const double h1 = 5.0 * (1.0 - rng.next_double());
    const double h2 = 5.0 * (1.0 - rng.next_double());
    const double rho = std::pow(10.0, -1.0 + 2.0 * rng.next_double());
    const LinkBudget b = LinkBudget::from_snr(rho);
    const TwoUserRegion region = bpc::two_user_region(h1, h2, b);
    if (region == TwoUserRegion::kBoundary) {
      ++boundary;
      continue;
    }
    const double t1 = std::sqrt(1.0 + h2 * rho) / rho;
    const double t2 = std::sqrt(1.0 + h1 * rho) / rho;
    TwoUserRegion expected;
    if (h1 > t1 && h1 >= h2)
      expected = TwoUserRegion::kUser1Only;
    else if (h2 > t2 && h2 > h1)
      expected = TwoUserRegion::kUser2Only;
    else
      expected = TwoUserRegion::kBoth;
    ASSERT_EQ(region, expected) << "h1=" << h1 << " h2=" << h2 << " rho=" << rho;
  }
  EXPECT_LT(boundary, 100);  // boundaries have measure zero
}

TEST(TwoUserRegionTest, AgreesWithAllocator) {
  bpc::Philox rng(913, 0);
  for (int trial = 0; trial < 5000; ++trial) {
    const double h1 = 5.0 * (1.0 - rng.next_double());
    const double h2 = 5.0 * (1.0 - rng.next_double());
    const LinkBudget b =
        LinkBudget::from_snr(std::pow(10.0, -1.0 + 2.0 * rng.next_double()));
    const TwoUserRegion region = bpc::two_user_region(h1, h2, b);
    if (region == TwoUserRegion::kBoundary) continue;
    const std::vector<std::size_t> active =
        bpc::optimal_binary(ChannelState({h1, h2}), b).allocation.active_set();
    switch (region) {
      case TwoUserRegion::kUser1Only:
        ASSERT_EQ(active, (std::vector<std::size_t>{0}));
        break;
      case TwoUserRegion::kUser2Only:
        ASSERT_EQ(active, (std::vector<std::size_t>{1}));
        break;
      case TwoUserRegion::kBoth:
        ASSERT_EQ(active, (std::vector<std::size_t>{0, 1}));
        break;
      case TwoUserRegion::kBoundary:
        break;
    }
  }
}

TEST(EpsilonCrossingTest, ClosedFormValues) {
  EXPECT_NEAR(bpc::epsilon_crossing(2, 3.0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(bpc::epsilon_crossing(5, 0.7), 1.8757658490373844, 1e-14);
  EXPECT_NEAR(bpc::epsilon_crossing(10000, 2.0), 0.9102302505674044, 1e-13);
}

TEST(EpsilonCrossingTest, IncreasesInNTowardLimit) {
  for (double x : {0.05, 0.5, std::numbers::e - 1.0, 4.0, 60.0}) {
    double prev = 0.0;
    for (int n = 2; n <= 50; ++n) {
      const double eps = bpc::epsilon_crossing(n, x);
      ASSERT_GT(eps, prev) << "n=" << n << " x=" << x;
      ASSERT_LT(eps, bpc::epsilon_limit(x)) << "n=" << n << " x=" << x;
      prev = eps;
    }
  }
}

TEST(EpsilonLimitTest, KnownValues) {
  EXPECT_NEAR(bpc::epsilon_limit(std::numbers::e - 1.0), 1.0, 1e-12);
  EXPECT_NEAR(bpc::epsilon_limit(std::expm1(2.0)), 0.5, 1e-15);
}

TEST(EpsilonFormulaTest, RejectsBadArguments) {
  EXPECT_THROW(bpc::epsilon_crossing(1, 1.0), std::invalid_argument);
  EXPECT_THROW(bpc::epsilon_crossing(5, 0.0), std::invalid_argument);
  EXPECT_THROW(bpc::epsilon_crossing(5, -2.0), std::invalid_argument);
  EXPECT_THROW(bpc::epsilon_limit(0.0), std::invalid_argument);
}

TEST(ScaleCovarianceTest, ActiveSetInvariantUnderGainScaling) {
  bpc::Philox rng(914, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.next_index(10);
    const std::vector<double> gains = random_gains(rng, n);
    const double snr = std::pow(10.0, -2.0 + 4.0 * rng.next_double());
    const double c = std::pow(10.0, -2.0 + 4.0 * rng.next_double());
    std::vector<double> scaled = gains;
    for (double& g : scaled) g *= c;
    const auto a = bpc::optimal_binary(ChannelState(gains), LinkBudget::from_snr(snr));
    const auto b = bpc::optimal_binary(ChannelState(scaled), LinkBudget::from_snr(snr / c));
    ASSERT_EQ(a.allocation.active_set(), b.allocation.active_set());
    ASSERT_NEAR(a.rate.nats, b.rate.nats, 1e-12 * std::max(1.0, a.rate.nats));
  }
}

}  // namespace
