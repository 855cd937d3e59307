#include "oracles.hpp"

#include "ssa/errors.hpp"
#include "ssa/experiments.hpp"
#include "ssa/xos_dynamics.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace ssa;

namespace {

std::vector<Money> money(std::initializer_list<long> xs)
{
  std::vector<Money> out;
  for (long x : xs)
  {
    out.emplace_back(x);
  }
  return out;
}

void expectMiddleLevelsPath(const std::vector<Bundle>& path, int m)
{
  int const half = m / 2;
  EXPECT_EQ(path.size(), oracle::binom(m, half) + oracle::binom(m, half + 1));
  std::set<std::uint64_t> seen;
  for (std::size_t p = 0; p < path.size(); ++p)
  {
    int const w = oracle::popcount(path[p].bits());
    EXPECT_EQ(w, p % 2 == 0 ? half : half + 1) << "position " << p;
    EXPECT_TRUE(seen.insert(path[p].bits()).second);
    if (p > 0)
    {
      EXPECT_EQ(oracle::popcount(path[p].bits() ^ path[p - 1].bits()), 1);
    }
  }
}

DynamicResult runGray(ExponentialInstance& inst)
{
  std::vector<XosOracle*> oracles{inst.oracles[0].get(), inst.oracles[1].get()};
  return runBestReplyDynamic(inst.valuations, oracles, inst.initial, 100000);
}

}  // namespace

TEST(GrayPath, SmallCases)
{
  for (int m : {3, 5, 7, 9})
  {
    auto const path = grayMiddleLevels(m);
    expectMiddleLevelsPath(path, m);
    EXPECT_TRUE(isMiddleLevelsPath(path, m));
  }
  EXPECT_EQ(grayMiddleLevels(3).size(), 6U);
  EXPECT_EQ(grayMiddleLevels(5).size(), 20U);
}

TEST(GrayPath, CheckerRejectsBrokenPaths)
{
  auto path = grayMiddleLevels(5);
  std::swap(path[3], path[7]);
  EXPECT_FALSE(isMiddleLevelsPath(path, 5));
  auto shorter = grayMiddleLevels(5);
  shorter.pop_back();
  EXPECT_FALSE(isMiddleLevelsPath(shorter, 5));
}

TEST(GrayPath, EvenMIsRejected)
{
  EXPECT_THROW(grayMiddleLevels(4), DomainError);
}

TEST(ExponentialDynamic, ExchangeCountsMatchPathLength)
{
  for (auto [m, expected] : {std::pair{5, 19U}, std::pair{7, 69U}})
  {
    auto inst         = buildExponentialInstance(m);
    auto const result = runGray(inst);
    EXPECT_EQ(result.trace.exchanges, expected) << "m " << m;
    auto const& path = inst.adversary->path;
    ASSERT_EQ(result.trace.steps.size(), path.size());
    for (std::size_t p = 0; p < path.size(); ++p)
    {
      EXPECT_EQ(result.trace.steps[p].allocation.bundles[1], path[p]) << "m " << m << " step " << p;
      EXPECT_EQ(result.trace.steps[p].allocation.bundles[0], Bundle::full(m) - path[p]);
    }
    for (std::size_t p = 1; p < result.trace.steps.size(); ++p)
    {
      auto const& before = result.trace.steps[p - 1].allocation.bundles[0];
      auto const& after  = result.trace.steps[p].allocation.bundles[0];
      EXPECT_EQ(oracle::popcount(before.bits() ^ after.bits()), 1);
      EXPECT_GT(result.trace.steps[p].winningBidSum, result.trace.steps[p - 1].winningBidSum);
    }
  }
}

TEST(ExponentialDynamic, ConstructedValuationsAreSubmodularAndEndInEquilibrium)
{
  for (int m : {5, 7})
  {
    auto inst         = buildExponentialInstance(m);
    auto const result = runGray(inst);
    for (auto const& v : inst.valuations)
    {
      EXPECT_TRUE(verifyClass(*v, ValuationClass::Submodular).holds) << "m " << m;
      EXPECT_TRUE(oracle::submodular(oracle::valueOf(*v), m));
    }
    std::vector<XosOracle*> oracles{inst.oracles[0].get(), inst.oracles[1].get()};
    EXPECT_TRUE(isTraditional(result.allocation, result.bids, oracles));
    EXPECT_TRUE(oracle::isEquilibrium(inst.valuations, result.bids));
  }
}

TEST(ExponentialDynamic, EpsilonTooLargeIsRejected)
{
  EXPECT_THROW(buildExponentialInstance(5, Money(1, 2)), DomainError);
  EXPECT_THROW(buildExponentialInstance(6), DomainError);
}

TEST(ExponentialDynamic, ReportViaExperiments)
{
  auto const report = runGrayDynamic(5, RunOptions{});
  EXPECT_EQ(report.exchanges, 19U);
  ASSERT_TRUE(report.equilibriumVerified.has_value());
  EXPECT_TRUE(*report.equilibriumVerified);
  EXPECT_GT(report.ledger.total().xos, 0U);
}

TEST(BestReply, DisjointAdditiveSplitsNaturally)
{
  ValuationList const vals{std::make_shared<AdditiveValuation>(money({2, 3, 0, 0})),
                           std::make_shared<AdditiveValuation>(money({0, 0, 1, 4}))};
  OrderedClauseOracle o0(vals[0], OrderedClauseOracle::Ordering::Greedy);
  OrderedClauseOracle o1(vals[1], OrderedClauseOracle::Ordering::Greedy);
  std::vector<XosOracle*> oracles{&o0, &o1};
  Allocation init;
  init.bundles      = {Bundle::full(4), Bundle{}};
  auto const result = runBestReplyDynamic(vals, oracles, init, 100);
  EXPECT_LE(result.trace.rounds, 3U);
  EXPECT_EQ(result.allocation.bundles[0], Bundle(0b0011));
  EXPECT_EQ(result.allocation.bundles[1], Bundle(0b1100));
}

TEST(BestReply, SubmodularPairsReachCertifiedTraditionalEquilibria)
{
  for (std::uint64_t seed = 0; seed < 100; ++seed)
  {
    int const m     = 3 + static_cast<int>(seed % 4);
    auto const vals = randomSubmodularInstance(2, m, seed);
    OrderedClauseOracle o0(vals[0], OrderedClauseOracle::Ordering::Greedy);
    OrderedClauseOracle o1(vals[1], OrderedClauseOracle::Ordering::Greedy);
    std::vector<XosOracle*> oracles{&o0, &o1};
    Allocation init;
    init.bundles      = {Bundle::full(m), Bundle{}};
    auto const result = runBestReplyDynamic(vals, oracles, init, 10000);
    EXPECT_TRUE(isTraditional(result.allocation, result.bids, oracles)) << "seed " << seed;
    EXPECT_TRUE(oracle::isEquilibrium(vals, result.bids)) << "seed " << seed;
  }
}

TEST(BestReply, RoundCapThrows)
{
  auto inst = buildExponentialInstance(7);
  std::vector<XosOracle*> oracles{inst.oracles[0].get(), inst.oracles[1].get()};
  EXPECT_THROW(runBestReplyDynamic(inst.valuations, oracles, inst.initial, 5), DynamicCapExceeded);
}
