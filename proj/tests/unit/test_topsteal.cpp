#include "oracles.hpp"

#include "ssa/errors.hpp"
#include "ssa/experiments.hpp"
#include "ssa/topsteal.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace ssa;

namespace {

Bundle of(std::initializer_list<int> items)
{
  Bundle b;
  for (int j : items)
  {
    b = b.with(j);
  }
  return b;
}

std::vector<Money> money(std::initializer_list<long> xs)
{
  std::vector<Money> out;
  for (long x : xs)
  {
    out.emplace_back(x);
  }
  return out;
}

Allocation allToFirst(std::size_t n, int m)
{
  Allocation out;
  out.bundles.assign(n, Bundle{});
  out.bundles[0] = Bundle::full(m);
  return out;
}

Allocation randomAllocation(std::size_t n, int m, std::mt19937_64& rng)
{
  Allocation out;
  out.bundles.assign(n, Bundle{});
  for (int j = 0; j < m; ++j)
  {
    auto& b = out.bundles[rng() % n];
    b       = b.with(j);
  }
  return out;
}

/// Additive bidders where each item has exactly `t` randomly chosen competitors.
ValuationList tRestrictedInstance(std::size_t n, int m, int t, std::mt19937_64& rng)
{
  std::vector<std::vector<Money>> items(n, std::vector<Money>(static_cast<std::size_t>(m), Money(0)));
  std::vector<std::size_t> bidders(n);
  std::iota(bidders.begin(), bidders.end(), 0);
  for (int j = 0; j < m; ++j)
  {
    std::shuffle(bidders.begin(), bidders.end(), rng);
    for (int c = 0; c < t; ++c)
    {
      items[bidders[static_cast<std::size_t>(c)]][static_cast<std::size_t>(j)] = Money(static_cast<long>(1 + rng() % 6));
    }
  }
  ValuationList out;
  for (std::size_t i = 0; i < n; ++i)
  {
    Money total = 0;
    for (auto const& x : items[i])
    {
      total += x;
    }
    out.push_back(std::make_shared<BudgetAdditiveValuation>(total * Money(2, 3), items[i]));
  }
  return out;
}

void checkRecurrence(const RecursionTrace& trace)
{
  for (auto const& node : trace.nodes)
  {
    std::uint64_t sub = node.ownSteals;
    for (auto c : node.children)
    {
      sub += trace.nodes[c].steals;
    }
    EXPECT_EQ(sub, node.steals);
    EXPECT_LE(node.steals, node.bound);
  }
}

}  // namespace

TEST(StealBound, Values)
{
  EXPECT_EQ(stealCountBound(7, 2), 7U);
  EXPECT_EQ(stealCountBound(5, 3), 20U);
  EXPECT_EQ(stealCountBound(1, 3), 2U);
  for (int m = 2; m <= 10; ++m)
  {
    for (int t = 2; t <= 5; ++t)
    {
      EXPECT_LE(stealCountBound(m, t), 1 + stealCountBound(m, t - 1) + stealCountBound(m - 1, t));
    }
  }
  EXPECT_THROW(stealCountBound(0, 2), DomainError);
}

TEST(Competitors, SetsAndTops)
{
  ValuationList const vals{std::make_shared<AdditiveValuation>(money({3, 0, 0})),
                           std::make_shared<AdditiveValuation>(money({3, 1, 0}))};
  auto const info = competitorInfo(vals, Bundle::full(3));
  EXPECT_EQ(info.competitors[0].size(), 2U);
  EXPECT_TRUE(info.isTop(0, 0));
  EXPECT_TRUE(info.isTop(1, 0));
  EXPECT_FALSE(info.isCompetitor(0, 1));
  EXPECT_TRUE(info.competitors[2].empty());
  EXPECT_EQ(info.restriction(), 2U);
}

TEST(Preprocess, MovesItemsToCompetitors)
{
  ValuationList const vals{std::make_shared<AdditiveValuation>(money({0, 2})),
                           std::make_shared<AdditiveValuation>(money({5, 0}))};
  Allocation init;
  init.bundles      = {of({0, 1}), Bundle{}};
  auto const result = preprocessToCompetitors(vals, init, Bundle::full(2));
  EXPECT_EQ(result.allocation.bundles[1], of({0}));
  EXPECT_EQ(welfare(result.allocation, vals) - welfare(init, vals), Money(5));
  Allocation ok;
  ok.bundles = {of({1}), of({0})};
  EXPECT_EQ(preprocessToCompetitors(vals, ok, Bundle::full(2)).allocation, ok);
}

TEST(Preprocess, IgnorableItemsGoToBidderZero)
{
  ValuationList const vals{std::make_shared<AdditiveValuation>(money({1, 0})),
                           std::make_shared<AdditiveValuation>(money({1, 0}))};
  Allocation init;
  init.bundles      = {of({0}), of({1})};
  auto const result = preprocessToCompetitors(vals, init, Bundle::full(2));
  EXPECT_TRUE(result.ignorable.contains(1));
  EXPECT_TRUE(result.allocation.bundles[0].contains(1));
}

TEST(Wrappers, MarginalAndErasedValues)
{
  auto const base = std::make_shared<BudgetAdditiveValuation>(Money(3), money({2, 2, 1}));
  auto const marg = marginalOn(base, of({0}));
  EXPECT_EQ(marg->value(of({1})), Money(1));
  EXPECT_EQ(marg->value(Bundle{}), Money(0));
  auto const erased = erase(base, of({0}));
  EXPECT_EQ(erased->value(of({0, 1})), Money(2));
  EXPECT_EQ(erased->value(of({0})), Money(0));
}

TEST(Wrappers, MarginalPreservesSubmodularity)
{
  std::mt19937_64 rng(1);
  for (int r = 0; r < 30; ++r)
  {
    auto const v = randomSubmodular(7, rng);
    Bundle const given(rng() & 0x7F);
    EXPECT_TRUE(verifyClass(*marginalOn(v, given), ValuationClass::Submodular).holds);
    EXPECT_TRUE(verifyClass(*erase(v, given), ValuationClass::Submodular).holds);
  }
}

TEST(Compose, TopItemJoinsWithoutRivalSteals)
{
  ValuationList const vals{std::make_shared<AdditiveValuation>(money({4, 1})),
                           std::make_shared<AdditiveValuation>(money({3, 2}))};
  Allocation a;
  a.bundles = {Bundle{}, of({1})};
  BidProfile bids(2, 2);
  bids.set(1, 1, Money(2));
  auto const composed = composeTopItem(a, bids, 0, 0, vals);
  EXPECT_EQ(composed.allocation.bundles[0], of({0}));
  EXPECT_EQ(composed.bids.at(0, 0), Money(4));
  EXPECT_EQ(composed.bids.at(1, 0), Money(0));
  EXPECT_TRUE(oracle::isEquilibrium(vals, composed.bids));
}

TEST(Topsteal, SingleItemNeedsAtMostOneSteal)
{
  for (std::uint64_t seed = 0; seed < 30; ++seed)
  {
    auto const vals   = randomSubmodularInstance(3, 1, seed);
    auto const result = topsteal(vals, allToFirst(3, 1));
    EXPECT_LE(result.trace.steals, 1U);
    EXPECT_TRUE(oracle::isEquilibrium(vals, result.bids));
  }
}

TEST(Topsteal, TwoBiddersStayWithinMSteals)
{
  std::mt19937_64 rng(2);
  for (std::uint64_t seed = 0; seed < 200; ++seed)
  {
    int const m       = 2 + static_cast<int>(seed % 7);
    auto const vals   = randomSubmodularInstance(2, m, seed);
    auto const init   = randomAllocation(2, m, rng);
    auto const result = topsteal(vals, init);
    EXPECT_LE(result.trace.steals, static_cast<std::uint64_t>(m)) << "seed " << seed;
    EXPECT_TRUE(result.trace.diagnostics.empty());
    EXPECT_TRUE(oracle::isEquilibrium(vals, result.bids)) << "seed " << seed;
    EXPECT_GE(welfare(result.allocation, vals), welfare(init, vals));
    checkRecurrence(result.trace);
  }
}

TEST(Topsteal, ThreeBiddersCertifiedByBruteForce)
{
  std::mt19937_64 rng(3);
  for (std::uint64_t seed = 0; seed < 200; ++seed)
  {
    auto const vals   = randomSubmodularInstance(3, 5, seed);
    auto const result = topsteal(vals, randomAllocation(3, 5, rng));
    EXPECT_TRUE(oracle::isEquilibrium(vals, result.bids)) << "seed " << seed;
    checkRecurrence(result.trace);
  }
}

TEST(Topsteal, TRestrictedInstancesRespectTheBound)
{
  std::mt19937_64 rng(4);
  for (int r = 0; r < 100; ++r)
  {
    int const m       = 3 + r % 4;
    auto const vals   = tRestrictedInstance(4, m, 3, rng);
    auto const result = topsteal(vals, randomAllocation(4, m, rng), Bundle::full(m), 3);
    EXPECT_LE(result.trace.steals, stealCountBound(m, 3));
    EXPECT_TRUE(oracle::isEquilibrium(vals, result.bids));
  }
}

TEST(Topsteal, RejectsInstancesBeyondT)
{
  std::mt19937_64 rng(5);
  auto const vals = tRestrictedInstance(3, 4, 3, rng);
  EXPECT_THROW(topsteal(vals, allToFirst(3, 4), Bundle::full(4), 2), DomainError);
}

TEST(Topsteal, ValueQueriesWithinPolynomialTimesMToTheN)
{
  for (int n = 2; n <= 4; ++n)
  {
    for (int m = 2; m <= 8; ++m)
    {
      double const bound = n * std::pow(m, 2) * std::pow(m, n);
      for (std::uint64_t seed = 0; seed < 20; ++seed)
      {
        auto const vals = randomSubmodularInstance(n, m, seed * 11 + static_cast<std::uint64_t>(n));
        QueryLedger ledger(static_cast<std::size_t>(n));
        topsteal(vals, allToFirst(static_cast<std::size_t>(n), m), &ledger);
        EXPECT_LE(static_cast<double>(ledger.total().value), bound) << "n " << n << " m " << m;
      }
    }
  }
}

TEST(Topsteal, GreedyStartKeepsGreedyWelfareAndHalfOfOptimum)
{
  for (std::uint64_t seed = 0; seed < 100; ++seed)
  {
    auto const vals   = randomSubmodularInstance(2 + static_cast<int>(seed % 3), 6, seed);
    auto const greedy = greedyAllocation(vals);
    auto const result = topsteal(vals, greedy);
    Money const w     = welfare(result.allocation, vals);
    EXPECT_GE(w, welfare(greedy, vals));
    EXPECT_GE(w * 2, oracle::optimalWelfare(vals));
  }
}
