#include "oracles.hpp"

#include "ssa/errors.hpp"
#include "ssa/experiments.hpp"
#include "ssa/stealing.hpp"
#include "ssa/xos_dynamics.hpp"

#include <gtest/gtest.h>

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

BidProfile profile(std::vector<std::vector<long>> rows)
{
  BidProfile out(rows.size(), static_cast<int>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
  {
    for (std::size_t j = 0; j < rows[i].size(); ++j)
    {
      out.set(i, static_cast<int>(j), Money(rows[i][j]));
    }
  }
  return out;
}

ValuationList additivePair()
{
  return {std::make_shared<AdditiveValuation>(money({3, 1})), std::make_shared<AdditiveValuation>(money({2, 2}))};
}

BidProfile randomBids(std::size_t n, int m, std::mt19937_64& rng)
{
  BidProfile out(n, m);
  for (std::size_t i = 0; i < n; ++i)
  {
    for (int j = 0; j < m; ++j)
    {
      out.set(i, j, Money(static_cast<long>(rng() % 7), 2));
    }
  }
  return out;
}

}  // namespace

TEST(Resolve, ZeroBidsGoToBidderZero)
{
  auto const vals = additivePair();
  auto const out  = resolve(profile({{0, 0}, {0, 0}}), vals);
  EXPECT_EQ(out.allocation.bundles[0], of({0, 1}));
  EXPECT_EQ(out.payments[0], Money(0));
  EXPECT_EQ(out.payments[1], Money(0));
}

TEST(Resolve, SecondPricePerItem)
{
  auto const vals = additivePair();
  auto const out  = resolve(profile({{3, 1}, {2, 2}}), vals);
  EXPECT_EQ(out.allocation.bundles[0], of({0}));
  EXPECT_EQ(out.allocation.bundles[1], of({1}));
  EXPECT_EQ(out.payments[0], Money(2));
  EXPECT_EQ(out.payments[1], Money(1));
}

TEST(Resolve, MatchesOracleOnRandomProfiles)
{
  std::mt19937_64 rng(1);
  for (int r = 0; r < 300; ++r)
  {
    auto const vals = randomSubmodularInstance(3, 5, rng());
    auto const bids = randomBids(3, 5, rng);
    auto const got  = resolve(bids, vals);
    auto const want = oracle::resolve(vals, bids);
    for (std::size_t i = 0; i < 3; ++i)
    {
      EXPECT_EQ(got.allocation.bundles[i].bits(), want.bundles[i]);
      EXPECT_EQ(got.payments[i], want.payments[i]);
      EXPECT_EQ(got.utilities[i], want.utilities[i]);
    }
  }
}

TEST(NoOverbidding, DirectViolationHasWitness)
{
  AdditiveValuation const v(money({1, 1}));
  auto const bids  = money({2, 0});
  auto const check = checkNoOverbidding(v, bids);
  EXPECT_FALSE(check.ok);
  ASSERT_TRUE(check.witness.has_value());
  EXPECT_EQ(*check.witness, of({0}));
  EXPECT_TRUE(checkNoOverbidding(v, money({0, 0})).ok);
}

TEST(NoOverbidding, ClauseBidsNeverOverbid)
{
  std::mt19937_64 rng(2);
  for (int r = 0; r < 50; ++r)
  {
    auto const v = randomSubmodular(8, rng);
    Bundle const s(rng() & 0xFF);
    auto const order  = s.items();
    auto const clause = xosClause(*v, s, order);
    std::vector<Money> bids(8);
    for (int j = 0; j < 8; ++j)
    {
      bids[static_cast<std::size_t>(j)] = s.contains(j) ? clause.at(j) : Money(0);
    }
    EXPECT_TRUE(checkNoOverbidding(*v, bids).ok);
  }
}

TEST(BestDeviation, ZeroPricesGoToMaximizer)
{
  BudgetAdditiveValuation const v(Money(3), money({2, 2, 2}));
  std::vector<Money> const prices(3, Money(0));
  auto const dev = bestDeviation(v, prices, Money(0));
  ASSERT_TRUE(dev.has_value());
  EXPECT_EQ(dev->utility, Money(3));
}

TEST(BestDeviation, AdditiveExample)
{
  AdditiveValuation const v(money({3, 1}));
  auto const dev = bestDeviation(v, money({2, 2}), Money(0));
  ASSERT_TRUE(dev.has_value());
  EXPECT_EQ(dev->target, of({0}));
  EXPECT_EQ(dev->utility, Money(1));
  EXPECT_FALSE(bestDeviation(v, money({2, 2}), Money(1)).has_value());
}

TEST(Equilibrium, ZeroBidsWithSharedInterestFail)
{
  auto const vals = additivePair();
  EXPECT_FALSE(isPureNashNoOverbid(vals, profile({{0, 0}, {0, 0}})).equilibrium);
}

TEST(Equilibrium, AgreesWithOracleOnRandomProfiles)
{
  std::mt19937_64 rng(3);
  int equilibria = 0;
  for (int r = 0; r < 300; ++r)
  {
    auto const vals = randomSubmodularInstance(2, 5, rng());
    BidProfile bids = randomBids(2, 5, rng);
    if (r % 3 == 0)
    {
      bids = topsteal(vals, greedyAllocation(vals)).bids;
    }
    bool const want = oracle::isEquilibrium(vals, bids);
    EXPECT_EQ(isPureNashNoOverbid(vals, bids).equilibrium, want);
    equilibria += want ? 1 : 0;
  }
  EXPECT_GT(equilibria, 50);
}

TEST(Equilibrium, StealingOutputsAreEquilibria)
{
  for (std::uint64_t seed = 0; seed < 40; ++seed)
  {
    auto const vals = randomSubmodularInstance(3, 6, seed);
    Allocation init;
    init.bundles = {Bundle::full(6), Bundle{}, Bundle{}};
    auto ordering = orderingPolicyByName("stolen-last");
    auto policy   = stealPolicyByName("lex", seed);
    auto const run = runIterativeStealing(vals, init, *ordering, *policy, 100000);
    EXPECT_TRUE(oracle::isEquilibrium(vals, run.bids)) << "seed " << seed;
    EXPECT_TRUE(isPureNashNoOverbid(vals, run.bids).equilibrium) << "seed " << seed;
  }
}

TEST(Traditional, DetectsUnownedAndPerturbedBids)
{
  auto const vals = ValuationList{std::make_shared<BudgetAdditiveValuation>(Money(3), money({2, 2, 1})),
                                  std::make_shared<BudgetAdditiveValuation>(Money(2), money({1, 1, 2}))};
  OrderedClauseOracle o0(vals[0], OrderedClauseOracle::Ordering::Ascending);
  OrderedClauseOracle o1(vals[1], OrderedClauseOracle::Ordering::Ascending);
  std::vector<XosOracle*> oracles{&o0, &o1};
  Allocation alloc;
  alloc.bundles = {of({0, 1}), of({2})};
  BidProfile bids(2, 3);
  bids.set(0, 0, Money(2));
  bids.set(0, 1, Money(1));
  bids.set(1, 2, Money(2));
  EXPECT_TRUE(isTraditional(alloc, bids, oracles));
  BidProfile unowned = bids;
  unowned.set(1, 0, Money(1, 2));
  EXPECT_FALSE(isTraditional(alloc, unowned, oracles));
  BidProfile bumped = bids;
  bumped.set(0, 0, Money(3));
  EXPECT_FALSE(isTraditional(alloc, bumped, oracles));
}

TEST(OptimalWelfare, SmallExamples)
{
  auto const vals = additivePair();
  EXPECT_EQ(optimalWelfare(vals), Money(5));
  ValuationList const single{std::make_shared<BudgetAdditiveValuation>(Money(3), money({2, 2}))};
  EXPECT_EQ(optimalWelfare(single), Money(3));
}

TEST(OptimalWelfare, MatchesEnumeration)
{
  for (std::uint64_t seed = 0; seed < 60; ++seed)
  {
    auto const vals = randomSubmodularInstance(2 + static_cast<int>(seed % 3), 6, seed);
    EXPECT_EQ(optimalWelfare(vals), oracle::optimalWelfare(vals)) << "seed " << seed;
  }
}

TEST(OptimalWelfare, TooManyItemsIsACapabilityError)
{
  ValuationList const vals{std::make_shared<AdditiveValuation>(std::vector<Money>(17, Money(1))),
                           std::make_shared<AdditiveValuation>(std::vector<Money>(17, Money(1)))};
  EXPECT_THROW(optimalWelfare(vals), CapabilityError);
}

TEST(Greedy, AssignsByLargestMarginal)
{
  auto const vals  = additivePair();
  auto const alloc = greedyAllocation(vals);
  EXPECT_EQ(alloc.bundles[0], of({0}));
  EXPECT_EQ(alloc.bundles[1], of({1}));
}

TEST(Greedy, IsAHalfApproximationOnSubmodularInstances)
{
  for (std::uint64_t seed = 0; seed < 60; ++seed)
  {
    auto const vals = randomSubmodularInstance(3, 6, seed);
    EXPECT_GE(welfare(greedyAllocation(vals), vals) * 2, oracle::optimalWelfare(vals)) << "seed " << seed;
  }
}
