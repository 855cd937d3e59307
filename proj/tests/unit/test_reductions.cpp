#include "oracles.hpp"

#include "ssa/errors.hpp"
#include "ssa/reductions.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ssa;

namespace {

/// Disjoint sides of size m/4 and 0 < |S_1^r ∩ S_2^l| <= m/8 for r != l, checked directly.
bool goodByDefinition(const SetPairSystem& system)
{
  int const m = system.m;
  for (std::size_t r = 0; r < system.pairs.size(); ++r)
  {
    auto const& p = system.pairs[r];
    if (oracle::popcount(p.first.bits()) != m / 4 || oracle::popcount(p.second.bits()) != m / 4 ||
        (p.first.bits() & p.second.bits()) != 0)
    {
      return false;
    }
    for (std::size_t l = 0; l < system.pairs.size(); ++l)
    {
      if (l == r)
      {
        continue;
      }
      int const common = oracle::popcount(p.first.bits() & system.pairs[l].second.bits());
      if (common == 0 || common > m / 8)
      {
        return false;
      }
    }
  }
  return true;
}

ValuationList pairOf(const SetPairSystem& system, const DisjointnessInput& a, const DisjointnessInput& b)
{
  return {setPairValuation(system, a, 0), setPairValuation(system, b, 1)};
}

ValuationList copies(const WeightedGraph& g)
{
  auto const v = maxcutValuation(g);
  return {v, v};
}

Allocation cut(int vertices, std::uint64_t side)
{
  Allocation a;
  a.bundles = {Bundle(side), Bundle::full(vertices) - Bundle(side)};
  return a;
}

}  // namespace

TEST(SetPairSystem, SmallSystemsAreGood)
{
  for (std::uint64_t seed = 0; seed < 10; ++seed)
  {
    auto const system = buildGoodSetPairSystem(8, 2, seed);
    EXPECT_EQ(system.pairs.size(), 2U);
    EXPECT_TRUE(checkSetPairSystem(system).good);
    EXPECT_TRUE(goodByDefinition(system));
    EXPECT_EQ(oracle::popcount(system.pairs[0].first.bits() & system.pairs[1].second.bits()), 1);
  }
  auto const wide = buildGoodSetPairSystem(16, 10, 1);
  EXPECT_EQ(wide.pairs.size(), 10U);
  EXPECT_TRUE(checkSetPairSystem(wide).good);
  EXPECT_TRUE(goodByDefinition(wide));
  EXPECT_TRUE(goodByDefinition(buildGoodSetPairSystem(8, 1, 3)));
}

TEST(SetPairSystem, CheckerFindsViolations)
{
  auto system = buildGoodSetPairSystem(8, 2, 1);
  std::swap(system.pairs[0].first, system.pairs[0].second);
  system.pairs[1].second = system.pairs[0].second;
  EXPECT_EQ(checkSetPairSystem(system).good, goodByDefinition(system));
  EXPECT_FALSE(checkSetPairSystem(system).good);
  EXPECT_FALSE(checkSetPairSystem(system).violation.empty());
}

TEST(SetPairSystem, ImpossibleRequestFails)
{
  EXPECT_THROW(buildGoodSetPairSystem(8, 40, 1, 200), ConstructionError);
}

TEST(SetPairValuation, Values)
{
  auto const system = buildGoodSetPairSystem(8, 2, 2);
  auto const v      = setPairValuation(system, {true, false}, 0);
  EXPECT_EQ(v->value(Bundle{}), Money(0));
  EXPECT_EQ(v->value(system.pairs[0].first), Money(2));
  EXPECT_EQ(v->value(system.pairs[1].first), Money(1));
  EXPECT_EQ(v->value(Bundle::full(8)), Money(2));
  Bundle seven = Bundle::full(8).without(0);
  EXPECT_EQ(v->value(seven), Money(2));
  EXPECT_EQ(v->flaggedBundles().size(), 1U);
}

TEST(SetPairValuation, SubadditiveAndMonotone)
{
  for (std::uint64_t seed = 0; seed < 5; ++seed)
  {
    auto const system = buildGoodSetPairSystem(8, 2, seed);
    for (std::size_t player = 0; player < 2; ++player)
    {
      auto const v  = setPairValuation(system, {seed % 2 == 0, true}, player);
      auto const fn = oracle::valueOf(*v);
      EXPECT_TRUE(oracle::subadditive(fn, 8));
      EXPECT_TRUE(oracle::monotone(fn, 8));
      EXPECT_TRUE(verifyClass(*v, ValuationClass::Subadditive).holds);
    }
  }
}

TEST(Witness, CommonIndexGivesCertifiedEquilibrium)
{
  auto const system          = buildGoodSetPairSystem(8, 2, 4);
  DisjointnessInput const a  = {false, true};
  DisjointnessInput const b  = {true, true};
  auto const k               = commonIndex(a, b);
  ASSERT_TRUE(k.has_value());
  EXPECT_EQ(*k, 1U);
  auto const vals = pairOf(system, a, b);
  for (auto eps : {witnessEpsilon(8), witnessEpsilon(8) / 2})
  {
    auto const bids = equilibriumWitness(system, a, b, *k, eps);
    EXPECT_TRUE(oracle::isEquilibrium(vals, bids));
    EXPECT_TRUE(isPureNashNoOverbid(vals, bids).equilibrium);
    auto const out = oracle::resolve(vals, bids);
    for (std::size_t i = 0; i < 2; ++i)
    {
      EXPECT_EQ(out.utilities[i], Money(2));
      EXPECT_EQ(out.payments[i], Money(0));
    }
    for (int j = 0; j < 8; ++j)
    {
      EXPECT_FALSE(bids.at(0, j) > 0 && bids.at(1, j) > 0);
    }
  }
  EXPECT_EQ(witnessEpsilon(8), Money(1, 32));
  EXPECT_THROW(equilibriumWitness(system, a, b, 0), DomainError);
  EXPECT_FALSE(commonIndex({true, false}, {false, true}).has_value());
}

TEST(Unprotected, EveryDisjointProfileHasAStrictDeviation)
{
  auto const system = buildGoodSetPairSystem(8, 2, 5);
  auto const first  = setPairValuation(system, {true, false}, 0);
  auto const second = setPairValuation(system, {false, true}, 1);
  auto const sweep  = sweepUnprotected(first, second, 500, 1);
  EXPECT_EQ(sweep.profiles, 500U);
  EXPECT_EQ(sweep.strict, 500U);
  EXPECT_EQ(sweep.missing, 0U);
}

TEST(Unprotected, DeviationIsVerifiedByOracle)
{
  auto const system = buildGoodSetPairSystem(8, 2, 6);
  auto const first  = setPairValuation(system, {true, false}, 0);
  auto const second = setPairValuation(system, {false, true}, 1);
  ValuationList const vals{first, second};
  std::mt19937_64 rng(7);
  for (int r = 0; r < 100; ++r)
  {
    auto const bids = randomNoOverbidProfile(vals, rng);
    EXPECT_FALSE(oracle::isEquilibrium(vals, bids));
    auto const dev = findUnprotectedSet(first, second, bids);
    ASSERT_TRUE(dev.has_value());
    EXPECT_GT(dev->utilityAfter, dev->utilityBefore);
    EXPECT_TRUE(checkNoOverbidding(*vals[dev->bidder], dev->bids).ok);
  }
}

TEST(Maxcut, TriangleWelfareIsWeightPlusCut)
{
  WeightedGraph const g(3, {{0, 1, Money(1)}, {1, 2, Money(2)}, {0, 2, Money(3)}});
  auto const vals = copies(g);
  EXPECT_EQ(welfare(cut(3, 0b001), vals), Money(6 + 4));
  EXPECT_EQ(welfare(cut(3, 0b010), vals), Money(6 + 3));
  EXPECT_EQ(welfare(cut(3, 0b000), vals), Money(6));
}

TEST(Maxcut, LocalMaximaCoincideWithFlipOptimalCuts)
{
  for (std::uint64_t seed = 0; seed < 30; ++seed)
  {
    int const n     = 3 + static_cast<int>(seed % 6);
    auto const g    = randomWeightedGraph(n, seed);
    auto const vals = copies(g);
    auto const a    = analyzeMaxcut(g);
    EXPECT_TRUE(a.coincide) << "seed " << seed;
    EXPECT_EQ(a.cuts, std::uint64_t{1} << n);
    std::uint64_t flip = 0, local = 0;
    for (std::uint64_t side = 0; side < (std::uint64_t{1} << n); ++side)
    {
      bool const f = oracle::flipOptimal(g, side);
      bool const l = localMaxCheck(vals, cut(n, side)).localMax;
      EXPECT_EQ(f, l) << "seed " << seed << " side " << side;
      flip += f ? 1 : 0;
      local += l ? 1 : 0;
    }
    EXPECT_EQ(a.flipOptimal, flip);
    EXPECT_EQ(a.localMaxima, local);
  }
}

TEST(Maxcut, LocalMaximaAreEquilibria)
{
  for (std::uint64_t seed = 0; seed < 20; ++seed)
  {
    int const n     = 3 + static_cast<int>(seed % 4);
    auto const g    = randomWeightedGraph(n, seed);
    auto const vals = copies(g);
    auto const a    = analyzeMaxcut(g);
    EXPECT_TRUE(a.allLocalMaximaEquilibria);
    EXPECT_EQ(a.verifiedEquilibria, a.localMaxima);
    for (std::uint64_t side = 0; side < (std::uint64_t{1} << n); ++side)
    {
      if (oracle::flipOptimal(g, side))
      {
        EXPECT_TRUE(oracle::isEquilibrium(vals, procedureBids(vals, cut(n, side)))) << "seed " << seed;
      }
    }
  }
}

TEST(Maxcut, TooLargeGraphIsACapabilityError)
{
  EXPECT_THROW(analyzeMaxcut(randomWeightedGraph(13, 1)), CapabilityError);
}

TEST(Maxcut, GapWitnessIsCertified)
{
  auto const search = equilibriumNotLocalMaxSearch(0, 40, 8);
  EXPECT_TRUE(search.stealBoundHeld);
  EXPECT_TRUE(search.allEquilibria);
  ASSERT_TRUE(search.witness.has_value());
  auto const& w   = *search.witness;
  auto const vals = copies(w.graph);
  EXPECT_TRUE(oracle::isEquilibrium(vals, w.bids));
  EXPECT_FALSE(localMaxCheck(vals, w.allocation).localMax);
  EXPECT_GT(w.move.gain, Money(0));
  EXPECT_LE(w.steals, static_cast<std::size_t>(w.graph.vertexCount()));
}
