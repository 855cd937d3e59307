#include "oracles.hpp"

#include "ssa/errors.hpp"
#include "ssa/hardness.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace ssa;

namespace {

Bundle randomOfSize(int m, int size, std::mt19937_64& rng)
{
  std::vector<int> items(static_cast<std::size_t>(m));
  std::iota(items.begin(), items.end(), 0);
  std::shuffle(items.begin(), items.end(), rng);
  Bundle b;
  for (int c = 0; c < size; ++c)
  {
    b = b.with(items[static_cast<std::size_t>(c)]);
  }
  return b;
}

Money randomK(std::mt19937_64& rng)
{
  return Money(static_cast<long>(1 + rng() % 24), 100);
}

SensitiveValuation randomSensitive(int m, SensitiveParams params, std::mt19937_64& rng, int entries = 20)
{
  int const half = m / 2;
  SensitiveMap map;
  for (int e = 0; e < entries; ++e)
  {
    Bundle const b = randomOfSize(m, half + 1, rng);
    auto const items = b.items();
    int const item   = rng() % 2 == 0 ? -1 : items[rng() % items.size()];
    map[b.bits()]    = SensitiveEntry{randomK(rng), item};
  }
  return SensitiveValuation(m, std::move(map), randomK(rng), params);
}

SensitiveParams smallParams(int m)
{
  return SensitiveParams{std::min(2, m / 2 - 1), 3};
}

std::vector<Money> randomPrices(int m, std::mt19937_64& rng)
{
  std::vector<Money> prices(static_cast<std::size_t>(m));
  for (auto& p : prices)
  {
    p = Money(static_cast<long>(rng() % 400), 97);
  }
  return prices;
}

Money profit(const Valuation& v, Bundle b, std::span<const Money> prices)
{
  Money p = 0;
  b.forEachItem([&](int j) { p += prices[static_cast<std::size_t>(j)]; });
  return v.value(b) - p;
}

}  // namespace

TEST(Sensitive, ValueMatchesLiteralClauseMaximum)
{
  std::mt19937_64 rng(1);
  for (int m : {7, 9, 11})
  {
    for (int r = 0; r < 4; ++r)
    {
      auto const v = randomSensitive(m, smallParams(m), rng);
      for (std::uint64_t s = 0; s < (std::uint64_t{1} << m); ++s)
      {
        ASSERT_EQ(v.value(Bundle(s)), oracle::clauseMax(v, s)) << "m " << m << " S " << s;
      }
    }
  }
}

TEST(Sensitive, ValueMatchesFamilyMaximumAtLiteralSizes)
{
  std::mt19937_64 rng(2);
  for (int m : {43, 45, 53})
  {
    auto const v = randomSensitive(m, {}, rng, 200);
    for (int r = 0; r < 400; ++r)
    {
      Bundle const s = randomOfSize(m, static_cast<int>(rng() % (m + 1)), rng);
      EXPECT_EQ(v.value(s), oracle::analyticClauseMax(v, s.bits())) << "m " << m;
    }
  }
}

TEST(Sensitive, ClosedFormValues)
{
  std::mt19937_64 rng(3);
  auto const v   = randomSensitive(45, {}, rng);
  int const half = 22;
  EXPECT_EQ(sensitiveValue(v, Bundle{}), Money(0));
  EXPECT_EQ(sensitiveValue(v, randomOfSize(45, 1, rng)), Money(2));
  EXPECT_EQ(sensitiveValue(v, randomOfSize(45, half, rng)), Money(half));
  EXPECT_EQ(sensitiveValue(v, randomOfSize(45, half + 10, rng)), Money(half + 1));
  EXPECT_EQ(sensitiveValue(v, Bundle::full(45)), Money(half + 1));
  Bundle const s = randomOfSize(45, half + 1, rng);
  EXPECT_EQ(sensitiveValue(v, s), Money(half) + Money(1, 4) + v.k(s));
}

TEST(Sensitive, ClosedFormMatchesClauseMaximumAboveTwentySix)
{
  std::mt19937_64 rng(4);
  for (int m : {53, 55})
  {
    for (int r = 0; r < 40; ++r)
    {
      auto const v   = randomSensitive(m, {}, rng, 20);
      int const size = m / 2 + 1 + static_cast<int>(rng() % 9);
      Bundle const s = randomOfSize(m, size, rng);
      EXPECT_EQ(sensitiveValue(v, s), oracle::analyticClauseMax(v, s.bits())) << "m " << m << " |S| " << size;
    }
  }
}

TEST(Sensitive, ClosedFormMatchesClauseMaximumAtFortyFive)
{
  std::mt19937_64 rng(5);
  for (int r = 0; r < 40; ++r)
  {
    auto const v   = randomSensitive(45, {}, rng, 20);
    int const size = 23 + static_cast<int>(rng() % 9);
    Bundle const s = randomOfSize(45, size, rng);
    EXPECT_EQ(sensitiveValue(v, s), oracle::analyticClauseMax(v, s.bits())) << "|S| " << size << " k " << v.defaultK();
  }
}

TEST(Sensitive, RejectsBadParameters)
{
  EXPECT_THROW(SensitiveValuation(41, {}, Money(1, 8)), DomainError);
  EXPECT_THROW(SensitiveValuation(44, {}, Money(1, 8)), DomainError);
  EXPECT_THROW(SensitiveValuation(43, {}, Money(1, 4)), DomainError);
  SensitiveMap bad{{Bundle::full(3).bits(), SensitiveEntry{Money(1, 8), -1}}};
  EXPECT_THROW(SensitiveValuation(43, bad, Money(1, 8)), DomainError);
}

TEST(Sensitive, StandardClausesSupportTheValue)
{
  std::mt19937_64 rng(6);
  int const m  = 9;
  auto const v = randomSensitive(m, smallParams(m), rng);
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << m); ++s)
  {
    auto const c = sensitiveClause(v, Bundle(s));
    ASSERT_EQ(c.clause.total(Bundle(s)), v.value(Bundle(s))) << "S " << s;
    for (int r = 0; r < 8; ++r)
    {
      Bundle const t(rng() & ((std::uint64_t{1} << m) - 1));
      ASSERT_LE(c.clause.total(t), v.value(t));
    }
  }
}

TEST(Sensitive, ClauseFamiliesBySize)
{
  std::mt19937_64 rng(7);
  auto const v   = randomSensitive(43, {}, rng);
  int const half = 21;
  EXPECT_EQ(sensitiveClause(v, randomOfSize(43, 1, rng)).family, ClauseFamily::C);
  EXPECT_EQ(sensitiveClause(v, randomOfSize(43, half, rng)).family, ClauseFamily::A);
  Bundle const s = randomOfSize(43, half + 1, rng);
  auto const c   = sensitiveClause(v, s);
  EXPECT_EQ(c.family, ClauseFamily::M);
  EXPECT_EQ(c.base, s);
  EXPECT_TRUE(s.contains(c.item));
  EXPECT_EQ(sensitiveClause(v, Bundle::full(43)).family, ClauseFamily::B);
}

TEST(SparseDemand, MatchesEnumerationOnSmallInstances)
{
  std::mt19937_64 rng(8);
  for (int m : {7, 9, 11})
  {
    for (int r = 0; r < 30; ++r)
    {
      auto const v      = randomSensitive(m, smallParams(m), rng);
      auto const prices = randomPrices(m, rng);
      Bundle const got  = sparseDemandOracle(v, prices);
      Bundle const want(oracle::demand(oracle::valueOf(v), m, prices));
      EXPECT_EQ(profit(v, got, prices), profit(v, want, prices)) << "m " << m;
    }
  }
}

TEST(SparseDemand, ExtremePrices)
{
  std::mt19937_64 rng(9);
  auto const v = randomSensitive(43, {}, rng);
  std::vector<Money> const huge(43, Money(1000));
  EXPECT_TRUE(sparseDemandOracle(v, huge).empty());
  std::vector<Money> const zero(43, Money(0));
  Bundle const d = sparseDemandOracle(v, zero);
  EXPECT_EQ(v.value(d), Money(22));
  EXPECT_EQ(d.size(), 21 + 10);
  std::vector<Money> const shortPrices(42, Money(0));
  EXPECT_THROW(sparseDemandOracle(v, shortPrices), DomainError);
}

TEST(LocalMax, NeighbourComparison)
{
  int const m = 43;
  Bundle s;
  for (int j = 0; j < 22; ++j)
  {
    s = s.with(j);
  }
  Bundle const neighbour = (Bundle::full(m) - s).with(0);
  SensitiveMap high{{s.bits(), SensitiveEntry{Money(1, 5), 0}}};
  SensitiveValuation const v(m, high, Money(1, 10));
  EXPECT_TRUE(isJLocalMax(v, s, 0));
  EXPECT_FALSE(isJLocalMax(v, neighbour, 0));
  auto const cert = localMaxCertificate(v, s);
  ASSERT_TRUE(cert.has_value());
  EXPECT_EQ(cert->item, 0);
  EXPECT_GE(cert->value, cert->neighbourValue);
  EXPECT_THROW(isJLocalMax(v, s.without(0), 1), DomainError);
  EXPECT_THROW(isJLocalMax(v, s, 30), DomainError);
}

TEST(EquilibriumCharacterization, Cases)
{
  int const m = 43;
  Bundle s;
  for (int j = 0; j < 22; ++j)
  {
    s = s.with(j);
  }
  SensitiveMap high{{s.bits(), SensitiveEntry{Money(1, 5), 0}}};
  SensitiveValuation const v(m, high, Money(1, 10));
  Allocation a;
  a.bundles = {s, Bundle::full(m) - s};
  EXPECT_TRUE(eqCharCheck(a, v));
  std::swap(a.bundles[0], a.bundles[1]);
  EXPECT_TRUE(eqCharCheck(a, v));
  SensitiveMap low{{s.bits(), SensitiveEntry{Money(1, 20), 0}}};
  SensitiveValuation const w(m, low, Money(1, 10));
  EXPECT_FALSE(eqCharCheck(a, w));
  Allocation uneven;
  uneven.bundles = {s.without(0), (Bundle::full(m) - s).with(0)};
  EXPECT_FALSE(eqCharCheck(uneven, v));
  Allocation three;
  three.bundles = {s, Bundle{}, Bundle::full(m) - s};
  EXPECT_THROW(eqCharCheck(three, v), DomainError);
}

TEST(CoverBound, Values)
{
  EXPECT_EQ(coverBoundFormula(1), BigInt(1000));
  EXPECT_EQ(coverBoundFormula(2), BigInt(1000) * boost::multiprecision::pow(BigInt(2), 765));
  EXPECT_EQ(coverBoundFormula(10), BigInt(1000) * boost::multiprecision::pow(BigInt(10), 765));
  EXPECT_THROW(coverBoundFormula(0), DomainError);
}

TEST(CheapestSubsets, EnumeratesInPriceOrder)
{
  std::mt19937_64 rng(10);
  auto const prices = randomPrices(8, rng);
  CheapestSubsets gen(prices, 3);
  std::vector<Money> seen;
  std::size_t count = 0;
  while (auto next = gen.next())
  {
    EXPECT_EQ(next->first.size(), 3);
    Money p = 0;
    next->first.forEachItem([&](int j) { p += prices[static_cast<std::size_t>(j)]; });
    EXPECT_EQ(p, next->second);
    if (!seen.empty())
    {
      EXPECT_GE(p, seen.back());
    }
    seen.push_back(p);
    ++count;
  }
  EXPECT_EQ(count, oracle::binom(8, 3));
}

TEST(OddGraph, NeighboursMatchDefinition)
{
  std::mt19937_64 rng(11);
  for (int m : {5, 7, 9, 11})
  {
    for (int r = 0; r < 10; ++r)
    {
      Bundle const s = randomOfSize(m, m / 2 + 1, rng);
      std::vector<std::uint64_t> got;
      for (auto const& b : oddGraphNeighbours(s, m))
      {
        got.push_back(b.bits());
      }
      auto want = oracle::oddNeighbours(s.bits(), m);
      std::sort(got.begin(), got.end());
      std::sort(want.begin(), want.end());
      EXPECT_EQ(got, want);
      EXPECT_EQ(got.size(), static_cast<std::size_t>(m / 2 + 1));
    }
  }
}

TEST(OddGraph, DistanceAndBalls)
{
  int const m = 7;
  auto const vertices = oddGraphVertices(4);
  EXPECT_EQ(vertices.size(), oracle::binom(7, 4));
  Bundle const s = vertices.front();
  for (auto const& t : vertices)
  {
    int const d = oddGraphDistance(s, t, m);
    EXPECT_EQ(d == 0, s == t);
    EXPECT_EQ(d == 1, oracle::popcount(s.bits() & t.bits()) == 1);
  }
  EXPECT_EQ(oddGraphBallSize(4, 0), BigInt(1));
  EXPECT_EQ(oddGraphBallSize(4, 1), BigInt(5));
  EXPECT_EQ(oddGraphBallSize(4, 7), BigInt(35));
}

TEST(Isoperimetric, ExhaustiveMatchesOracle)
{
  auto const report = isoperimetricExhaustive(3);
  auto const want   = oracle::maxInternalEdges(3);
  ASSERT_EQ(report.maxInternal.size(), want.size());
  for (std::size_t k = 0; k < want.size(); ++k)
  {
    EXPECT_EQ(report.maxInternal[k], static_cast<std::uint64_t>(want[k])) << "k " << k;
  }
  EXPECT_EQ(report.maxInternal[2], 1U);
  EXPECT_TRUE(report.edgeBound);
  EXPECT_TRUE(report.neighbourBound);
}

TEST(Isoperimetric, SampledBoundsHold)
{
  auto const report = isoperimetricSampled(4, 2000, 1);
  EXPECT_EQ(report.maxInternal[2], 1U);
  EXPECT_TRUE(report.edgeBound);
  EXPECT_TRUE(report.neighbourBound);
}

TEST(Isoperimetric, BoundPredicates)
{
  EXPECT_TRUE(edgeBoundHolds(0, 1));
  EXPECT_FALSE(edgeBoundHolds(1, 1));
  EXPECT_TRUE(edgeBoundHolds(1, 2));
  EXPECT_FALSE(edgeBoundHolds(2, 2));
  EXPECT_TRUE(neighbourBoundHolds(3, 4, 4));
}

TEST(Adversary, Constants)
{
  EXPECT_EQ(componentThreshold(21), BigInt(27555));
  EXPECT_EQ(queryLowerBound(21), BigInt(1313));
  OddGraphAdversary const adv(43);
  EXPECT_EQ(adv.threshold(), BigInt(27555));
  EXPECT_THROW(queryLowerBound(0), DomainError);
}

TEST(Adversary, ReplaysAndAudits)
{
  std::mt19937_64 rng(12);
  OddGraphAdversary adv(43);
  std::vector<std::pair<Bundle, Money>> answers;
  for (int r = 0; r < 40; ++r)
  {
    Bundle const s = randomOfSize(43, 22, rng);
    auto const a   = adv.query(s);
    EXPECT_TRUE(s.contains(a.clauseItem));
    EXPECT_EQ(a.clause.total(s), a.value);
    answers.emplace_back(s, a.value);
  }
  for (auto const& [s, value] : answers)
  {
    auto const again = adv.query(s);
    EXPECT_TRUE(again.replay);
    EXPECT_EQ(again.value, value);
  }
  EXPECT_TRUE(auditTranscript(adv).ok) << auditTranscript(adv).message;
  auto const realized = adv.realized();
  for (auto const& [s, value] : answers)
  {
    EXPECT_EQ(realized->value(s), value);
  }
  EXPECT_EQ(adv.value(randomOfSize(43, 1, rng)), Money(1));
  EXPECT_EQ(adv.value(randomOfSize(43, 5, rng)), Money(5));
  EXPECT_EQ(adv.value(Bundle::full(43)), Money(22));
  EXPECT_THROW(adv.value(randomOfSize(43, 25, rng)), DomainError);
}

TEST(Adversary, SearchersNeverBeatTheBound)
{
  for (auto algorithm : {SearchAlgorithm::HillClimb, SearchAlgorithm::RandomProbe, SearchAlgorithm::BestReply})
  {
    for (std::uint64_t seed = 0; seed < 3; ++seed)
    {
      auto const report = runSearcher(11, algorithm, 300, seed);
      EXPECT_TRUE(report.audit.ok) << report.audit.message;
      if (report.found && !report.conceded)
      {
        EXPECT_GE(BigInt(report.queries), report.bound) << algorithmName(algorithm);
      }
    }
  }
}

TEST(Adversary, LiteralSizeSearchFindsNothingCheaply)
{
  auto const report = runSearcher(43, SearchAlgorithm::HillClimb, 200, 1);
  EXPECT_TRUE(report.audit.ok) << report.audit.message;
  EXPECT_FALSE(report.found.has_value());
  EXPECT_EQ(report.bound, BigInt(1313));
}
