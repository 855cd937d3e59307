#include "oracles.hpp"

#include "ssa/errors.hpp"
#include "ssa/experiments.hpp"
#include "ssa/io.hpp"

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

WeightedGraph triangle()
{
  return WeightedGraph(3, {{0, 1, Money(1)}, {1, 2, Money(1)}, {0, 2, Money(1)}});
}

}  // namespace

TEST(Money, RoundTripsThroughText)
{
  Money const x(-7, 21);
  EXPECT_EQ(toString(x), "-1/3");
  EXPECT_EQ(parseMoney("-1/3"), x);
  EXPECT_EQ(parseMoney("4"), Money(4));
  EXPECT_THROW(parseMoney("1/0"), DomainError);
}

TEST(Bundle, TieRuleOrdersBySizeThenItems)
{
  EXPECT_TRUE(lexLess(of({0, 2}), of({1})));
  EXPECT_TRUE(lexLess(of({0}), of({0, 1})));
  EXPECT_TRUE(tieRuleLess(of({1}), of({0, 2})));
  EXPECT_FALSE(tieRuleLess(of({0, 1}), of({0, 1})));
  std::mt19937_64 rng(1);
  for (int r = 0; r < 2000; ++r)
  {
    Bundle const a(rng() & 0xFFFF), b(rng() & 0xFFFF);
    EXPECT_EQ(tieRuleLess(a, b), oracle::tieBefore(a.bits(), b.bits()));
  }
}

TEST(Families, BudgetAdditiveCapsAtBudget)
{
  BudgetAdditiveValuation const v(Money(3), money({2, 2}));
  EXPECT_EQ(v.value(of({0, 1})), Money(3));
  EXPECT_EQ(v.value(of({0})), Money(2));
  EXPECT_EQ(v.value(Bundle{}), Money(0));
}

TEST(Families, CoverageCountsIncidentEdges)
{
  CoverageValuation const v(triangle());
  EXPECT_EQ(v.value(of({0})), Money(2));
  EXPECT_EQ(v.value(of({0, 1})), Money(3));
  EXPECT_EQ(v.value(Bundle::full(3)), Money(3));
  EXPECT_EQ(v.value(Bundle{}), Money(0));
}

TEST(Families, EveryFamilyIsNormalized)
{
  std::mt19937_64 rng(2);
  for (int r = 0; r < 30; ++r)
  {
    EXPECT_EQ(randomSubmodular(6, rng)->value(Bundle{}), Money(0));
  }
  AdditiveValuation const a(money({3, 1}));
  EXPECT_EQ(a.value(Bundle{}), Money(0));
}

TEST(Families, TableRejectsNonMonotoneValues)
{
  EXPECT_THROW(TableValuation(1, money({0, -1})), DomainError);
  EXPECT_THROW(TableValuation(2, money({0, 2, 1, 1})), DomainError);
}

TEST(Demand, AdditiveTakesProfitableItems)
{
  AdditiveValuation const v(money({3, 1}));
  std::vector<Money> const prices = money({2, 2});
  EXPECT_EQ(demand(v, prices), of({0}));
}

TEST(Demand, ZeroPricesGiveSmallestMaximizer)
{
  BudgetAdditiveValuation const v(Money(3), money({2, 2, 2}));
  std::vector<Money> const prices(3, Money(0));
  EXPECT_EQ(demand(v, prices), of({0, 1}));
}

TEST(Demand, MatchesEnumerationOnRandomInstances)
{
  std::mt19937_64 rng(3);
  for (int r = 0; r < 200; ++r)
  {
    auto const v = randomSubmodular(7, rng);
    std::vector<Money> prices(7);
    for (auto& p : prices)
    {
      p = Money(static_cast<long>(rng() % 9), 2);
    }
    EXPECT_EQ(demand(*v, prices).bits(), oracle::demand(oracle::valueOf(*v), 7, prices));
    EXPECT_EQ(exhaustiveDemand(*v, prices).bits(), oracle::demand(oracle::valueOf(*v), 7, prices));
  }
}

TEST(Demand, LedgerCountsOneDemandQuery)
{
  AdditiveValuation const v(money({3, 1}));
  QueryLedger ledger(1);
  std::vector<Money> const prices = money({2, 2});
  demand(v, prices, &ledger, 0);
  EXPECT_EQ(ledger.total().demand, 1U);
  value(v, of({0}), &ledger, 0);
  EXPECT_EQ(ledger.total().value, 1U);
}

TEST(XosClause, BudgetAdditiveMarginals)
{
  BudgetAdditiveValuation const v(Money(3), money({2, 2}));
  std::vector<int> const order{0, 1};
  auto const c = xosClause(v, of({0, 1}), order);
  EXPECT_EQ(c.at(0), Money(2));
  EXPECT_EQ(c.at(1), Money(1));
  std::vector<int> const reversed{1, 0};
  auto const d = xosClause(v, of({0, 1}), reversed);
  EXPECT_EQ(d.at(0), Money(1));
  EXPECT_EQ(d.at(1), Money(2));
}

TEST(XosClause, AdditiveIsRestriction)
{
  AdditiveValuation const v(money({3, 1, 4}));
  std::vector<int> const order{2, 0};
  auto const c = xosClause(v, of({0, 2}), order);
  EXPECT_EQ(c.at(0), Money(3));
  EXPECT_EQ(c.at(1), Money(0));
  EXPECT_EQ(c.at(2), Money(4));
}

TEST(XosClause, SubmodularClausesSumToValueAndSupportFromBelow)
{
  std::mt19937_64 rng(4);
  for (int r = 0; r < 40; ++r)
  {
    auto const v   = randomSubmodular(6, rng);
    Bundle const s(rng() & 0x3F);
    std::vector<int> order{0, 1, 2, 3, 4, 5};
    std::shuffle(order.begin(), order.end(), rng);
    std::erase_if(order, [&](int j) { return !s.contains(j); });
    auto const c = xosClause(*v, s, order);
    EXPECT_EQ(c.total(s), v->value(s));
    for (std::uint64_t t = 0; t < 64; ++t)
    {
      EXPECT_LE(c.total(Bundle(t)), v->value(Bundle(t)));
    }
  }
}

TEST(ClassCheck, SquareIsNotSubmodular)
{
  TableValuation const v(3, money({0, 1, 1, 4, 1, 4, 4, 9}));
  auto const check = verifyClass(v, ValuationClass::Submodular);
  EXPECT_FALSE(check.holds);
  ASSERT_TRUE(check.witness.has_value());
  EXPECT_TRUE(check.witness->first.isSubsetOf(check.witness->second));
}

TEST(ClassCheck, GeneratedFamiliesAreSubmodular)
{
  std::mt19937_64 rng(5);
  for (int r = 0; r < 60; ++r)
  {
    auto const v = randomSubmodular(6, rng);
    EXPECT_TRUE(verifyClass(*v, ValuationClass::Submodular).holds);
    EXPECT_TRUE(oracle::submodular(oracle::valueOf(*v), 6));
  }
  BudgetAdditiveValuation const b(Money(5), money({2, 3, 1, 4, 2, 2}));
  EXPECT_TRUE(verifyClass(b, ValuationClass::Submodular).holds);
}

TEST(ClassCheck, AgreesWithOracleOnRandomMonotoneTables)
{
  std::mt19937_64 rng(6);
  int disagreements = 0;
  int nonSubmodular = 0;
  for (int r = 0; r < 200; ++r)
  {
    int const m = 4;
    std::vector<Money> values(16, Money(0));
    for (std::uint64_t s = 1; s < 16; ++s)
    {
      Money lower = 0;
      for (int j = 0; j < m; ++j)
      {
        if ((s >> j) & 1U)
        {
          lower = std::max(lower, values[s & ~(std::uint64_t{1} << j)]);
        }
      }
      values[s] = lower + Money(static_cast<long>(rng() % 3));
    }
    TableValuation const v(m, values);
    auto const fn = oracle::valueOf(v);
    bool const sub = oracle::submodular(fn, m);
    nonSubmodular += sub ? 0 : 1;
    disagreements += verifyClass(v, ValuationClass::Submodular).holds != sub ? 1 : 0;
    disagreements += verifyClass(v, ValuationClass::Subadditive).holds != oracle::subadditive(fn, m) ? 1 : 0;
    disagreements += verifyClass(v, ValuationClass::Monotone).holds != oracle::monotone(fn, m) ? 1 : 0;
  }
  EXPECT_EQ(disagreements, 0);
  EXPECT_GT(nonSubmodular, 0);
}

TEST(ClassCheck, XosHoldsForSubmodularAndFailsForSquare)
{
  BudgetAdditiveValuation const b(Money(3), money({2, 2, 1}));
  EXPECT_TRUE(verifyClass(b, ValuationClass::Xos).holds);
  TableValuation const sq(3, money({0, 1, 1, 4, 1, 4, 4, 9}));
  EXPECT_FALSE(verifyClass(sq, ValuationClass::Xos).holds);
}

TEST(ClassCheck, LargeItemCountIsACapabilityError)
{
  AdditiveValuation const v(std::vector<Money>(13, Money(1)));
  EXPECT_THROW(verifyClass(v, ValuationClass::Submodular), CapabilityError);
}

TEST(Io, ValuationsRoundTripThroughJson)
{
  std::mt19937_64 rng(7);
  std::vector<ValuationPtr> vals;
  for (int r = 0; r < 12; ++r)
  {
    vals.push_back(randomSubmodular(5, rng));
  }
  vals.push_back(std::make_shared<AdditiveValuation>(money({3, 1, 2, 0, 5})));
  std::vector<AdditiveClause> clauses{AdditiveClause({{0, Money(1)}, {1, Money(2)}}),
                                      AdditiveClause({{2, Money(3)}})};
  vals.push_back(std::make_shared<XosValuation>(5, clauses));
  for (auto const& v : vals)
  {
    auto const back = valuationFromJson(v->toJson());
    EXPECT_EQ(back->kind(), v->kind());
    for (std::uint64_t s = 0; s < 32; ++s)
    {
      EXPECT_EQ(back->value(Bundle(s)), v->value(Bundle(s)));
    }
  }
}

TEST(Io, MalformedInstanceIsRejected)
{
  nlohmann::json j = instanceToJson(generate(Family::BudgetAdditive, GenParams{2, 4}, 1));
  j["allocation"]  = nlohmann::json::array({{0, 1}, {1, 2, 3}});
  EXPECT_THROW(instanceFromJson(j), DomainError);
  j.erase("allocation");
  j["m"] = 5;
  EXPECT_THROW(instanceFromJson(j), DomainError);
}
