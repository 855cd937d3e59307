#include "ssa/families.hpp"

#include "ssa/errors.hpp"

#include <nlohmann/json.hpp>

namespace ssa {

namespace {

nlohmann::json moneyArray(const std::vector<Money>& values)
{
  auto out = nlohmann::json::array();
  for (auto const& v : values)
  {
    out.push_back(toString(v));
  }
  return out;
}

void requireNonNegative(const std::vector<Money>& values, const char* what)
{
  for (auto const& v : values)
  {
    if (v < 0)
    {
      throw DomainError(std::string(what) + " must be non-negative");
    }
  }
}

}  // namespace

TableValuation::TableValuation(int m, std::vector<Money> values)
  : Valuation(m)
  , values_(std::move(values))
{
  if (m > kMaxTableItems)
  {
    throw CapabilityError("table valuations are capped at m <= 20");
  }
  std::uint64_t const count = std::uint64_t{1} << m;
  if (values_.size() != count)
  {
    throw DomainError("table valuation needs exactly 2^m values");
  }
  if (values_[0] != 0)
  {
    throw DomainError("table valuation must be normalized (v(empty) = 0)");
  }
  for (std::uint64_t s = 0; s < count; ++s)
  {
    if (values_[s] < 0)
    {
      throw DomainError("table values must be non-negative");
    }
    for (int j = 0; j < m; ++j)
    {
      std::uint64_t const bit = std::uint64_t{1} << j;
      if (!(s & bit) && values_[s | bit] < values_[s])
      {
        throw DomainError("table valuation is not monotone at " + toString(Bundle(s)) + " + " +
                          std::to_string(j));
      }
    }
  }
}

Money TableValuation::evaluate(Bundle bundle) const
{
  return values_[bundle.bits()];
}

nlohmann::json TableValuation::toJson() const
{
  return {{"kind", "table"}, {"m", itemCount()}, {"submodular", submodularHint_},
          {"values", moneyArray(values_)}};
}

AdditiveValuation::AdditiveValuation(std::vector<Money> perItem)
  : Valuation(static_cast<int>(perItem.size()))
  , perItem_(std::move(perItem))
{
  requireNonNegative(perItem_, "additive item values");
}

Money AdditiveValuation::evaluate(Bundle bundle) const
{
  Money out = 0;
  bundle.forEachItem([&](int j) { out += perItem_[static_cast<std::size_t>(j)]; });
  return out;
}

std::optional<Bundle> AdditiveValuation::closedFormDemand(std::span<const Money> prices) const
{
  // Items priced exactly at value are left out by the smallest-cardinality rule.
  Bundle out;
  for (int j = 0; j < itemCount(); ++j)
  {
    if (perItem_[static_cast<std::size_t>(j)] > prices[static_cast<std::size_t>(j)])
    {
      out = out.with(j);
    }
  }
  return out;
}

nlohmann::json AdditiveValuation::toJson() const
{
  return {{"kind", "additive"}, {"m", itemCount()}, {"items", moneyArray(perItem_)}};
}

BudgetAdditiveValuation::BudgetAdditiveValuation(Money budget, std::vector<Money> perItem)
  : Valuation(static_cast<int>(perItem.size()))
  , budget_(std::move(budget))
  , perItem_(std::move(perItem))
{
  if (budget_ < 0)
  {
    throw DomainError("budget must be non-negative");
  }
  requireNonNegative(perItem_, "budget-additive item values");
}

Money BudgetAdditiveValuation::evaluate(Bundle bundle) const
{
  Money out = 0;
  bundle.forEachItem([&](int j) { out += perItem_[static_cast<std::size_t>(j)]; });
  return out < budget_ ? out : budget_;
}

nlohmann::json BudgetAdditiveValuation::toJson() const
{
  return {{"kind", "budget_additive"}, {"m", itemCount()}, {"budget", toString(budget_)},
          {"items", moneyArray(perItem_)}};
}

XosValuation::XosValuation(int m, std::vector<AdditiveClause> clauses)
  : Valuation(m)
  , clauses_(std::move(clauses))
{
  for (auto const& clause : clauses_)
  {
    for (auto const& entry : clause.entries())
    {
      if (entry.first >= m)
      {
        throw DomainError("XOS clause mentions an item >= m");
      }
    }
  }
}

Money XosValuation::evaluate(Bundle bundle) const
{
  Money best = 0;
  for (auto const& clause : clauses_)
  {
    Money const v = clause.total(bundle);
    if (v > best)
    {
      best = v;
    }
  }
  return best;
}

std::optional<AdditiveClause> XosValuation::storedClause(Bundle bundle) const
{
  checkBundle(bundle);
  if (clauses_.empty())
  {
    return AdditiveClause{};
  }
  std::size_t bestIndex = 0;
  Money best            = clauses_[0].total(bundle);
  for (std::size_t k = 1; k < clauses_.size(); ++k)
  {
    Money const v = clauses_[k].total(bundle);
    if (v > best)
    {
      best      = v;
      bestIndex = k;
    }
  }
  return clauses_[bestIndex];
}

nlohmann::json XosValuation::toJson() const
{
  auto clauses = nlohmann::json::array();
  for (auto const& clause : clauses_)
  {
    std::vector<Money> dense(static_cast<std::size_t>(itemCount()));
    for (auto const& [item, weight] : clause.entries())
    {
      dense[static_cast<std::size_t>(item)] = weight;
    }
    clauses.push_back(moneyArray(dense));
  }
  return {{"kind", "xos"}, {"m", itemCount()}, {"clauses", clauses}};
}

WeightedGraph::WeightedGraph(int vertices, std::vector<WeightedEdge> edges)
  : vertices_(vertices)
  , edges_(std::move(edges))
{
  if (vertices < 0 || vertices > kMaxItems)
  {
    throw DomainError("graph vertex count must lie in [0, 64]");
  }
  for (auto const& e : edges_)
  {
    if (e.u < 0 || e.v < 0 || e.u >= vertices || e.v >= vertices)
    {
      throw DomainError("edge endpoint out of range");
    }
    if (e.u == e.v)
    {
      throw DomainError("self-loops are not allowed");
    }
    if (e.weight < 0)
    {
      throw DomainError("edge weights must be non-negative");
    }
  }
}

Money WeightedGraph::totalWeight() const
{
  Money out = 0;
  for (auto const& e : edges_)
  {
    out += e.weight;
  }
  return out;
}

Money WeightedGraph::cutWeight(Bundle side) const
{
  Money out = 0;
  for (auto const& e : edges_)
  {
    if (side.contains(e.u) != side.contains(e.v))
    {
      out += e.weight;
    }
  }
  return out;
}

CoverageValuation::CoverageValuation(WeightedGraph graph)
  : Valuation(graph.vertexCount())
  , graph_(std::move(graph))
{}

Money CoverageValuation::evaluate(Bundle bundle) const
{
  Money out = 0;
  for (auto const& e : graph_.edges())
  {
    if (bundle.contains(e.u) || bundle.contains(e.v))
    {
      out += e.weight;
    }
  }
  return out;
}

nlohmann::json CoverageValuation::toJson() const
{
  auto edges = nlohmann::json::array();
  for (auto const& e : graph_.edges())
  {
    edges.push_back({e.u, e.v, toString(e.weight)});
  }
  return {{"kind", "coverage"}, {"m", itemCount()}, {"edges", edges}};
}

}  // namespace ssa
