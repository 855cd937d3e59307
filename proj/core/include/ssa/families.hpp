#pragma once

#include "ssa/valuation.hpp"

#include <vector>

namespace ssa {

/// Explicit table of 2^m values (m <= 20). Construction validates normalization,
/// non-negativity and monotonicity.
class TableValuation final : public Valuation
{
public:
  TableValuation(int m, std::vector<Money> values);

  ValuationKind kind() const override
  {
    return ValuationKind::Table;
  }
  /// Tables carry no structure; callers that build them from submodular functions
  /// opt in to ordering-based clauses.
  bool supportsOrderedClauses() const override
  {
    return submodularHint_;
  }
  void markSubmodular(bool hint)
  {
    submodularHint_ = hint;
  }
  const std::vector<Money>& values() const
  {
    return values_;
  }
  nlohmann::json toJson() const override;

protected:
  Money evaluate(Bundle bundle) const override;

private:
  std::vector<Money> values_;
  bool submodularHint_ = false;
};

class AdditiveValuation final : public Valuation
{
public:
  explicit AdditiveValuation(std::vector<Money> perItem);

  ValuationKind kind() const override
  {
    return ValuationKind::Additive;
  }
  bool supportsOrderedClauses() const override
  {
    return true;
  }
  std::optional<Bundle> closedFormDemand(std::span<const Money> prices) const override;
  const std::vector<Money>& items() const
  {
    return perItem_;
  }
  nlohmann::json toJson() const override;

protected:
  Money evaluate(Bundle bundle) const override;

private:
  std::vector<Money> perItem_;
};

/// v(S) = min(budget, sum of item values over S).
class BudgetAdditiveValuation final : public Valuation
{
public:
  BudgetAdditiveValuation(Money budget, std::vector<Money> perItem);

  ValuationKind kind() const override
  {
    return ValuationKind::BudgetAdditive;
  }
  bool supportsOrderedClauses() const override
  {
    return true;
  }
  const Money& budget() const
  {
    return budget_;
  }
  const std::vector<Money>& items() const
  {
    return perItem_;
  }
  const Money& itemValue(int item) const
  {
    return perItem_.at(static_cast<std::size_t>(item));
  }
  nlohmann::json toJson() const override;

protected:
  Money evaluate(Bundle bundle) const override;

private:
  Money budget_;
  std::vector<Money> perItem_;
};

/// Pointwise maximum of explicitly listed additive clauses.
class XosValuation final : public Valuation
{
public:
  XosValuation(int m, std::vector<AdditiveClause> clauses);

  ValuationKind kind() const override
  {
    return ValuationKind::Xos;
  }
  /// Returns the first stored clause attaining the maximum on S.
  std::optional<AdditiveClause> storedClause(Bundle bundle) const override;
  const std::vector<AdditiveClause>& clauses() const
  {
    return clauses_;
  }
  nlohmann::json toJson() const override;

protected:
  Money evaluate(Bundle bundle) const override;

private:
  std::vector<AdditiveClause> clauses_;
};

struct WeightedEdge
{
  int u = 0;
  int v = 0;
  Money weight;
};

/// Undirected graph with non-negative rational edge weights and no self-loops.
class WeightedGraph
{
public:
  WeightedGraph() = default;
  WeightedGraph(int vertices, std::vector<WeightedEdge> edges);

  int vertexCount() const
  {
    return vertices_;
  }
  const std::vector<WeightedEdge>& edges() const
  {
    return edges_;
  }
  Money totalWeight() const;
  /// Weight of edges with exactly one endpoint in `side`.
  Money cutWeight(Bundle side) const;

private:
  int vertices_ = 0;
  std::vector<WeightedEdge> edges_;
};

/// Items are vertices; v(S) is the weight of edges with at least one endpoint in S.
class CoverageValuation final : public Valuation
{
public:
  explicit CoverageValuation(WeightedGraph graph);

  ValuationKind kind() const override
  {
    return ValuationKind::Coverage;
  }
  bool supportsOrderedClauses() const override
  {
    return true;
  }
  const WeightedGraph& graph() const
  {
    return graph_;
  }
  nlohmann::json toJson() const override;

protected:
  Money evaluate(Bundle bundle) const override;

private:
  WeightedGraph graph_;
};

}  // namespace ssa
