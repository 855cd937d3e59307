#pragma once

#include "ssa/auction.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ssa {

/// v(S | A) = v(S + A) - v(A). Nested marginals collapse into one wrapper over the base.
class MarginalValuation final : public Valuation
{
public:
  MarginalValuation(ValuationPtr base, Bundle given);

  ValuationKind kind() const override
  {
    return ValuationKind::Marginal;
  }
  bool supportsOrderedClauses() const override
  {
    return base_->supportsOrderedClauses();
  }
  std::uint64_t queryCost() const override
  {
    return base_->queryCost();
  }
  const ValuationPtr& base() const
  {
    return base_;
  }
  Bundle given() const
  {
    return given_;
  }

protected:
  Money evaluate(Bundle bundle) const override;

private:
  ValuationPtr base_;
  Bundle given_;
  Money givenValue_;
};

/// v'(S) = v(S - T). Nested erasures collapse into one wrapper.
class ErasedValuation final : public Valuation
{
public:
  ErasedValuation(ValuationPtr base, Bundle erased);

  ValuationKind kind() const override
  {
    return ValuationKind::Erased;
  }
  bool supportsOrderedClauses() const override
  {
    return base_->supportsOrderedClauses();
  }
  std::uint64_t queryCost() const override
  {
    return base_->queryCost();
  }
  const ValuationPtr& base() const
  {
    return base_;
  }
  Bundle erased() const
  {
    return erased_;
  }

protected:
  Money evaluate(Bundle bundle) const override;

private:
  ValuationPtr base_;
  Bundle erased_;
};

ValuationPtr marginalOn(const ValuationPtr& base, Bundle given);
ValuationPtr erase(const ValuationPtr& base, Bundle erased);

struct CompetitorInfo
{
  /// Indexed by item; empty vectors for items outside the considered set.
  std::vector<std::vector<std::size_t>> competitors;
  std::vector<std::vector<std::size_t>> topCompetitors;

  bool isTop(std::size_t bidder, int item) const;
  bool isCompetitor(std::size_t bidder, int item) const;
  /// max |C_j|.
  std::size_t restriction() const;
};

/// C_j = {i : v_i({j}) > 0}; top competitors attain max_i v_i({j}) (all bidders when C_j is empty).
CompetitorInfo competitorInfo(std::span<const ValuationPtr> valuations, Bundle items,
                              QueryLedger* ledger = nullptr);

struct PreprocessResult
{
  Allocation allocation;
  /// Items nobody values; they sit with bidder 0.
  Bundle ignorable;
  std::uint64_t moves = 0;
};

/// Moves every item held by a non-competitor to its lowest-index top competitor and
/// parks items with no competitor at bidder 0.
PreprocessResult preprocessToCompetitors(std::span<const ValuationPtr> valuations, const Allocation& allocation,
                                         Bundle items, QueryLedger* ledger = nullptr);

enum class TopstealCase
{
  Empty,
  Base,
  TopHeld,
  Equilibrium,
  Steal,
};

std::string_view caseName(TopstealCase c);

struct RecursionNode
{
  int depth              = 0;
  int t                  = 0;
  int items              = 0;
  TopstealCase kind      = TopstealCase::Empty;
  std::uint64_t moves    = 0;
  /// Steals made at this node only.
  std::uint64_t ownSteals = 0;
  /// Steals in the whole subtree.
  std::uint64_t steals = 0;
  std::uint64_t bound  = 0;
  std::vector<std::size_t> children;
};

struct RecursionTrace
{
  std::vector<RecursionNode> nodes;  ///< nodes[0] is the root
  std::uint64_t steals = 0;
  int maxDepth         = 0;
  /// Non-empty only if a steal existed without a top-competitor steal.
  std::vector<std::string> diagnostics;
};

struct TopstealResult
{
  Allocation allocation;
  BidProfile bids;
  RecursionTrace trace;
};

/// C(m+t-1, t-1) - 1.
std::uint64_t stealCountBound(int m, int t);

/// Recursive top-competitor stealing on items M from an allocation of M. Throws
/// DomainError when some item has more than t competitors.
TopstealResult topsteal(std::span<const ValuationPtr> valuations, const Allocation& initial, Bundle items, int t,
                        QueryLedger* ledger = nullptr);

/// Convenience: all items, t = max |C_j| (at least 1).
TopstealResult topsteal(std::span<const ValuationPtr> valuations, const Allocation& initial,
                        QueryLedger* ledger = nullptr);

struct ComposedProfile
{
  Allocation allocation;
  BidProfile bids;
};

/// Adds item j to bidder i with b_i(j) = v_i({j}) and zero rival bids on j.
ComposedProfile composeTopItem(const Allocation& allocation, const BidProfile& bids, std::size_t bidder, int item,
                               std::span<const ValuationPtr> valuations);

}  // namespace ssa
