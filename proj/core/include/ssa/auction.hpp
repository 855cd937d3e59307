#pragma once

#include "ssa/valuation.hpp"

#include <optional>
#include <span>
#include <vector>

namespace ssa {

/// n x m matrix of non-negative bids.
class BidProfile
{
public:
  BidProfile() = default;
  BidProfile(std::size_t bidders, int items);

  std::size_t bidders() const
  {
    return n_;
  }
  int items() const
  {
    return m_;
  }
  const Money& at(std::size_t bidder, int item) const;
  /// Throws DomainError on negative amounts.
  void set(std::size_t bidder, int item, Money amount);
  std::span<const Money> row(std::size_t bidder) const;
  std::vector<Money> rowCopy(std::size_t bidder) const;
  /// Highest bid on the item among all bidders.
  Money price(int item) const;
  std::vector<Money> prices() const;

  friend bool operator==(const BidProfile&, const BidProfile&) = default;

private:
  std::size_t index(std::size_t bidder, int item) const;

  std::size_t n_ = 0;
  int m_         = 0;
  std::vector<Money> bids_;
};

/// One bundle per bidder; bundles are pairwise disjoint and cover the item set.
struct Allocation
{
  std::vector<Bundle> bundles;

  std::size_t bidders() const
  {
    return bundles.size();
  }
  /// Bidder holding the item, or -1.
  int holder(int item) const;
  Bundle covered() const;

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

/// Throws DomainError unless the bundles are disjoint with union equal to `items`.
void validateAllocation(const Allocation& allocation, Bundle items);

struct Outcome
{
  Allocation allocation;
  std::vector<Money> payments;
  std::vector<Money> utilities;
};

/// Each item goes to a maximal bidder, ties to the lowest index; winners pay the
/// highest rival bid on each won item.
Outcome resolve(const BidProfile& bids, std::span<const ValuationPtr> valuations);

/// Allocation part of resolve, no valuations needed.
Allocation winners(const BidProfile& bids);

/// Highest bid of every other bidder, per item.
std::vector<Money> rivalPrices(const BidProfile& bids, std::size_t bidder);

struct NoOverbidCheck
{
  bool ok = true;
  std::optional<Bundle> witness;
};

/// True iff sum of bids over S <= v(S) for every S; only subsets of the bid support
/// need checking (support size <= 20).
NoOverbidCheck checkNoOverbidding(const Valuation& v, std::span<const Money> bidVector);

struct Deviation
{
  Bundle target;
  Money utility;
};

/// Best bundle a bidder can win by outbidding rival prices without overbidding:
/// T is feasible iff p(S) < v(S) for every nonempty S within T. Returns the
/// profit-maximizing feasible T when its utility strictly beats currentUtility.
std::optional<Deviation> bestDeviation(const Valuation& v, std::span<const Money> rivalPrices,
                                       const Money& currentUtility);

/// Same, over a precomputed value table (m <= 20).
std::optional<Deviation> bestDeviation(const std::vector<Money>& table, int m,
                                       std::span<const Money> rivalPrices, const Money& currentUtility);

struct BidderWitness
{
  enum class Kind
  {
    Overbids,
    Deviates,
  };
  std::size_t bidder = 0;
  Kind kind          = Kind::Overbids;
  Bundle bundle;
  Money utility;
};

struct EquilibriumReport
{
  bool equilibrium = true;
  std::vector<BidderWitness> witnesses;
};

/// Exhaustive pure-Nash check under no-overbidding (m <= 20).
EquilibriumReport isPureNashNoOverbid(std::span<const ValuationPtr> valuations, const BidProfile& bids);

/// Bids equal the oracle clause of each bidder's own bundle on owned items and 0 elsewhere.
bool isTraditional(const Allocation& allocation, const BidProfile& bids, std::span<XosOracle* const> oracles);

Money welfare(const Allocation& allocation, std::span<const ValuationPtr> valuations);

struct OptimalAllocation
{
  Allocation allocation;
  Money welfare;
};

/// Exact maximum welfare by subset dynamic programming (m <= 14).
OptimalAllocation optimalAllocation(std::span<const ValuationPtr> valuations);
Money optimalWelfare(std::span<const ValuationPtr> valuations);

/// Item-by-item greedy: each item in index order goes to the bidder with the largest
/// marginal value given what it already holds (ties to the lowest index).
Allocation greedyAllocation(std::span<const ValuationPtr> valuations, QueryLedger* ledger = nullptr);

/// Common item count of a non-empty valuation list; DomainError when they disagree.
int commonItemCount(std::span<const ValuationPtr> valuations);

}  // namespace ssa
