#pragma once

#include "ssa/auction.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ssa {

/// Per-bidder order over all items; bids are the marginals along it, owned items only.
struct OrderingState
{
  std::vector<std::vector<int>> orders;

  friend bool operator==(const OrderingState&, const OrderingState&) = default;
};

/// Every bidder orders items 0..m-1.
OrderingState ascendingOrdering(std::size_t bidders, int m);

/// Owned items first (ascending), then the rest (ascending).
OrderingState ownedFirstOrdering(const Allocation& allocation, int m);

class OrderingPolicy
{
public:
  virtual ~OrderingPolicy()                                          = default;
  virtual std::string name() const                                   = 0;
  virtual OrderingState initial(const Allocation& allocation, int m) const = 0;
  /// Called after the allocation has been updated.
  virtual void afterSteal(OrderingState& state, std::size_t thief, std::size_t victim, int item,
                          const Allocation& allocation) const = 0;
};

/// Fixed ascending order for everyone.
class AscendingOrderingPolicy final : public OrderingPolicy
{
public:
  std::string name() const override
  {
    return "ascending";
  }
  OrderingState initial(const Allocation& allocation, int m) const override;
  void afterSteal(OrderingState&, std::size_t, std::size_t, int, const Allocation&) const override {}
};

/// Owned items first; a stolen item becomes last among the thief's owned items and last
/// overall for the victim. Keeps item prices non-decreasing.
class StolenGoesLastPolicy final : public OrderingPolicy
{
public:
  std::string name() const override
  {
    return "stolen-last";
  }
  OrderingState initial(const Allocation& allocation, int m) const override;
  void afterSteal(OrderingState& state, std::size_t thief, std::size_t victim, int item,
                  const Allocation& allocation) const override;
};

std::unique_ptr<OrderingPolicy> stolenGoesLastPolicy();
/// "ascending" or "stolen-last"; DomainError otherwise.
std::unique_ptr<OrderingPolicy> orderingPolicyByName(const std::string& name);

struct StealCandidate
{
  std::size_t thief  = 0;
  std::size_t victim = 0;
  int item           = 0;
  Money gain;  ///< v_thief(item | S_thief)
  Money price; ///< victim's bid on the item

  friend bool operator==(const StealCandidate&, const StealCandidate&) = default;
};

class StealPolicy
{
public:
  virtual ~StealPolicy()         = default;
  virtual std::string name() const = 0;
  /// Picks one candidate; the list is non-empty and sorted by (thief, victim, item).
  virtual std::size_t choose(const std::vector<StealCandidate>& candidates) = 0;
};

/// Lexicographically smallest (thief, victim, item).
class LexicographicStealPolicy final : public StealPolicy
{
public:
  std::string name() const override
  {
    return "lex";
  }
  std::size_t choose(const std::vector<StealCandidate>&) override
  {
    return 0;
  }
};

/// Largest gain over price; ties to the earliest candidate.
class LargestGainStealPolicy final : public StealPolicy
{
public:
  std::string name() const override
  {
    return "largest-gain";
  }
  std::size_t choose(const std::vector<StealCandidate>& candidates) override;
};

/// Uniform choice from a seeded generator.
class RandomStealPolicy final : public StealPolicy
{
public:
  explicit RandomStealPolicy(std::uint64_t seed);
  std::string name() const override
  {
    return "random";
  }
  std::size_t choose(const std::vector<StealCandidate>& candidates) override;

private:
  std::mt19937_64 rng_;
};

/// "lex", "largest-gain" or "random"; DomainError otherwise.
std::unique_ptr<StealPolicy> stealPolicyByName(const std::string& name, std::uint64_t seed);

enum class LooseTag
{
  Tight,
  WeaklyLoose,
  StronglyLoose,
};

std::string_view tagName(LooseTag tag);

struct StealEvent
{
  std::size_t thief  = 0;
  std::size_t victim = 0;
  int item           = 0;
  Money welfareBefore;
  Money welfareAfter;
  /// Loose/tight status of the item for the victim just before the steal (budget-additive runs).
  std::optional<LooseTag> tag;
};

struct StealLog
{
  std::vector<StealEvent> events;
  /// prices[t] = max_i b_i(j) at the start of step t; one extra row for the final state.
  std::vector<std::vector<Money>> prices;

  std::size_t stealCount() const
  {
    return events.size();
  }
};

class StealCapExceeded : public std::runtime_error
{
public:
  StealCapExceeded(std::string what, StealLog log)
    : std::runtime_error(std::move(what))
    , log_(std::move(log))
  {}
  const StealLog& log() const
  {
    return log_;
  }

private:
  StealLog log_;
};

/// b_i(j) = v_i(j | owned items before j in i's order) for j in S_i, 0 elsewhere.
BidProfile computeBids(std::span<const ValuationPtr> valuations, const Allocation& allocation,
                       const OrderingState& ordering, QueryLedger* ledger = nullptr);

/// All triples with v_i(j | S_i) > b_{i'}(j), j in S_{i'}, sorted by (i, i', j).
std::vector<StealCandidate> stealCandidates(std::span<const ValuationPtr> valuations, const Allocation& allocation,
                                            const BidProfile& bids, QueryLedger* ledger = nullptr);

std::optional<StealCandidate> findSteal(std::span<const ValuationPtr> valuations, const Allocation& allocation,
                                        const BidProfile& bids, StealPolicy& policy, QueryLedger* ledger = nullptr);

struct StealRun
{
  Allocation allocation;
  BidProfile bids;
  OrderingState ordering;
  StealLog log;
};

/// Iterative stealing from `initial` until no steal qualifies. Throws StealCapExceeded
/// once `stepCap` steals have been made and another one qualifies.
StealRun runIterativeStealing(std::span<const ValuationPtr> valuations, const Allocation& initial,
                              const OrderingPolicy& ordering, StealPolicy& stealPolicy, std::size_t stepCap,
                              QueryLedger* ledger = nullptr);

struct StealStats
{
  std::size_t stealCount = 0;
  Money vMax;
  /// Rational gcd of every marginal v_i(j | S); 0 when all marginals vanish.
  Money delta;
  /// perPair[i][j] = number of distinct values of v_i(j | S) over all S.
  std::vector<std::vector<std::uint64_t>> perPair;

  /// n * vMax / delta, rounded down (0 when delta is 0).
  BigInt granularityBound(std::size_t bidders) const;
  std::uint64_t distinctMarginalBound() const;
};

/// Exhaustive over all S (m <= 16).
StealStats computeStealStats(std::span<const ValuationPtr> valuations, std::size_t stealCount = 0);

/// Per item: status for its holder. Items held by nobody are not possible (allocations cover M).
std::vector<LooseTag> classifyLooseTight(std::span<const ValuationPtr> valuations, const Allocation& allocation,
                                         const BidProfile& bids);

/// (nm+1)(nm) + m + nm.
std::uint64_t budgetAdditiveStealCap(std::size_t bidders, int m);

/// Stealing with the stolen-goes-last order on budget-additive bidders; every event
/// carries the item's tag. Throws StealCapExceeded past min(stepCap, budgetAdditiveStealCap).
StealRun runBudgetAdditiveStealing(std::span<const ValuationPtr> valuations, const Allocation& initial,
                                   std::size_t stepCap, QueryLedger* ledger = nullptr);

}  // namespace ssa
