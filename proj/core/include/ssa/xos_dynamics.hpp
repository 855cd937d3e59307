#pragma once

#include "ssa/auction.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace ssa {

/// Hamiltonian path through all bitstrings of weight m' and m'+1 (m = 2m'+1), as bundles
/// of one-bits. Starts at the weight-m' string {0..m'-1}. Found by rotation-extension
/// search with a deterministic seed; throws CapabilityError if the search budget runs out.
std::vector<Bundle> grayMiddleLevels(int m);

/// Completeness, single-flip adjacency and weight window.
bool isMiddleLevelsPath(const std::vector<Bundle>& path, int m);

/// Clause = marginals along an ordering of S: ascending item order, or greedy (repeatedly the
/// item of largest marginal, ties to the lowest index). Stored clauses take precedence.
class OrderedClauseOracle final : public XosOracle
{
public:
  enum class Ordering
  {
    Ascending,
    Greedy,
  };

  OrderedClauseOracle(ValuationPtr valuation, Ordering ordering, QueryLedger* ledger = nullptr,
                      std::size_t bidder = 0);
  AdditiveClause clause(Bundle bundle) override;

private:
  ValuationPtr valuation_;
  Ordering ordering_;
  QueryLedger* ledger_;
  std::size_t bidder_;
};

/// Lazily assigned integer coefficients k_S for size-(m'+1) bundles; unassigned bundles read 0.
class GrayCoefficients
{
public:
  std::int64_t at(Bundle bundle) const;
  bool assigned(Bundle bundle) const;
  /// Throws std::logic_error if the bundle already carries a different coefficient.
  void assign(Bundle bundle, std::int64_t k);
  std::int64_t maxAssigned() const;
  const std::map<std::uint64_t, std::int64_t>& entries() const
  {
    return k_;
  }

private:
  std::map<std::uint64_t, std::int64_t> k_;
};

/// v(S) = |S| for |S| <= m', m' + 1/2 + k_S eps for |S| = m'+1, m'+1 above.
/// Submodular while every k_S eps < 1/2.
class GrayValuation final : public Valuation
{
public:
  GrayValuation(int m, Money epsilon, std::shared_ptr<GrayCoefficients> coefficients);

  ValuationKind kind() const override
  {
    return ValuationKind::Gray;
  }
  bool supportsOrderedClauses() const override
  {
    return true;
  }
  std::optional<Bundle> closedFormDemand(std::span<const Money> prices) const override;
  int half() const
  {
    return half_;
  }
  const Money& epsilon() const
  {
    return epsilon_;
  }
  const GrayCoefficients& coefficients() const
  {
    return *coefficients_;
  }
  nlohmann::json toJson() const override;

protected:
  Money evaluate(Bundle bundle) const override;

private:
  int half_;
  Money epsilon_;
  std::shared_ptr<GrayCoefficients> coefficients_;
};

/// Shared state of the two adaptive oracles: the path and both players' coefficients.
struct GrayAdversary
{
  int m    = 0;
  int half = 0;
  Money epsilon;
  std::vector<Bundle> path;
  std::unordered_map<std::uint64_t, std::size_t> position;
  std::shared_ptr<GrayCoefficients> coefficients[2];
  std::shared_ptr<const GrayValuation> valuations[2];
};

/// Holder of a size-(m'+1) bundle on the path at position p bids 1 on every item but the
/// next flip item j, which gets 1/2 + k eps; the responder's bundle plus j is assigned k = p+1.
/// Answers are memoized.
class AdaptiveGrayOracle final : public XosOracle
{
public:
  AdaptiveGrayOracle(std::shared_ptr<GrayAdversary> adversary, std::size_t bidder, QueryLedger* ledger = nullptr);
  AdditiveClause clause(Bundle bundle) override;

private:
  std::shared_ptr<GrayAdversary> adversary_;
  std::size_t bidder_;
  QueryLedger* ledger_;
  std::map<std::uint64_t, AdditiveClause> memo_;
};

struct ExponentialInstance
{
  std::shared_ptr<GrayAdversary> adversary;
  ValuationList valuations;  ///< two Gray valuations
  std::vector<std::unique_ptr<XosOracle>> oracles;
  Allocation initial;  ///< zeros of path[0] to bidder 0, ones to bidder 1
};

/// Default eps = 1/(2L+2) for path length L. Throws DomainError for even m or eps too large.
ExponentialInstance buildExponentialInstance(int m, std::optional<Money> epsilon = std::nullopt,
                                             QueryLedger* ledger = nullptr);

struct DynamicStep
{
  /// Bidder whose demand produced this allocation (the first step records the initial state
  /// with responder = 1).
  std::size_t responder = 0;
  Allocation allocation;
  /// Sum of winning bids when the allocation's big-bundle holder has just bid.
  Money winningBidSum;
};

struct DynamicTrace
{
  std::vector<DynamicStep> steps;  ///< one per distinct allocation visited
  std::size_t rounds    = 0;
  std::size_t exchanges = 0;
};

struct DynamicResult
{
  Allocation allocation;
  BidProfile bids;
  DynamicTrace trace;
};

class DynamicCapExceeded : public std::runtime_error
{
public:
  DynamicCapExceeded(std::string what, DynamicTrace trace)
    : std::runtime_error(std::move(what))
    , trace_(std::move(trace))
  {}
  const DynamicTrace& trace() const
  {
    return trace_;
  }

private:
  DynamicTrace trace_;
};

/// Two-player best-reply dynamic: the current bidder bids its oracle clause on its bundle,
/// the other player takes its demand at those prices if it strictly beats keeping its bundle,
/// and the roles swap. Bidder 0 bids first. Stops after two consecutive unchanged rounds;
/// throws DynamicCapExceeded after `roundCap` rounds.
DynamicResult runBestReplyDynamic(std::span<const ValuationPtr> valuations, std::span<XosOracle* const> oracles,
                                  const Allocation& initial, std::size_t roundCap, QueryLedger* ledger = nullptr);

}  // namespace ssa
