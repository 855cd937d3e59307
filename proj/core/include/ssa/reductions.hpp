#pragma once

#include "ssa/auction.hpp"
#include "ssa/families.hpp"
#include "ssa/topsteal.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace ssa {

struct SetPair
{
  Bundle first;
  Bundle second;

  Bundle side(std::size_t player) const
  {
    return player == 0 ? first : second;
  }
};

/// Pairs of disjoint m/4-bundles with 0 < |S_1^r ∩ S_2^l| <= m/8 whenever r != l.
struct SetPairSystem
{
  int m = 0;
  std::vector<SetPair> pairs;
};

struct SystemCheck
{
  bool good = true;
  std::string violation;
};

SystemCheck checkSetPairSystem(const SetPairSystem& system);

/// Rejection sampling: each new pair is drawn at random until it is compatible with the
/// pairs already kept. ConstructionError when `retries` draws in a row fail.
SetPairSystem buildGoodSetPairSystem(int m, std::size_t count, std::uint64_t seed, std::size_t retries = 100000);

using DisjointnessInput = std::vector<bool>;

/// v(∅) = 0; 2 when |S| >= 3m/4 + 1 or S contains the player's side of a flagged pair; else 1.
class SetPairValuation final : public Valuation
{
public:
  SetPairValuation(SetPairSystem system, DisjointnessInput flags, std::size_t player);

  ValuationKind kind() const override
  {
    return ValuationKind::SetPair;
  }
  nlohmann::json toJson() const override;

  const SetPairSystem& system() const
  {
    return system_;
  }
  const DisjointnessInput& flags() const
  {
    return flags_;
  }
  std::size_t player() const
  {
    return player_;
  }
  /// The player's side of every flagged pair, in pair order.
  std::vector<Bundle> flaggedBundles() const;

protected:
  Money evaluate(Bundle bundle) const override;

private:
  SetPairSystem system_;
  DisjointnessInput flags_;
  std::size_t player_;
};

std::shared_ptr<SetPairValuation> setPairValuation(const SetPairSystem& system, const DisjointnessInput& flags,
                                                   std::size_t player);

/// First index flagged by both players.
std::optional<std::size_t> commonIndex(const DisjointnessInput& a, const DisjointnessInput& b);

/// 1 / (4m).
Money witnessEpsilon(int m);

/// Each player bids eps on its side of pair k and 0 elsewhere. DomainError unless both
/// players flag k.
BidProfile equilibriumWitness(const SetPairSystem& system, const DisjointnessInput& a, const DisjointnessInput& b,
                              std::size_t k, std::optional<Money> epsilon = std::nullopt);

enum class UnprotectedCase
{
  FlaggedBundle,  ///< the other bidder bids < 1 on a flagged bundle T
  AllButOne,      ///< bids concentrate on T, so M - {j'} is unprotected
  Cheapest,       ///< neither case applies; a cheapest value-2 bundle is unprotected
};

std::string_view unprotectedCaseName(UnprotectedCase c);

struct UnprotectedDeviation
{
  std::size_t bidder = 0;
  UnprotectedCase kind = UnprotectedCase::FlaggedBundle;
  Bundle unprotected;
  std::vector<Money> bids;  ///< other bidder's bid + delta on U, 0 elsewhere
  Money utilityBefore;
  Money utilityAfter;
};

/// Picks the bidder whose current bundle is worth at most 1 and an unprotected set U for
/// it: worth 2 to it while the other bidder bids less than 1 on U in total.
std::optional<UnprotectedDeviation> findUnprotectedSet(std::shared_ptr<const SetPairValuation> first,
                                                       std::shared_ptr<const SetPairValuation> second,
                                                       const BidProfile& bids);

/// Uniform bids in [0, 1) with step 1/100, halved until the row respects no-overbidding.
BidProfile randomNoOverbidProfile(std::span<const ValuationPtr> valuations, std::mt19937_64& rng);

struct DeviationSweep
{
  std::size_t profiles = 0;
  std::size_t strict   = 0;  ///< deviations that respect no-overbidding and strictly gain
  std::size_t missing  = 0;  ///< profiles where no unprotected set was found
  std::map<std::string, std::size_t> cases;
};

/// findUnprotectedSet over random no-overbidding profiles; every deviation is re-verified.
DeviationSweep sweepUnprotected(std::shared_ptr<const SetPairValuation> first,
                                std::shared_ptr<const SetPairValuation> second, std::size_t samples,
                                std::uint64_t seed);

/// Coverage valuation of the graph; with two identical copies, welfare is total weight plus cut weight.
std::shared_ptr<CoverageValuation> maxcutValuation(const WeightedGraph& graph);

struct MoveWitness
{
  std::size_t from = 0;
  std::size_t to   = 0;
  int item         = -1;
  Money gain;
};

struct LocalMaxReport
{
  bool localMax = true;
  std::optional<MoveWitness> witness;
};

/// True iff no single-item move between two bidders increases welfare.
LocalMaxReport localMaxCheck(std::span<const ValuationPtr> valuations, const Allocation& allocation);

/// Marginal bids along ascending item order on owned items, 0 elsewhere.
BidProfile procedureBids(std::span<const ValuationPtr> valuations, const Allocation& allocation);

/// Edges present with probability 1/2, integer weights in [1, 4].
WeightedGraph randomWeightedGraph(int vertices, std::uint64_t seed);

struct GapWitness
{
  std::uint64_t seed = 0;
  WeightedGraph graph;
  Allocation initial;
  Allocation allocation;
  BidProfile bids;
  std::size_t steals = 0;
  MoveWitness move;
};

struct GapSearch
{
  std::optional<GapWitness> witness;
  std::uint64_t graphs     = 0;
  std::uint64_t runs       = 0;
  std::size_t maxSteals    = 0;
  bool stealBoundHeld      = true;  ///< every run stayed within m steals
  bool allEquilibria       = true;
};

/// TOPSTEAL (t = 2) from every initial cut of one graph, stopping at the first certified
/// equilibrium that is not a local maximum.
GapSearch gapSearchOnGraph(const WeightedGraph& graph, std::uint64_t seed = 0);

struct MaxcutAnalysis
{
  int vertices             = 0;
  std::uint64_t cuts       = 0;
  std::uint64_t localMaxima = 0;  ///< allocations with no improving single-item move
  std::uint64_t flipOptimal = 0;  ///< cuts with no improving single-vertex flip
  bool coincide            = true;
  std::optional<Bundle> mismatch;
  std::uint64_t verifiedEquilibria = 0;  ///< local maxima certified with procedure bids
  bool allLocalMaximaEquilibria    = true;
  GapSearch gap;
};

/// Exhaustive over all cuts of a graph with at most 12 vertices.
MaxcutAnalysis analyzeMaxcut(const WeightedGraph& graph);

/// Runs TOPSTEAL (t = 2) from every initial cut of random graphs with 4..maxVertices vertices
/// and certifies an output that is an equilibrium but not a local maximum.
GapSearch equilibriumNotLocalMaxSearch(std::uint64_t seedFrom, std::uint64_t seedTo, int maxVertices = 8);

}  // namespace ssa
