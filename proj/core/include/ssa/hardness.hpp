#pragma once

#include "ssa/auction.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace ssa {

/// Constants of the sensitive family: clause C_j is worth m' - g, clause B_S spans m' + h items.
/// The literal family is g = 20, h = 10 and needs m >= 43; other values exist for small-m
/// cross-checks and need m' + 4 >= 3h.
struct SensitiveParams
{
  int g = 20;
  int h = 10;

  bool literal() const
  {
    return g == 20 && h == 10;
  }
};

struct SensitiveEntry
{
  Money k;
  int clauseItem = -1;  ///< -1 means the smallest item of the bundle
};

using SensitiveMap = std::unordered_map<std::uint64_t, SensitiveEntry>;

/// Max of the clause families C_j, A_S, M_{S,j}, B_S. Bundles outside the map use defaultK.
/// By |S|: 0 on the empty set, m'-g up to size m'-g, |S| up to m', then below m'+h the larger
/// of m' + 1/4 + max k over (m'+1)-subsets and (m'+1)|S|/(m'+h), and m'+1 from m'+h on.
class SensitiveValuation final : public Valuation
{
public:
  static constexpr std::size_t kMaxSupport = 100000;

  SensitiveValuation(int m, SensitiveMap kMap, Money defaultK, SensitiveParams params = {});

  ValuationKind kind() const override
  {
    return ValuationKind::Sensitive;
  }
  std::optional<Bundle> closedFormDemand(std::span<const Money> prices) const override;
  std::optional<AdditiveClause> storedClause(Bundle bundle) const override;
  nlohmann::json toJson() const override;

  int half() const
  {
    return half_;
  }
  const SensitiveParams& params() const
  {
    return params_;
  }
  const Money& defaultK() const
  {
    return defaultK_;
  }
  const SensitiveMap& entries() const
  {
    return kMap_;
  }
  /// k_S for a size-(m'+1) bundle (defaultK when unlisted).
  Money k(Bundle bundle) const;
  int clauseItem(Bundle bundle) const;
  /// max k over the (m'+1)-subsets of S, and the lexicographically smallest subset attaining it.
  std::pair<Money, Bundle> maxSubsetK(Bundle bundle) const;

protected:
  Money evaluate(Bundle bundle) const override;

private:
  int half_;
  SensitiveParams params_;
  SensitiveMap kMap_;
  Money defaultK_;
};

/// The piecewise formula m'-g / |S| / m' + 1/4 + max k / m'+1 (0 on the empty set). It equals
/// value() unless m' + 4 < 3h, where the B clause can win at |S| = m'+h-1 for small k.
Money sensitiveValue(const SensitiveValuation& v, Bundle bundle);

enum class ClauseFamily
{
  None,
  C,
  A,
  M,
  B,
};

std::string_view familyName(ClauseFamily family);

struct SensitiveClause
{
  ClauseFamily family = ClauseFamily::None;
  Bundle base;   ///< the S' (or {j}) the clause is defined by
  int item = -1; ///< distinguished item of C_j and M_{S,j}
  AdditiveClause clause;
};

/// The standard maximizing clause of S.
SensitiveClause sensitiveClause(const SensitiveValuation& v, Bundle bundle);

class StandardSensitiveOracle final : public XosOracle
{
public:
  explicit StandardSensitiveOracle(std::shared_ptr<const SensitiveValuation> v)
    : v_(std::move(v))
  {}
  AdditiveClause clause(Bundle bundle) override
  {
    return sensitiveClause(*v_, bundle).clause;
  }

private:
  std::shared_ptr<const SensitiveValuation> v_;
};

/// v(S) >= v(M - S + j). DomainError unless |S| = m'+1 and j in S.
bool isJLocalMax(const SensitiveValuation& v, Bundle bundle, int item);

struct LocalMaxCertificate
{
  Bundle bundle;
  int item = -1;
  Money value;
  Money neighbourValue;
};

/// Certificate for S with its standard clause item, if S is a local maximum for that item.
std::optional<LocalMaxCertificate> localMaxCertificate(const SensitiveValuation& v, Bundle bundle);

/// Exact profit maximizer using the structure of the family: size classes whose value
/// depends on |S| only take the cheapest prefix; middle sizes also compare every support
/// bundle padded with its cheapest non-members and the cheapest bundle reaching defaultK.
/// Ties go to smaller bundles, then to the lexicographically smaller candidate examined.
Bundle sparseDemandOracle(const SensitiveValuation& v, std::span<const Money> prices);

/// Two bidders sharing v: sizes (m', m'+1) in some order and the larger bundle, with its
/// standard clause M_{S,j}, is a j-local maximum.
bool eqCharCheck(const Allocation& allocation, const SensitiveValuation& v);

/// 1000 * m^765.
BigInt coverBoundFormula(int m);

/// Yields k-subsets in non-decreasing price order (equal prices: lexicographic over the
/// (price, index) ranking).
class CheapestSubsets
{
public:
  CheapestSubsets(std::span<const Money> prices, int k);
  std::optional<std::pair<Bundle, Money>> next();
  std::uint64_t produced() const
  {
    return produced_;
  }

private:
  struct Node
  {
    Money price;
    std::uint64_t positions;  ///< bitmask over indices into order_
  };
  struct Later
  {
    bool operator()(const Node& a, const Node& b) const;
  };

  std::vector<int> order_;
  std::vector<Money> sortedPrices_;
  std::vector<Node> heap_;
  std::unordered_set<std::uint64_t> seen_;
  std::uint64_t produced_ = 0;
};

/// Odd graph on the (m'+1)-subsets of [m], m = 2m'+1: S ~ M - S + j for j in S.
std::vector<Bundle> oddGraphNeighbours(Bundle vertex, int m);
int oddGraphDistance(Bundle a, Bundle b, int m);
/// Number of vertices within `radius` of a vertex of O_n.
BigInt oddGraphBallSize(int n, int radius);
/// All vertices of O_n in increasing bit order (n <= 8).
std::vector<Bundle> oddGraphVertices(int n);

/// E <= floor(2k log2 k / 3), decided exactly.
bool edgeBoundHolds(std::uint64_t internalEdges, std::uint64_t k);
/// |N(S)| >= (n - (4/3) log2 k) k / n, decided exactly.
bool neighbourBoundHolds(int n, std::uint64_t k, std::uint64_t neighbours);

struct IsoperimetricReport
{
  int n = 0;
  std::uint64_t vertices     = 0;
  std::uint64_t subsets      = 0;
  std::vector<std::uint64_t> maxInternal;  ///< indexed by k
  bool edgeBound      = true;
  bool neighbourBound = true;
};

/// All 2^|V| subsets of O_n (n <= 3).
IsoperimetricReport isoperimetricExhaustive(int n);
/// Random subsets of O_n (n <= 6): uniform size, then a uniform subset of that size.
IsoperimetricReport isoperimetricSampled(int n, std::uint64_t samples, std::uint64_t seed);

/// Smallest integer >= 2^{0.75 m' - 1}; components below it are cut off.
BigInt componentThreshold(int half);
/// ceil(2^{0.75 m' - 1} / m').
BigInt queryLowerBound(int half);

struct AssignmentEvent
{
  Bundle vertex;
  Money value;
  int clauseItem    = -1;
  std::size_t query = 0;  ///< index into the distinct-query sequence
  bool isQuery      = false;
  bool conceded     = false;
};

struct AdversaryAnswer
{
  Money value;
  int clauseItem = -1;
  AdditiveClause clause;
  bool conceded = false;
  bool replay   = false;
};

struct AdversaryStats
{
  std::uint64_t queries        = 0;  ///< every call, replays included
  std::uint64_t demandQueries  = 0;
  std::uint64_t shortcuts      = 0;  ///< components proven large by the distance walk
  std::uint64_t bfsRuns        = 0;
  std::uint64_t maxBfsPerQuery = 0;  ///< vertices materialized by BFS in one query
  std::uint64_t colored        = 0;
};

/// Answers value/XOS queries on (m'+1)-bundles so that no queried bundle is a local maximum
/// for its clause item until it can no longer avoid it (CONCEDE).
class OddGraphAdversary
{
public:
  /// Literal constants for m >= 43, g = 1 and h = 2 below that.
  explicit OddGraphAdversary(int m);

  int itemCount() const
  {
    return m_;
  }
  int half() const
  {
    return half_;
  }
  const Money& epsilon() const
  {
    return epsilon_;
  }
  const BigInt& threshold() const
  {
    return threshold_;
  }

  AdversaryAnswer query(Bundle bundle);
  /// Value of a bundle whose size fixes it, or of an (m'+1)-bundle through query(). Sizes
  /// strictly between m'+1 and m'+h depend on unqueried k values and are rejected.
  Money value(Bundle bundle);
  /// Demand at the given prices. Every uncolored (m'+1)-bundle that could still win is
  /// queried first, then the realized valuation answers.
  Bundle demand(std::span<const Money> prices);

  bool conceded() const
  {
    return conceded_;
  }
  bool isColored(Bundle bundle) const;
  const std::vector<Bundle>& queried() const
  {
    return queried_;
  }
  const std::vector<AssignmentEvent>& transcript() const
  {
    return transcript_;
  }
  const AdversaryStats& stats() const
  {
    return stats_;
  }
  /// Sensitive valuation with every colored vertex's k and clause item, defaultK = eps/2.
  std::shared_ptr<SensitiveValuation> realized() const;

private:
  struct Colour
  {
    Money value;
    int clauseItem;
  };

  bool blocked(Bundle b) const;
  bool provenLarge(Bundle start, const std::vector<Bundle>& near) const;
  /// BFS in the uncolored region; returns the component if it is below the threshold.
  std::optional<std::vector<Bundle>> smallComponent(Bundle start, std::uint64_t& materialized) const;
  void colourComponent(const std::vector<Bundle>& component, Bundle centre);
  void assign(Bundle b, int clauseItem, bool isQuery);
  AdversaryAnswer answerFor(Bundle b, bool replay) const;

  int m_;
  int half_;
  SensitiveParams params_;
  Money epsilon_;
  Money base_;
  BigInt threshold_;
  std::uint64_t thresholdValue_;
  bool shortcutValid_;
  std::int64_t x_ = 0;
  bool conceded_  = false;
  std::unordered_map<std::uint64_t, Colour> colours_;
  std::unordered_set<std::uint64_t> queriedSet_;
  std::vector<Bundle> queried_;
  std::vector<AssignmentEvent> transcript_;
  AdversaryStats stats_;
};

struct AuditResult
{
  bool ok = true;
  std::string message;
};

/// Single assignment per vertex, strictly increasing values, and every recorded clause item
/// pointing at a neighbour that was uncolored then (queries) or valued higher (components).
AuditResult auditTranscript(const OddGraphAdversary& adversary);

enum class SearchAlgorithm
{
  HillClimb,
  RandomProbe,
  BestReply,
};

std::string_view algorithmName(SearchAlgorithm algorithm);
/// "hill", "random" or "bestreply".
SearchAlgorithm algorithmByName(const std::string& name);

struct SearchReport
{
  SearchAlgorithm algorithm = SearchAlgorithm::HillClimb;
  int m                     = 0;
  std::uint64_t queries     = 0;  ///< value/XOS plus demand queries issued by the searcher
  std::uint64_t distinct    = 0;  ///< distinct bundles the adversary had to answer
  std::uint64_t demandQueries = 0;
  bool conceded               = false;
  std::optional<LocalMaxCertificate> found;
  BigInt bound;
  AdversaryStats stats;
  AuditResult audit;
};

/// Runs one searcher against a fresh adversary until it finds a local maximum, the adversary
/// concedes, or `budget` queries have been issued.
SearchReport runSearcher(int m, SearchAlgorithm algorithm, std::uint64_t budget, std::uint64_t seed);

}  // namespace ssa
