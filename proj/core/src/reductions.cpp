#include "ssa/reductions.hpp"

#include "ssa/errors.hpp"
#include "ssa/stealing.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <numeric>
#include <random>

namespace ssa {

namespace {

bool crossOk(Bundle a, Bundle b, int m)
{
  int const c = (a & b).size();
  return c > 0 && c <= m / 8;
}

Money utilityOf(std::span<const ValuationPtr> valuations, const BidProfile& bids, std::size_t bidder)
{
  Outcome const out = resolve(bids, valuations);
  return out.utilities[bidder];
}

}  // namespace

SystemCheck checkSetPairSystem(const SetPairSystem& system)
{
  int const m = system.m;
  if (m < 8 || m % 8 != 0 || m > kMaxItems)
  {
    return {false, "m must be a positive multiple of 8 up to 64"};
  }
  Bundle const all = Bundle::full(m);
  for (std::size_t r = 0; r < system.pairs.size(); ++r)
  {
    auto const& p = system.pairs[r];
    if (!p.first.isSubsetOf(all) || !p.second.isSubsetOf(all) || p.first.size() != m / 4 ||
        p.second.size() != m / 4)
    {
      return {false, "pair " + std::to_string(r) + " does not have two m/4-bundles"};
    }
    if (p.first.intersects(p.second))
    {
      return {false, "pair " + std::to_string(r) + " is not disjoint"};
    }
    for (std::size_t l = 0; l < system.pairs.size(); ++l)
    {
      if (l != r && !crossOk(p.first, system.pairs[l].second, m))
      {
        return {false, "pairs " + std::to_string(r) + " and " + std::to_string(l) + " violate the cross bound"};
      }
    }
  }
  return {};
}

SetPairSystem buildGoodSetPairSystem(int m, std::size_t count, std::uint64_t seed, std::size_t retries)
{
  if (m < 8 || m % 8 != 0 || m > kMaxItems)
  {
    throw DomainError("set-pair systems need m a positive multiple of 8 up to 64");
  }
  SetPairSystem system;
  system.m = m;
  std::mt19937_64 rng(seed);
  std::vector<int> items(static_cast<std::size_t>(m));
  std::iota(items.begin(), items.end(), 0);
  while (system.pairs.size() < count)
  {
    bool placed = false;
    for (std::size_t attempt = 0; attempt < retries && !placed; ++attempt)
    {
      std::shuffle(items.begin(), items.end(), rng);
      SetPair pair;
      for (int i = 0; i < m / 4; ++i)
      {
        pair.first  = pair.first.with(items[static_cast<std::size_t>(i)]);
        pair.second = pair.second.with(items[static_cast<std::size_t>(i + m / 4)]);
      }
      placed = std::all_of(system.pairs.begin(), system.pairs.end(), [&](const SetPair& other) {
        return crossOk(pair.first, other.second, m) && crossOk(other.first, pair.second, m);
      });
      if (placed)
      {
        system.pairs.push_back(pair);
      }
    }
    if (!placed)
    {
      throw ConstructionError("no compatible pair after " + std::to_string(retries) + " draws (have " +
                              std::to_string(system.pairs.size()) + ")");
    }
  }
  if (auto const check = checkSetPairSystem(system); !check.good)
  {
    throw ConstructionError("constructed system failed its check: " + check.violation);
  }
  return system;
}

SetPairValuation::SetPairValuation(SetPairSystem system, DisjointnessInput flags, std::size_t player)
  : Valuation(system.m)
  , system_(std::move(system))
  , flags_(std::move(flags))
  , player_(player)
{
  if (auto const check = checkSetPairSystem(system_); !check.good)
  {
    throw DomainError("set-pair valuation over a bad system: " + check.violation);
  }
  if (flags_.size() != system_.pairs.size())
  {
    throw DomainError("flag vector length differs from the number of pairs");
  }
  if (player_ > 1)
  {
    throw DomainError("set-pair valuations have players 0 and 1");
  }
}

std::vector<Bundle> SetPairValuation::flaggedBundles() const
{
  std::vector<Bundle> out;
  for (std::size_t r = 0; r < flags_.size(); ++r)
  {
    if (flags_[r])
    {
      out.push_back(system_.pairs[r].side(player_));
    }
  }
  return out;
}

Money SetPairValuation::evaluate(Bundle bundle) const
{
  if (bundle.empty())
  {
    return 0;
  }
  if (bundle.size() >= 3 * itemCount() / 4 + 1)
  {
    return 2;
  }
  for (std::size_t r = 0; r < flags_.size(); ++r)
  {
    if (flags_[r] && system_.pairs[r].side(player_).isSubsetOf(bundle))
    {
      return 2;
    }
  }
  return 1;
}

nlohmann::json SetPairValuation::toJson() const
{
  auto pairs = nlohmann::json::array();
  for (auto const& p : system_.pairs)
  {
    pairs.push_back({p.first.items(), p.second.items()});
  }
  std::vector<int> flags;
  for (bool f : flags_)
  {
    flags.push_back(f ? 1 : 0);
  }
  return {{"kind", "set_pair"}, {"m", itemCount()}, {"player", player_}, {"pairs", pairs}, {"flags", flags}};
}

std::shared_ptr<SetPairValuation> setPairValuation(const SetPairSystem& system, const DisjointnessInput& flags,
                                                   std::size_t player)
{
  return std::make_shared<SetPairValuation>(system, flags, player);
}

std::optional<std::size_t> commonIndex(const DisjointnessInput& a, const DisjointnessInput& b)
{
  for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k)
  {
    if (a[k] && b[k])
    {
      return k;
    }
  }
  return std::nullopt;
}

Money witnessEpsilon(int m)
{
  return Money(1, 4 * m);
}

BidProfile equilibriumWitness(const SetPairSystem& system, const DisjointnessInput& a, const DisjointnessInput& b,
                              std::size_t k, std::optional<Money> epsilon)
{
  if (k >= system.pairs.size() || k >= a.size() || k >= b.size() || !a[k] || !b[k])
  {
    throw DomainError("the witness needs an index flagged by both players");
  }
  Money const eps = epsilon.value_or(witnessEpsilon(system.m));
  if (eps <= 0)
  {
    throw DomainError("witness epsilon must be positive");
  }
  BidProfile bids(2, system.m);
  for (std::size_t player = 0; player < 2; ++player)
  {
    system.pairs[k].side(player).forEachItem([&](int j) { bids.set(player, j, eps); });
  }
  return bids;
}

std::string_view unprotectedCaseName(UnprotectedCase c)
{
  switch (c)
  {
    case UnprotectedCase::FlaggedBundle: return "flagged-bundle";
    case UnprotectedCase::AllButOne: return "all-but-one";
    case UnprotectedCase::Cheapest: return "cheapest";
  }
  return "?";
}

std::optional<UnprotectedDeviation> findUnprotectedSet(std::shared_ptr<const SetPairValuation> first,
                                                       std::shared_ptr<const SetPairValuation> second,
                                                       const BidProfile& bids)
{
  if (!first || !second || first->itemCount() != second->itemCount() || bids.bidders() != 2 ||
      bids.items() != first->itemCount())
  {
    throw DomainError("findUnprotectedSet needs two set-pair valuations over the bid profile's items");
  }
  int const m = first->itemCount();
  std::vector<ValuationPtr> const vals{first, second};
  Allocation const alloc = winners(bids);
  std::size_t bidder     = vals.size();
  for (std::size_t i = 0; i < vals.size(); ++i)
  {
    if (vals[i]->value(alloc.bundles[i]) <= 1)
    {
      bidder = i;
      break;
    }
  }
  if (bidder == vals.size())
  {
    return std::nullopt;
  }
  std::size_t const other = 1 - bidder;
  auto const& mine        = bidder == 0 ? *first : *second;
  auto otherSum           = [&](Bundle b) {
    Money s = 0;
    b.forEachItem([&](int j) { s += bids.at(other, j); });
    return s;
  };

  std::optional<std::pair<Bundle, UnprotectedCase>> pick;
  auto const flagged = mine.flaggedBundles();
  for (Bundle t : flagged)
  {
    if (otherSum(t) < 1)
    {
      pick = std::pair{t, UnprotectedCase::FlaggedBundle};
      break;
    }
  }
  if (!pick && !flagged.empty())
  {
    Bundle const t   = flagged.front();
    Bundle const all = Bundle::full(m);
    if (otherSum(t) == 1 && otherSum(all - t) == 0)
    {
      int jPrime = -1;
      t.forEachItem([&](int j) {
        if (jPrime < 0 && bids.at(other, j) > 0)
        {
          jPrime = j;
        }
      });
      Bundle const u = all.without(jPrime);
      if (otherSum(u) < 1)
      {
        pick = std::pair{u, UnprotectedCase::AllButOne};
      }
    }
  }
  if (!pick)
  {
    std::vector<int> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return bids.at(other, a) < bids.at(other, b); });
    Bundle cheapest;
    for (int i = 0; i < 3 * m / 4 + 1; ++i)
    {
      cheapest = cheapest.with(order[static_cast<std::size_t>(i)]);
    }
    if (otherSum(cheapest) < 1)
    {
      pick = std::pair{cheapest, UnprotectedCase::Cheapest};
    }
  }
  if (!pick)
  {
    return std::nullopt;
  }

  UnprotectedDeviation dev;
  dev.bidder      = bidder;
  dev.kind        = pick->second;
  dev.unprotected = pick->first;
  Money const slack = 1 - otherSum(dev.unprotected);
  Money const delta = slack / (2 * dev.unprotected.size());
  dev.bids.assign(static_cast<std::size_t>(m), Money(0));
  dev.unprotected.forEachItem([&](int j) { dev.bids[static_cast<std::size_t>(j)] = bids.at(other, j) + delta; });
  dev.utilityBefore = utilityOf(vals, bids, bidder);
  BidProfile deviated = bids;
  for (int j = 0; j < m; ++j)
  {
    deviated.set(bidder, j, dev.bids[static_cast<std::size_t>(j)]);
  }
  dev.utilityAfter = utilityOf(vals, deviated, bidder);
  return dev;
}

std::shared_ptr<CoverageValuation> maxcutValuation(const WeightedGraph& graph)
{
  return std::make_shared<CoverageValuation>(graph);
}

LocalMaxReport localMaxCheck(std::span<const ValuationPtr> valuations, const Allocation& allocation)
{
  validateAllocation(allocation, valuations.empty() ? Bundle{} : valuations.front()->universe());
  std::size_t const n = valuations.size();
  std::vector<Money> current(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    current[i] = valuations[i]->value(allocation.bundles[i]);
  }
  for (std::size_t from = 0; from < n; ++from)
  {
    for (int j : allocation.bundles[from].items())
    {
      Money const loss = current[from] - valuations[from]->value(allocation.bundles[from].without(j));
      for (std::size_t to = 0; to < n; ++to)
      {
        if (to == from)
        {
          continue;
        }
        Money const gain = valuations[to]->value(allocation.bundles[to].with(j)) - current[to] - loss;
        if (gain > 0)
        {
          return {false, MoveWitness{from, to, j, gain}};
        }
      }
    }
  }
  return {};
}

BidProfile procedureBids(std::span<const ValuationPtr> valuations, const Allocation& allocation)
{
  int const m = valuations.empty() ? 0 : valuations.front()->itemCount();
  return computeBids(valuations, allocation, ascendingOrdering(valuations.size(), m));
}

WeightedGraph randomWeightedGraph(int vertices, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::vector<WeightedEdge> edges;
  for (int u = 0; u < vertices; ++u)
  {
    for (int v = u + 1; v < vertices; ++v)
    {
      if (rng() % 2 == 0)
      {
        edges.push_back({u, v, Money(static_cast<long>(1 + rng() % 4))});
      }
    }
  }
  return WeightedGraph(vertices, std::move(edges));
}

BidProfile randomNoOverbidProfile(std::span<const ValuationPtr> valuations, std::mt19937_64& rng)
{
  int const m = commonItemCount(valuations);
  BidProfile out(valuations.size(), m);
  for (std::size_t i = 0; i < valuations.size(); ++i)
  {
    for (int j = 0; j < m; ++j)
    {
      out.set(i, j, Money(static_cast<long>(rng() % 100), 100));
    }
    while (!checkNoOverbidding(*valuations[i], out.row(i)).ok)
    {
      for (int j = 0; j < m; ++j)
      {
        out.set(i, j, out.at(i, j) / 2);
      }
    }
  }
  return out;
}

DeviationSweep sweepUnprotected(std::shared_ptr<const SetPairValuation> first,
                                std::shared_ptr<const SetPairValuation> second, std::size_t samples,
                                std::uint64_t seed)
{
  std::vector<ValuationPtr> const vals{first, second};
  int const m = commonItemCount(vals);
  std::mt19937_64 rng(seed);
  DeviationSweep out;
  for (std::size_t s = 0; s < samples; ++s)
  {
    BidProfile const bids = randomNoOverbidProfile(vals, rng);
    ++out.profiles;
    auto const dev = findUnprotectedSet(first, second, bids);
    if (!dev)
    {
      ++out.missing;
      continue;
    }
    ++out.cases[std::string(unprotectedCaseName(dev->kind))];
    BidProfile moved = bids;
    for (int j = 0; j < m; ++j)
    {
      moved.set(dev->bidder, j, dev->bids[static_cast<std::size_t>(j)]);
    }
    Money const before = resolve(bids, vals).utilities[dev->bidder];
    Money const after  = resolve(moved, vals).utilities[dev->bidder];
    if (checkNoOverbidding(*vals[dev->bidder], moved.row(dev->bidder)).ok && after > before)
    {
      ++out.strict;
    }
  }
  return out;
}

GapSearch gapSearchOnGraph(const WeightedGraph& graph, std::uint64_t seed)
{
  int const n  = graph.vertexCount();
  auto const v = maxcutValuation(graph);
  std::vector<ValuationPtr> const vals{v, v};
  GapSearch out;
  out.graphs = 1;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n) && !out.witness; ++mask)
  {
    Allocation init;
    init.bundles      = {Bundle(mask), Bundle::full(n) - Bundle(mask)};
    auto const result = topsteal(vals, init, Bundle::full(n), 2);
    ++out.runs;
    out.maxSteals      = std::max<std::size_t>(out.maxSteals, result.trace.steals);
    out.stealBoundHeld = out.stealBoundHeld && result.trace.steals <= static_cast<std::uint64_t>(n);
    if (!isPureNashNoOverbid(vals, result.bids).equilibrium)
    {
      out.allEquilibria = false;
      continue;
    }
    auto const local = localMaxCheck(vals, result.allocation);
    if (!local.localMax)
    {
      out.witness = GapWitness{seed, graph, init, result.allocation, result.bids, result.trace.steals, *local.witness};
    }
  }
  return out;
}

MaxcutAnalysis analyzeMaxcut(const WeightedGraph& graph)
{
  int const n = graph.vertexCount();
  if (n < 1 || n > 12)
  {
    throw CapabilityError("max-cut analysis enumerates cuts of at most 12 vertices");
  }
  auto const v = maxcutValuation(graph);
  std::vector<ValuationPtr> const vals{v, v};
  MaxcutAnalysis out;
  out.vertices = n;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask)
  {
    ++out.cuts;
    Bundle const side(mask);
    Money const cut = graph.cutWeight(side);
    bool flipOptimal = true;
    for (int u = 0; u < n && flipOptimal; ++u)
    {
      Bundle const flipped = side.contains(u) ? side.without(u) : side.with(u);
      flipOptimal          = graph.cutWeight(flipped) <= cut;
    }
    Allocation alloc;
    alloc.bundles   = {side, Bundle::full(n) - side};
    bool const local = localMaxCheck(vals, alloc).localMax;
    out.flipOptimal += flipOptimal ? 1 : 0;
    out.localMaxima += local ? 1 : 0;
    if (local != flipOptimal && out.coincide)
    {
      out.coincide = false;
      out.mismatch = side;
    }
    if (local)
    {
      if (isPureNashNoOverbid(vals, procedureBids(vals, alloc)).equilibrium)
      {
        ++out.verifiedEquilibria;
      }
      else
      {
        out.allLocalMaximaEquilibria = false;
      }
    }
  }
  out.gap = gapSearchOnGraph(graph);
  return out;
}

GapSearch equilibriumNotLocalMaxSearch(std::uint64_t seedFrom, std::uint64_t seedTo, int maxVertices)
{
  if (maxVertices < 4 || maxVertices > 8)
  {
    throw DomainError("the gap search covers 4..8 vertices");
  }
  GapSearch out;
  for (std::uint64_t seed = seedFrom; seed < seedTo && !out.witness; ++seed)
  {
    int const n      = 4 + static_cast<int>(seed % static_cast<std::uint64_t>(maxVertices - 3));
    auto const found = gapSearchOnGraph(randomWeightedGraph(n, seed), seed);
    out.graphs += found.graphs;
    out.runs += found.runs;
    out.maxSteals      = std::max(out.maxSteals, found.maxSteals);
    out.stealBoundHeld = out.stealBoundHeld && found.stealBoundHeld;
    out.allEquilibria  = out.allEquilibria && found.allEquilibria;
    out.witness        = found.witness;
  }
  return out;
}

}  // namespace ssa
