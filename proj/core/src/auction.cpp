#include "ssa/auction.hpp"

#include "ssa/errors.hpp"

#include <algorithm>
#include <functional>

namespace ssa {

BidProfile::BidProfile(std::size_t bidders, int items)
  : n_(bidders)
  , m_(items)
  , bids_(bidders * static_cast<std::size_t>(items))
{
  if (items < 0 || items > kMaxItems)
  {
    throw DomainError("item count must lie in [0, 64]");
  }
}

std::size_t BidProfile::index(std::size_t bidder, int item) const
{
  if (bidder >= n_ || item < 0 || item >= m_)
  {
    throw DomainError("bid index out of range");
  }
  return bidder * static_cast<std::size_t>(m_) + static_cast<std::size_t>(item);
}

const Money& BidProfile::at(std::size_t bidder, int item) const
{
  return bids_[index(bidder, item)];
}

void BidProfile::set(std::size_t bidder, int item, Money amount)
{
  if (amount < 0)
  {
    throw DomainError("bids must be non-negative");
  }
  bids_[index(bidder, item)] = std::move(amount);
}

std::span<const Money> BidProfile::row(std::size_t bidder) const
{
  if (bidder >= n_)
  {
    throw DomainError("bidder index out of range");
  }
  return {bids_.data() + bidder * static_cast<std::size_t>(m_), static_cast<std::size_t>(m_)};
}

std::vector<Money> BidProfile::rowCopy(std::size_t bidder) const
{
  auto r = row(bidder);
  return {r.begin(), r.end()};
}

Money BidProfile::price(int item) const
{
  Money best = 0;
  for (std::size_t i = 0; i < n_; ++i)
  {
    best = std::max(best, at(i, item));
  }
  return best;
}

std::vector<Money> BidProfile::prices() const
{
  std::vector<Money> out;
  out.reserve(static_cast<std::size_t>(m_));
  for (int j = 0; j < m_; ++j)
  {
    out.push_back(price(j));
  }
  return out;
}

int Allocation::holder(int item) const
{
  for (std::size_t i = 0; i < bundles.size(); ++i)
  {
    if (bundles[i].contains(item))
    {
      return static_cast<int>(i);
    }
  }
  return -1;
}

Bundle Allocation::covered() const
{
  Bundle out;
  for (auto b : bundles)
  {
    out = out | b;
  }
  return out;
}

void validateAllocation(const Allocation& allocation, Bundle items)
{
  Bundle seen;
  for (auto b : allocation.bundles)
  {
    if (b.intersects(seen))
    {
      throw DomainError("allocation bundles overlap on " + toString(b & seen));
    }
    seen = seen | b;
  }
  if (seen != items)
  {
    throw DomainError("allocation covers " + toString(seen) + ", expected " + toString(items));
  }
}

Allocation winners(const BidProfile& bids)
{
  if (bids.bidders() == 0)
  {
    throw DomainError("at least one bidder is required");
  }
  Allocation out;
  out.bundles.resize(bids.bidders());
  for (int j = 0; j < bids.items(); ++j)
  {
    std::size_t best = 0;
    for (std::size_t i = 1; i < bids.bidders(); ++i)
    {
      if (bids.at(i, j) > bids.at(best, j))
      {
        best = i;
      }
    }
    out.bundles[best] = out.bundles[best].with(j);
  }
  return out;
}

std::vector<Money> rivalPrices(const BidProfile& bids, std::size_t bidder)
{
  if (bidder >= bids.bidders())
  {
    throw DomainError("bidder index out of range");
  }
  std::vector<Money> out(static_cast<std::size_t>(bids.items()));
  for (std::size_t i = 0; i < bids.bidders(); ++i)
  {
    if (i == bidder)
    {
      continue;
    }
    for (int j = 0; j < bids.items(); ++j)
    {
      auto& slot = out[static_cast<std::size_t>(j)];
      slot       = std::max(slot, bids.at(i, j));
    }
  }
  return out;
}

int commonItemCount(std::span<const ValuationPtr> valuations)
{
  if (valuations.empty())
  {
    throw DomainError("at least one valuation is required");
  }
  int const m = valuations.front()->itemCount();
  for (auto const& v : valuations)
  {
    if (v->itemCount() != m)
    {
      throw DomainError("valuations disagree on the item count");
    }
  }
  return m;
}

Outcome resolve(const BidProfile& bids, std::span<const ValuationPtr> valuations)
{
  if (valuations.size() != bids.bidders() || commonItemCount(valuations) != bids.items())
  {
    throw DomainError("bid profile dimensions do not match the valuations");
  }
  Outcome out;
  out.allocation = winners(bids);
  for (std::size_t i = 0; i < bids.bidders(); ++i)
  {
    auto const rivals = rivalPrices(bids, i);
    Money pay         = 0;
    out.allocation.bundles[i].forEachItem([&](int j) { pay += rivals[static_cast<std::size_t>(j)]; });
    out.utilities.push_back(valuations[i]->value(out.allocation.bundles[i]) - pay);
    out.payments.push_back(std::move(pay));
  }
  return out;
}

NoOverbidCheck checkNoOverbidding(const Valuation& v, std::span<const Money> bidVector)
{
  int const m = v.itemCount();
  if (bidVector.size() != static_cast<std::size_t>(m))
  {
    throw DomainError("bid vector length must equal m");
  }
  std::vector<int> support;
  for (int j = 0; j < m; ++j)
  {
    if (bidVector[static_cast<std::size_t>(j)] < 0)
    {
      throw DomainError("bids must be non-negative");
    }
    if (bidVector[static_cast<std::size_t>(j)] > 0)
    {
      support.push_back(j);
    }
  }
  if (support.size() > static_cast<std::size_t>(kMaxTableItems))
  {
    throw CapabilityError("no-overbidding check needs a bid support of at most 20 items");
  }
  // v is monotone, so a violation on S persists after dropping zero-bid items.
  std::size_t const k       = support.size();
  std::uint64_t const count = std::uint64_t{1} << k;
  std::vector<Money> total(count);
  std::vector<Bundle> bundle(count);
  NoOverbidCheck out;
  for (std::uint64_t s = 1; s < count; ++s)
  {
    int const low = std::countr_zero(s);
    int const j   = support[static_cast<std::size_t>(low)];
    total[s]      = total[s & (s - 1)] + bidVector[static_cast<std::size_t>(j)];
    bundle[s]     = bundle[s & (s - 1)].with(j);
    if (total[s] > v.value(bundle[s]))
    {
      if (!out.witness || tieRuleLess(bundle[s], *out.witness))
      {
        out.ok      = false;
        out.witness = bundle[s];
      }
    }
  }
  return out;
}

namespace {

std::optional<Deviation> searchDeviation(int m, std::span<const Money> prices, const Money& currentUtility,
                                         const std::function<Money(Bundle)>& valueOf)
{
  if (prices.size() != static_cast<std::size_t>(m))
  {
    throw DomainError("price vector length must equal m");
  }
  // Only items with p_j < v({j}) can appear in a feasible target.
  std::vector<int> candidates;
  for (int j = 0; j < m; ++j)
  {
    if (prices[static_cast<std::size_t>(j)] < valueOf(Bundle::single(j)))
    {
      candidates.push_back(j);
    }
  }
  if (candidates.size() > static_cast<std::size_t>(kMaxTableItems))
  {
    throw CapabilityError("deviation search needs at most 20 candidate items");
  }
  std::size_t const k       = candidates.size();
  std::uint64_t const count = std::uint64_t{1} << k;
  std::vector<Money> price(count);
  std::vector<Bundle> bundle(count);
  std::vector<char> feasible(count, 0);
  feasible[0] = 1;
  std::optional<Deviation> best;
  for (std::uint64_t s = 1; s < count; ++s)
  {
    int const low = std::countr_zero(s);
    price[s]      = price[s & (s - 1)] + prices[static_cast<std::size_t>(candidates[static_cast<std::size_t>(low)])];
    bundle[s]     = bundle[s & (s - 1)].with(candidates[static_cast<std::size_t>(low)]);
    bool ok       = true;
    for (std::uint64_t rest = s; rest != 0 && ok; rest &= rest - 1)
    {
      ok = feasible[s & ~(rest & (~rest + 1))] != 0;
    }
    if (!ok)
    {
      continue;
    }
    Money const val = valueOf(bundle[s]);
    if (!(price[s] < val))
    {
      continue;
    }
    feasible[s]         = 1;
    Money const utility = val - price[s];
    if (!best || utility > best->utility || (utility == best->utility && tieRuleLess(bundle[s], best->target)))
    {
      best = Deviation{bundle[s], utility};
    }
  }
  if (best && best->utility > currentUtility)
  {
    return best;
  }
  return std::nullopt;
}

}  // namespace

std::optional<Deviation> bestDeviation(const Valuation& v, std::span<const Money> rivalPrices,
                                       const Money& currentUtility)
{
  return searchDeviation(v.itemCount(), rivalPrices, currentUtility, [&](Bundle b) { return v.value(b); });
}

std::optional<Deviation> bestDeviation(const std::vector<Money>& table, int m, std::span<const Money> rivalPrices,
                                       const Money& currentUtility)
{
  if (m > kMaxTableItems || table.size() != (std::size_t{1} << m))
  {
    throw DomainError("value table size must be 2^m with m <= 20");
  }
  return searchDeviation(m, rivalPrices, currentUtility, [&](Bundle b) { return table[b.bits()]; });
}

EquilibriumReport isPureNashNoOverbid(std::span<const ValuationPtr> valuations, const BidProfile& bids)
{
  int const m = commonItemCount(valuations);
  if (m > kMaxTableItems)
  {
    throw CapabilityError("equilibrium verification needs m <= 20");
  }
  Outcome const outcome = resolve(bids, valuations);
  EquilibriumReport report;
  for (std::size_t i = 0; i < valuations.size(); ++i)
  {
    auto const row   = bids.row(i);
    auto const check = checkNoOverbidding(*valuations[i], row);
    if (!check.ok)
    {
      Money total = 0;
      check.witness->forEachItem([&](int j) { total += row[static_cast<std::size_t>(j)]; });
      report.equilibrium = false;
      report.witnesses.push_back(
        {i, BidderWitness::Kind::Overbids, *check.witness, valuations[i]->value(*check.witness) - total});
      continue;
    }
    auto const rivals = rivalPrices(bids, i);
    if (auto dev = bestDeviation(*valuations[i], rivals, outcome.utilities[i]))
    {
      report.equilibrium = false;
      report.witnesses.push_back({i, BidderWitness::Kind::Deviates, dev->target, dev->utility});
    }
  }
  return report;
}

bool isTraditional(const Allocation& allocation, const BidProfile& bids, std::span<XosOracle* const> oracles)
{
  if (allocation.bidders() != bids.bidders() || oracles.size() != bids.bidders())
  {
    throw DomainError("allocation, bids and oracles must cover the same bidders");
  }
  for (std::size_t i = 0; i < bids.bidders(); ++i)
  {
    Bundle const own = allocation.bundles[i];
    std::optional<AdditiveClause> clause;
    if (!own.empty())
    {
      clause = oracles[i]->clause(own);
    }
    for (int j = 0; j < bids.items(); ++j)
    {
      Money const expected = own.contains(j) ? clause->at(j) : Money(0);
      if (bids.at(i, j) != expected)
      {
        return false;
      }
    }
  }
  return true;
}

Money welfare(const Allocation& allocation, std::span<const ValuationPtr> valuations)
{
  if (allocation.bidders() != valuations.size())
  {
    throw DomainError("allocation and valuations must cover the same bidders");
  }
  Money out = 0;
  for (std::size_t i = 0; i < valuations.size(); ++i)
  {
    out += valuations[i]->value(allocation.bundles[i]);
  }
  return out;
}

namespace {

inline constexpr int kMaxOptimalItems = 14;

}  // namespace

OptimalAllocation optimalAllocation(std::span<const ValuationPtr> valuations)
{
  int const m           = commonItemCount(valuations);
  std::size_t const n   = valuations.size();
  Bundle const universe = Bundle::full(m);
  if (n == 1)
  {
    return {Allocation{{universe}}, valuations[0]->value(universe)};
  }
  if (m > kMaxOptimalItems)
  {
    throw CapabilityError("optimal welfare needs m <= 14");
  }
  std::uint64_t const count = std::uint64_t{1} << m;
  // best[i][S]: max welfare of bidders 0..i sharing S; choice[i][S]: bidder i's part.
  std::vector<std::vector<Money>> best(n, std::vector<Money>(count));
  std::vector<std::vector<std::uint64_t>> choice(n, std::vector<std::uint64_t>(count, 0));
  best[0] = tabulate(*valuations[0]);
  for (std::uint64_t s = 0; s < count; ++s)
  {
    choice[0][s] = s;
  }
  for (std::size_t i = 1; i < n; ++i)
  {
    auto const table = tabulate(*valuations[i]);
    for (std::uint64_t s = 0; s < count; ++s)
    {
      Money top           = best[i - 1][s];
      std::uint64_t taken = 0;
      for (std::uint64_t sub = s; sub != 0; sub = (sub - 1) & s)
      {
        Money cand = table[sub] + best[i - 1][s & ~sub];
        if (cand > top)
        {
          top   = std::move(cand);
          taken = sub;
        }
      }
      best[i][s]   = std::move(top);
      choice[i][s] = taken;
    }
  }
  OptimalAllocation out;
  out.welfare = best[n - 1][count - 1];
  out.allocation.bundles.resize(n);
  std::uint64_t rest = count - 1;
  for (std::size_t i = n; i-- > 0;)
  {
    out.allocation.bundles[i] = Bundle(choice[i][rest]);
    rest &= ~choice[i][rest];
  }
  return out;
}

Money optimalWelfare(std::span<const ValuationPtr> valuations)
{
  return optimalAllocation(valuations).welfare;
}

Allocation greedyAllocation(std::span<const ValuationPtr> valuations, QueryLedger* ledger)
{
  int const m = commonItemCount(valuations);
  Allocation out;
  out.bundles.resize(valuations.size());
  for (int j = 0; j < m; ++j)
  {
    std::size_t bestBidder = 0;
    Money bestGain         = -1;
    for (std::size_t i = 0; i < valuations.size(); ++i)
    {
      Money gain = marginal(*valuations[i], j, out.bundles[i], ledger, i);
      if (gain > bestGain)
      {
        bestGain   = std::move(gain);
        bestBidder = i;
      }
    }
    out.bundles[bestBidder] = out.bundles[bestBidder].with(j);
  }
  return out;
}

}  // namespace ssa
