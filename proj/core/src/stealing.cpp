#include "ssa/stealing.hpp"

#include "ssa/errors.hpp"
#include "ssa/families.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace ssa {

OrderingState ascendingOrdering(std::size_t bidders, int m)
{
  std::vector<int> base(static_cast<std::size_t>(m));
  std::iota(base.begin(), base.end(), 0);
  return OrderingState{std::vector<std::vector<int>>(bidders, base)};
}

OrderingState ownedFirstOrdering(const Allocation& allocation, int m)
{
  OrderingState out;
  Bundle const universe = Bundle::full(m);
  for (auto own : allocation.bundles)
  {
    auto order = own.items();
    auto rest  = (universe - own).items();
    order.insert(order.end(), rest.begin(), rest.end());
    out.orders.push_back(std::move(order));
  }
  return out;
}

OrderingState AscendingOrderingPolicy::initial(const Allocation& allocation, int m) const
{
  return ascendingOrdering(allocation.bidders(), m);
}

OrderingState StolenGoesLastPolicy::initial(const Allocation& allocation, int m) const
{
  return ownedFirstOrdering(allocation, m);
}

void StolenGoesLastPolicy::afterSteal(OrderingState& state, std::size_t thief, std::size_t victim, int item,
                                      const Allocation& allocation) const
{
  auto& mine = state.orders.at(thief);
  mine.erase(std::find(mine.begin(), mine.end(), item));
  // Owned items form a prefix, so the item goes right after the other owned ones.
  auto const owned = static_cast<std::ptrdiff_t>(allocation.bundles.at(thief).size()) - 1;
  mine.insert(mine.begin() + owned, item);

  auto& theirs = state.orders.at(victim);
  theirs.erase(std::find(theirs.begin(), theirs.end(), item));
  theirs.push_back(item);
}

std::unique_ptr<OrderingPolicy> stolenGoesLastPolicy()
{
  return std::make_unique<StolenGoesLastPolicy>();
}

std::unique_ptr<OrderingPolicy> orderingPolicyByName(const std::string& name)
{
  if (name == "ascending")
  {
    return std::make_unique<AscendingOrderingPolicy>();
  }
  if (name == "stolen-last")
  {
    return std::make_unique<StolenGoesLastPolicy>();
  }
  throw DomainError("unknown ordering policy '" + name + "'");
}

std::size_t LargestGainStealPolicy::choose(const std::vector<StealCandidate>& candidates)
{
  std::size_t best = 0;
  for (std::size_t k = 1; k < candidates.size(); ++k)
  {
    if (candidates[k].gain - candidates[k].price > candidates[best].gain - candidates[best].price)
    {
      best = k;
    }
  }
  return best;
}

RandomStealPolicy::RandomStealPolicy(std::uint64_t seed)
  : rng_(seed)
{}

std::size_t RandomStealPolicy::choose(const std::vector<StealCandidate>& candidates)
{
  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
  return pick(rng_);
}

std::unique_ptr<StealPolicy> stealPolicyByName(const std::string& name, std::uint64_t seed)
{
  if (name == "lex")
  {
    return std::make_unique<LexicographicStealPolicy>();
  }
  if (name == "largest-gain")
  {
    return std::make_unique<LargestGainStealPolicy>();
  }
  if (name == "random")
  {
    return std::make_unique<RandomStealPolicy>(seed);
  }
  throw DomainError("unknown steal policy '" + name + "'");
}

std::string_view tagName(LooseTag tag)
{
  switch (tag)
  {
  case LooseTag::Tight:
    return "tight";
  case LooseTag::WeaklyLoose:
    return "weakly-loose";
  case LooseTag::StronglyLoose:
    return "strongly-loose";
  }
  return "unknown";
}

BidProfile computeBids(std::span<const ValuationPtr> valuations, const Allocation& allocation,
                       const OrderingState& ordering, QueryLedger* ledger)
{
  int const m = commonItemCount(valuations);
  if (allocation.bidders() != valuations.size() || ordering.orders.size() != valuations.size())
  {
    throw DomainError("allocation and ordering must cover every bidder");
  }
  validateAllocation(allocation, Bundle::full(m));
  BidProfile bids(valuations.size(), m);
  for (std::size_t i = 0; i < valuations.size(); ++i)
  {
    Bundle const own = allocation.bundles[i];
    Bundle prefix;
    Money previous = 0;
    for (int j : ordering.orders[i])
    {
      if (!own.contains(j))
      {
        continue;
      }
      prefix              = prefix.with(j);
      Money const current = value(*valuations[i], prefix, ledger, i);
      bids.set(i, j, current - previous);
      previous = current;
    }
  }
  return bids;
}

std::vector<StealCandidate> stealCandidates(std::span<const ValuationPtr> valuations, const Allocation& allocation,
                                            const BidProfile& bids, QueryLedger* ledger)
{
  int const m = commonItemCount(valuations);
  std::vector<StealCandidate> out;
  for (std::size_t i = 0; i < valuations.size(); ++i)
  {
    Bundle const own = allocation.bundles[i];
    if (own == Bundle::full(m))
    {
      continue;
    }
    Money const base = value(*valuations[i], own, ledger, i);
    for (int j = 0; j < m; ++j)
    {
      if (own.contains(j))
      {
        continue;
      }
      auto const victim = static_cast<std::size_t>(allocation.holder(j));
      Money gain        = value(*valuations[i], own.with(j), ledger, i) - base;
      if (gain > bids.at(victim, j))
      {
        out.push_back({i, victim, j, std::move(gain), bids.at(victim, j)});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const StealCandidate& a, const StealCandidate& b) {
    return std::tie(a.thief, a.victim, a.item) < std::tie(b.thief, b.victim, b.item);
  });
  return out;
}

std::optional<StealCandidate> findSteal(std::span<const ValuationPtr> valuations, const Allocation& allocation,
                                        const BidProfile& bids, StealPolicy& policy, QueryLedger* ledger)
{
  auto candidates = stealCandidates(valuations, allocation, bids, ledger);
  if (candidates.empty())
  {
    return std::nullopt;
  }
  std::size_t const pick = policy.choose(candidates);
  if (pick >= candidates.size())
  {
    throw DomainError("steal policy returned an out-of-range choice");
  }
  return candidates[pick];
}

namespace {

StealRun runStealing(std::span<const ValuationPtr> valuations, const Allocation& initial,
                     const OrderingPolicy& policy, StealPolicy& stealPolicy, std::size_t stepCap, bool tagItems,
                     QueryLedger* ledger)
{
  int const m = commonItemCount(valuations);
  if (initial.bidders() != valuations.size())
  {
    throw DomainError("initial allocation must have one bundle per bidder");
  }
  validateAllocation(initial, Bundle::full(m));
  StealRun run;
  run.allocation = initial;
  run.ordering   = policy.initial(initial, m);
  while (true)
  {
    run.bids = computeBids(valuations, run.allocation, run.ordering, ledger);
    run.log.prices.push_back(run.bids.prices());
    auto steal = findSteal(valuations, run.allocation, run.bids, stealPolicy, ledger);
    if (!steal)
    {
      return run;
    }
    if (run.log.events.size() >= stepCap)
    {
      throw StealCapExceeded("steal cap of " + std::to_string(stepCap) + " reached", std::move(run.log));
    }
    StealEvent event;
    event.thief         = steal->thief;
    event.victim        = steal->victim;
    event.item          = steal->item;
    event.welfareBefore = welfare(run.allocation, valuations);
    if (tagItems)
    {
      event.tag = classifyLooseTight(valuations, run.allocation, run.bids)[static_cast<std::size_t>(steal->item)];
    }
    auto& bundles         = run.allocation.bundles;
    bundles[steal->victim] = bundles[steal->victim].without(steal->item);
    bundles[steal->thief]  = bundles[steal->thief].with(steal->item);
    policy.afterSteal(run.ordering, steal->thief, steal->victim, steal->item, run.allocation);
    event.welfareAfter = welfare(run.allocation, valuations);
    run.log.events.push_back(std::move(event));
  }
}

}  // namespace

StealRun runIterativeStealing(std::span<const ValuationPtr> valuations, const Allocation& initial,
                              const OrderingPolicy& ordering, StealPolicy& stealPolicy, std::size_t stepCap,
                              QueryLedger* ledger)
{
  return runStealing(valuations, initial, ordering, stealPolicy, stepCap, false, ledger);
}

BigInt StealStats::granularityBound(std::size_t bidders) const
{
  if (delta == 0)
  {
    return 0;
  }
  Money const ratio = Money(static_cast<long long>(bidders)) * vMax / delta;
  return BigInt(numerator(ratio) / denominator(ratio));
}

std::uint64_t StealStats::distinctMarginalBound() const
{
  std::uint64_t out = 0;
  for (auto const& row : perPair)
  {
    for (auto c : row)
    {
      out += c;
    }
  }
  return out;
}

StealStats computeStealStats(std::span<const ValuationPtr> valuations, std::size_t stealCount)
{
  int const m = commonItemCount(valuations);
  if (m > 16)
  {
    throw CapabilityError("steal statistics need m <= 16");
  }
  StealStats out;
  out.stealCount            = stealCount;
  out.vMax                  = 0;
  out.delta                 = 0;
  std::uint64_t const count = std::uint64_t{1} << m;
  for (auto const& v : valuations)
  {
    auto const table = tabulate(*v);
    out.vMax         = std::max(out.vMax, table[count - 1]);
    std::vector<std::uint64_t> row;
    for (int j = 0; j < m; ++j)
    {
      std::set<Money> distinct;
      std::uint64_t const bit = std::uint64_t{1} << j;
      for (std::uint64_t s = 0; s < count; ++s)
      {
        Money const gain = table[s | bit] - table[s];
        if (gain != 0 && distinct.insert(gain).second)
        {
          out.delta = rationalGcd(out.delta, gain);
        }
        else if (gain == 0)
        {
          distinct.insert(gain);
        }
      }
      row.push_back(distinct.size());
    }
    out.perPair.push_back(std::move(row));
  }
  return out;
}

std::vector<LooseTag> classifyLooseTight(std::span<const ValuationPtr> valuations, const Allocation& allocation,
                                         const BidProfile& bids)
{
  int const m = commonItemCount(valuations);
  for (auto const& v : valuations)
  {
    if (dynamic_cast<const BudgetAdditiveValuation*>(v.get()) == nullptr)
    {
      throw DomainError("loose/tight classification needs budget-additive valuations");
    }
  }
  validateAllocation(allocation, Bundle::full(m));
  std::vector<LooseTag> out;
  for (int j = 0; j < m; ++j)
  {
    auto const holder = static_cast<std::size_t>(allocation.holder(j));
    Money const price = bids.price(j);
    if (price < valuations[holder]->value(Bundle::single(j)))
    {
      out.push_back(price == 0 ? LooseTag::StronglyLoose : LooseTag::WeaklyLoose);
    }
    else
    {
      out.push_back(LooseTag::Tight);
    }
  }
  return out;
}

std::uint64_t budgetAdditiveStealCap(std::size_t bidders, int m)
{
  std::uint64_t const nm = bidders * static_cast<std::uint64_t>(m);
  return (nm + 1) * nm + static_cast<std::uint64_t>(m) + nm;
}

StealRun runBudgetAdditiveStealing(std::span<const ValuationPtr> valuations, const Allocation& initial,
                                   std::size_t stepCap, QueryLedger* ledger)
{
  int const m = commonItemCount(valuations);
  for (auto const& v : valuations)
  {
    if (v->kind() != ValuationKind::BudgetAdditive)
    {
      throw DomainError("budget-additive stealing needs budget-additive valuations");
    }
  }
  auto const cap = std::min<std::uint64_t>(stepCap, budgetAdditiveStealCap(valuations.size(), m));
  StolenGoesLastPolicy policy;
  LexicographicStealPolicy lex;
  return runStealing(valuations, initial, policy, lex, static_cast<std::size_t>(cap), true, ledger);
}

}  // namespace ssa
