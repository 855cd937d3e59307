#include "ssa/topsteal.hpp"

#include "ssa/errors.hpp"

#include <algorithm>

namespace ssa {

MarginalValuation::MarginalValuation(ValuationPtr base, Bundle given)
  : Valuation(base->itemCount())
  , base_(std::move(base))
  , given_(given)
  , givenValue_(base_->value(given))
{}

Money MarginalValuation::evaluate(Bundle bundle) const
{
  return base_->value(bundle | given_) - givenValue_;
}

ErasedValuation::ErasedValuation(ValuationPtr base, Bundle erased)
  : Valuation(base->itemCount())
  , base_(std::move(base))
  , erased_(erased)
{
  checkBundle(erased);
}

Money ErasedValuation::evaluate(Bundle bundle) const
{
  return base_->value(bundle - erased_);
}

ValuationPtr marginalOn(const ValuationPtr& base, Bundle given)
{
  if (given.empty())
  {
    return base;
  }
  if (auto const* inner = dynamic_cast<const MarginalValuation*>(base.get()))
  {
    return std::make_shared<MarginalValuation>(inner->base(), inner->given() | given);
  }
  return std::make_shared<MarginalValuation>(base, given);
}

ValuationPtr erase(const ValuationPtr& base, Bundle erased)
{
  if (erased.empty())
  {
    return base;
  }
  if (auto const* inner = dynamic_cast<const ErasedValuation*>(base.get()))
  {
    return std::make_shared<ErasedValuation>(inner->base(), inner->erased() | erased);
  }
  return std::make_shared<ErasedValuation>(base, erased);
}

bool CompetitorInfo::isTop(std::size_t bidder, int item) const
{
  auto const& top = topCompetitors.at(static_cast<std::size_t>(item));
  return std::find(top.begin(), top.end(), bidder) != top.end();
}

bool CompetitorInfo::isCompetitor(std::size_t bidder, int item) const
{
  auto const& c = competitors.at(static_cast<std::size_t>(item));
  return std::find(c.begin(), c.end(), bidder) != c.end();
}

std::size_t CompetitorInfo::restriction() const
{
  std::size_t out = 0;
  for (auto const& c : competitors)
  {
    out = std::max(out, c.size());
  }
  return out;
}

CompetitorInfo competitorInfo(std::span<const ValuationPtr> valuations, Bundle items, QueryLedger* ledger)
{
  int const m = commonItemCount(valuations);
  if (!items.isSubsetOf(Bundle::full(m)))
  {
    throw DomainError("item set exceeds the valuations' item count");
  }
  CompetitorInfo out;
  out.competitors.resize(static_cast<std::size_t>(m));
  out.topCompetitors.resize(static_cast<std::size_t>(m));
  items.forEachItem([&](int j) {
    std::vector<Money> single;
    Money best = 0;
    for (std::size_t i = 0; i < valuations.size(); ++i)
    {
      single.push_back(value(*valuations[i], Bundle::single(j), ledger, i));
      best = std::max(best, single.back());
    }
    for (std::size_t i = 0; i < valuations.size(); ++i)
    {
      if (single[i] > 0)
      {
        out.competitors[static_cast<std::size_t>(j)].push_back(i);
      }
      if (single[i] == best)
      {
        out.topCompetitors[static_cast<std::size_t>(j)].push_back(i);
      }
    }
  });
  return out;
}

namespace {

PreprocessResult preprocessWith(const CompetitorInfo& info, const Allocation& allocation, Bundle items)
{
  PreprocessResult out{allocation, Bundle{}, 0};
  auto& bundles = out.allocation.bundles;
  items.forEachItem([&](int j) {
    auto const holder = static_cast<std::size_t>(out.allocation.holder(j));
    auto const& c     = info.competitors[static_cast<std::size_t>(j)];
    std::size_t target = holder;
    if (c.empty())
    {
      out.ignorable = out.ignorable.with(j);
      target        = 0;
    }
    else if (!info.isCompetitor(holder, j))
    {
      target = info.topCompetitors[static_cast<std::size_t>(j)].front();
    }
    if (target != holder)
    {
      bundles[holder] = bundles[holder].without(j);
      bundles[target] = bundles[target].with(j);
      ++out.moves;
    }
  });
  return out;
}

}  // namespace

PreprocessResult preprocessToCompetitors(std::span<const ValuationPtr> valuations, const Allocation& allocation,
                                         Bundle items, QueryLedger* ledger)
{
  if (allocation.bidders() != valuations.size())
  {
    throw DomainError("allocation must have one bundle per bidder");
  }
  validateAllocation(allocation, items);
  return preprocessWith(competitorInfo(valuations, items, ledger), allocation, items);
}

std::string_view caseName(TopstealCase c)
{
  switch (c)
  {
  case TopstealCase::Empty:
    return "empty";
  case TopstealCase::Base:
    return "base";
  case TopstealCase::TopHeld:
    return "top-held";
  case TopstealCase::Equilibrium:
    return "equilibrium";
  case TopstealCase::Steal:
    return "steal";
  }
  return "unknown";
}

std::uint64_t stealCountBound(int m, int t)
{
  if (m < 1 || t < 1)
  {
    throw DomainError("steal bound needs m >= 1 and t >= 1");
  }
  // C(m+t-1, t-1) by the multiplicative formula, exact at every step.
  std::uint64_t c = 1;
  for (int k = 1; k <= t - 1; ++k)
  {
    c = c * static_cast<std::uint64_t>(m + k) / static_cast<std::uint64_t>(k);
  }
  return c - 1;
}

ComposedProfile composeTopItem(const Allocation& allocation, const BidProfile& bids, std::size_t bidder, int item,
                               std::span<const ValuationPtr> valuations)
{
  int const m = commonItemCount(valuations);
  if (bidder >= valuations.size() || allocation.bidders() != valuations.size() || bids.bidders() != valuations.size() ||
      bids.items() != m || item < 0 || item >= m)
  {
    throw DomainError("composition arguments have mismatched dimensions");
  }
  if (allocation.covered().contains(item))
  {
    throw DomainError("composed item is already allocated");
  }
  if (!competitorInfo(valuations, Bundle::single(item)).isTop(bidder, item))
  {
    throw DomainError("bidder is not a top competitor for the composed item");
  }
  ComposedProfile out{allocation, bids};
  out.allocation.bundles[bidder] = out.allocation.bundles[bidder].with(item);
  for (std::size_t i = 0; i < valuations.size(); ++i)
  {
    out.bids.set(i, item, i == bidder ? valuations[i]->value(Bundle::single(item)) : Money(0));
  }
  return out;
}

namespace {

struct Steal
{
  std::size_t thief;
  std::size_t victim;
  int item;
};

class Solver
{
public:
  Solver(std::size_t bidders, int m, QueryLedger* ledger)
    : n_(bidders)
    , m_(m)
    , ledger_(ledger)
  {}

  RecursionTrace trace;

  ComposedProfile solve(const ValuationList& vals, Allocation alloc, Bundle items, int t, int depth)
  {
    std::size_t const node = trace.nodes.size();
    trace.nodes.push_back({});
    trace.nodes[node].depth = depth;
    trace.nodes[node].t     = t;
    trace.nodes[node].items = items.size();
    trace.nodes[node].bound = items.empty() ? 0 : stealCountBound(items.size(), t);
    trace.maxDepth          = std::max(trace.maxDepth, depth);

    auto const info = competitorInfo(vals, items, ledger_);
    if (info.restriction() > static_cast<std::size_t>(std::max(t, 1)))
    {
      throw DomainError("instance is not " + std::to_string(t) + "-restricted");
    }
    auto pre                = preprocessWith(info, alloc, items);
    alloc                   = std::move(pre.allocation);
    trace.nodes[node].moves = pre.moves;
    Bundle const active     = items - pre.ignorable;

    auto finish = [&](ComposedProfile out, TopstealCase kind, std::uint64_t own) {
      auto& nd     = trace.nodes[node];
      nd.kind      = kind;
      nd.ownSteals = own;
      nd.steals    = own;
      for (auto child : nd.children)
      {
        nd.steals += trace.nodes[child].steals;
      }
      return out;
    };

    if (active.empty())
    {
      return finish({alloc, BidProfile(n_, m_)}, TopstealCase::Empty, 0);
    }

    // A top competitor already holds some item: pin it and recurse on the rest.
    for (std::size_t i = 0; i < n_; ++i)
    {
      Bundle const pinned = alloc.bundles[i] & active;
      for (int j : pinned.items())
      {
        if (!info.isTop(i, j))
        {
          continue;
        }
        ValuationList sub = vals;
        sub[i]            = marginalOn(vals[i], Bundle::single(j));
        if (ledger_ != nullptr)
        {
          ledger_->chargeValue(i, vals[i]->queryCost());
        }
        Allocation rest   = alloc;
        rest.bundles[i]   = rest.bundles[i].without(j);
        trace.nodes[node].children.push_back(trace.nodes.size());
        auto inner = solve(sub, std::move(rest), items.without(j), t, depth + 1);
        inner.allocation.bundles[i] = inner.allocation.bundles[i].with(j);
        for (std::size_t k = 0; k < n_; ++k)
        {
          inner.bids.set(k, j, k == i ? value(*vals[i], Bundle::single(j), ledger_, i) : Money(0));
        }
        return finish(std::move(inner), TopstealCase::TopHeld, 0);
      }
    }

    if (active.size() == 1)
    {
      int const j         = active.first();
      std::size_t const w = info.topCompetitors[static_cast<std::size_t>(j)].front();
      auto const holder   = static_cast<std::size_t>(alloc.holder(j));
      alloc.bundles[holder] = alloc.bundles[holder].without(j);
      alloc.bundles[w]      = alloc.bundles[w].with(j);
      BidProfile bids(n_, m_);
      bids.set(w, j, value(*vals[w], Bundle::single(j), ledger_, w));
      return finish({alloc, std::move(bids)}, TopstealCase::Base, 1);
    }

    ComposedProfile current{alloc, BidProfile(n_, m_)};
    if (t <= 2)
    {
      current.bids = orderedBids(vals, alloc, items);
    }
    else
    {
      Allocation start = alloc;
      ValuationList erasedVals;
      for (std::size_t i = 0; i < n_; ++i)
      {
        Bundle tops;
        active.forEachItem([&](int j) {
          if (info.isTop(i, j))
          {
            tops = tops.with(j);
          }
        });
        erasedVals.push_back(erase(vals[i], tops));
      }
      trace.nodes[node].children.push_back(trace.nodes.size());
      current = solve(erasedVals, std::move(start), items, t - 1, depth + 1);
    }

    auto steal = chooseSteal(vals, info, current, items);
    if (!steal)
    {
      return finish(std::move(current), TopstealCase::Equilibrium, 0);
    }
    Allocation next                   = std::move(current.allocation);
    next.bundles[steal->victim]       = next.bundles[steal->victim].without(steal->item);
    next.bundles[steal->thief]        = next.bundles[steal->thief].with(steal->item);
    trace.nodes[node].children.push_back(trace.nodes.size());
    auto out = solve(vals, std::move(next), items, t, depth + 1);
    return finish(std::move(out), TopstealCase::Steal, 1);
  }

private:
  BidProfile orderedBids(const ValuationList& vals, const Allocation& alloc, Bundle items)
  {
    BidProfile bids(n_, m_);
    for (std::size_t i = 0; i < n_; ++i)
    {
      Bundle prefix;
      Money previous = 0;
      (alloc.bundles[i] & items).forEachItem([&](int j) {
        prefix              = prefix.with(j);
        Money const current = value(*vals[i], prefix, ledger_, i);
        bids.set(i, j, current - previous);
        previous = current;
      });
    }
    return bids;
  }

  /// Smallest (thief, item) among top-competitor steals; falls back to any steal with a diagnostic.
  std::optional<Steal> chooseSteal(const ValuationList& vals, const CompetitorInfo& info,
                                   const ComposedProfile& profile, Bundle items)
  {
    std::optional<Steal> fallback;
    for (std::size_t i = 0; i < n_; ++i)
    {
      Bundle const own   = profile.allocation.bundles[i] & items;
      Bundle const other = items - own;
      if (other.empty())
      {
        continue;
      }
      Money const base = value(*vals[i], own, ledger_, i);
      for (int j : other.items())
      {
        Money const gain = value(*vals[i], own.with(j), ledger_, i) - base;
        if (!(gain > profile.bids.price(j)))
        {
          continue;
        }
        Steal const s{i, static_cast<std::size_t>(profile.allocation.holder(j)), j};
        if (info.isTop(i, j))
        {
          return s;
        }
        if (!fallback)
        {
          fallback = s;
        }
      }
    }
    if (fallback)
    {
      trace.diagnostics.push_back("bidder " + std::to_string(fallback->thief) + " can steal item " +
                                  std::to_string(fallback->item) + " but no top competitor can steal");
    }
    return fallback;
  }

  std::size_t n_;
  int m_;
  QueryLedger* ledger_;
};

}  // namespace

TopstealResult topsteal(std::span<const ValuationPtr> valuations, const Allocation& initial, Bundle items, int t,
                        QueryLedger* ledger)
{
  int const m = commonItemCount(valuations);
  if (t < 1)
  {
    throw DomainError("t must be at least 1");
  }
  if (initial.bidders() != valuations.size())
  {
    throw DomainError("initial allocation must have one bundle per bidder");
  }
  if (!items.isSubsetOf(Bundle::full(m)))
  {
    throw DomainError("item set exceeds the valuations' item count");
  }
  validateAllocation(initial, items);
  Solver solver(valuations.size(), m, ledger);
  ValuationList vals(valuations.begin(), valuations.end());
  auto out = solver.solve(vals, initial, items, t, 0);
  solver.trace.steals = solver.trace.nodes.front().steals;
  return {std::move(out.allocation), std::move(out.bids), std::move(solver.trace)};
}

TopstealResult topsteal(std::span<const ValuationPtr> valuations, const Allocation& initial, QueryLedger* ledger)
{
  int const m       = commonItemCount(valuations);
  Bundle const all  = Bundle::full(m);
  auto const t      = std::max<std::size_t>(1, competitorInfo(valuations, all, ledger).restriction());
  return topsteal(valuations, initial, all, static_cast<int>(t), ledger);
}

}  // namespace ssa
