#include "ssa/xos_dynamics.hpp"

#include "ssa/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <numeric>

namespace ssa {

OrderedClauseOracle::OrderedClauseOracle(ValuationPtr valuation, Ordering ordering, QueryLedger* ledger,
                                         std::size_t bidder)
  : valuation_(std::move(valuation))
  , ordering_(ordering)
  , ledger_(ledger)
  , bidder_(bidder)
{}

AdditiveClause OrderedClauseOracle::clause(Bundle bundle)
{
  std::vector<int> order;
  if (ordering_ == Ordering::Ascending || valuation_->storedClause(bundle))
  {
    order = bundle.items();
  }
  else
  {
    Bundle prefix;
    Money base = 0;
    Bundle rest = bundle;
    while (!rest.empty())
    {
      int pick  = -1;
      Money top = -1;
      rest.forEachItem([&](int j) {
        Money const gain = valuation_->value(prefix.with(j)) - base;
        if (gain > top)
        {
          top  = gain;
          pick = j;
        }
      });
      order.push_back(pick);
      prefix = prefix.with(pick);
      rest   = rest.without(pick);
      base += top;
    }
  }
  return xosClause(*valuation_, bundle, order, ledger_, bidder_);
}

std::int64_t GrayCoefficients::at(Bundle bundle) const
{
  auto it = k_.find(bundle.bits());
  return it == k_.end() ? 0 : it->second;
}

bool GrayCoefficients::assigned(Bundle bundle) const
{
  return k_.count(bundle.bits()) != 0;
}

void GrayCoefficients::assign(Bundle bundle, std::int64_t k)
{
  if (k < 0)
  {
    throw DomainError("gray coefficients are non-negative");
  }
  auto [it, inserted] = k_.emplace(bundle.bits(), k);
  if (!inserted && it->second != k)
  {
    throw std::logic_error("gray coefficient of " + toString(bundle) + " is already assigned");
  }
}

std::int64_t GrayCoefficients::maxAssigned() const
{
  std::int64_t out = 0;
  for (auto const& [bits, k] : k_)
  {
    out = std::max(out, k);
  }
  return out;
}

GrayValuation::GrayValuation(int m, Money epsilon, std::shared_ptr<GrayCoefficients> coefficients)
  : Valuation(m)
  , half_(m / 2)
  , epsilon_(std::move(epsilon))
  , coefficients_(std::move(coefficients))
{
  if (m < 1 || m > kMaxItems || m % 2 == 0)
  {
    throw DomainError("gray valuations need odd m");
  }
  if (epsilon_ <= 0 || !coefficients_)
  {
    throw DomainError("gray valuations need eps > 0 and a coefficient table");
  }
}

Money GrayValuation::evaluate(Bundle bundle) const
{
  int const s = bundle.size();
  if (s <= half_)
  {
    return s;
  }
  if (s == half_ + 1)
  {
    return Money(half_) + Money(1, 2) + Money(coefficients_->at(bundle)) * epsilon_;
  }
  return half_ + 1;
}

std::optional<Bundle> GrayValuation::closedFormDemand(std::span<const Money> prices) const
{
  int const m = itemCount();
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return prices[static_cast<std::size_t>(a)] < prices[static_cast<std::size_t>(b)];
  });
  Bundle best;
  Money bestProfit = 0;
  auto consider    = [&](Bundle b, const Money& profit) {
    if (profit > bestProfit || (profit == bestProfit && tieRuleLess(b, best)))
    {
      best       = b;
      bestProfit = profit;
    }
  };
  // Within a size class, the cheapest prefix is the lexicographically smallest cheapest set.
  Bundle prefix;
  Money cost = 0;
  for (int s = 1; s <= m; ++s)
  {
    int const j = order[static_cast<std::size_t>(s - 1)];
    prefix      = prefix.with(j);
    cost += prices[static_cast<std::size_t>(j)];
    consider(prefix, value(prefix) - cost);
  }
  for (auto const& [bits, k] : coefficients_->entries())
  {
    Bundle const b(bits);
    if (k <= 0 || !b.isSubsetOf(universe()))
    {
      continue;
    }
    Money price = 0;
    b.forEachItem([&](int j) { price += prices[static_cast<std::size_t>(j)]; });
    consider(b, value(b) - price);
  }
  return best;
}

nlohmann::json GrayValuation::toJson() const
{
  nlohmann::json k = nlohmann::json::array();
  for (auto const& [bits, coef] : coefficients_->entries())
  {
    k.push_back({Bundle(bits).items(), coef});
  }
  return {{"kind", "gray"}, {"m", itemCount()}, {"epsilon", toString(epsilon_)}, {"k", k}};
}

AdaptiveGrayOracle::AdaptiveGrayOracle(std::shared_ptr<GrayAdversary> adversary, std::size_t bidder,
                                       QueryLedger* ledger)
  : adversary_(std::move(adversary))
  , bidder_(bidder)
  , ledger_(ledger)
{
  if (bidder_ > 1)
  {
    throw DomainError("the gray adversary has two players");
  }
}

AdditiveClause AdaptiveGrayOracle::clause(Bundle bundle)
{
  if (ledger_ != nullptr)
  {
    ledger_->chargeXos(bidder_);
  }
  if (auto it = memo_.find(bundle.bits()); it != memo_.end())
  {
    return it->second;
  }
  auto& adv             = *adversary_;
  Bundle const universe = Bundle::full(adv.m);
  auto const& v         = *adv.valuations[bidder_];
  std::vector<int> order;
  int last = -1;
  if (bundle.size() == adv.half + 1)
  {
    // Codewords mark bidder 1's items.
    Bundle const word = bidder_ == 1 ? bundle : universe - bundle;
    auto it           = adv.position.find(word.bits());
    if (it != adv.position.end() && it->second + 1 < adv.path.size())
    {
      std::size_t const p = it->second;
      Bundle const flip   = Bundle(word.bits() ^ adv.path[p + 1].bits());
      last                = flip.first();
      if (bundle.contains(last))
      {
        adv.coefficients[bidder_]->assign(bundle, static_cast<std::int64_t>(p));
        Bundle const target = (universe - bundle).with(last);
        adv.coefficients[1 - bidder_]->assign(target, static_cast<std::int64_t>(p + 1));
      }
      else
      {
        last = -1;
      }
    }
  }
  bundle.forEachItem([&](int j) {
    if (j != last)
    {
      order.push_back(j);
    }
  });
  if (last >= 0)
  {
    order.push_back(last);
  }
  AdditiveClause out;
  Bundle prefix;
  Money previous = 0;
  for (int j : order)
  {
    prefix              = prefix.with(j);
    Money const current = v.value(prefix);
    out.set(j, current - previous);
    previous = current;
  }
  memo_.emplace(bundle.bits(), out);
  return out;
}

ExponentialInstance buildExponentialInstance(int m, std::optional<Money> epsilon, QueryLedger* ledger)
{
  if (m < 3 || m % 2 == 0)
  {
    throw DomainError("the exponential instance needs odd m >= 3");
  }
  auto adv  = std::make_shared<GrayAdversary>();
  adv->m    = m;
  adv->half = m / 2;
  adv->path = grayMiddleLevels(m);
  for (std::size_t p = 0; p < adv->path.size(); ++p)
  {
    adv->position.emplace(adv->path[p].bits(), p);
  }
  auto const length = static_cast<long long>(adv->path.size());
  adv->epsilon      = epsilon.value_or(Money(1, 2 * length + 2));
  // Coefficients reach L - 1 along the path.
  if (adv->epsilon <= 0 || Money(length - 1) * adv->epsilon >= Money(1, 2))
  {
    throw DomainError("eps too large: (L-1) eps must stay below 1/2");
  }
  ExponentialInstance out;
  for (int i = 0; i < 2; ++i)
  {
    adv->coefficients[i] = std::make_shared<GrayCoefficients>();
    adv->valuations[i]   = std::make_shared<GrayValuation>(m, adv->epsilon, adv->coefficients[i]);
    out.valuations.push_back(adv->valuations[i]);
  }
  for (std::size_t i = 0; i < 2; ++i)
  {
    out.oracles.push_back(std::make_unique<AdaptiveGrayOracle>(adv, i, ledger));
  }
  Bundle const first = adv->path.front();
  out.initial.bundles = {Bundle::full(m) - first, first};
  out.adversary       = std::move(adv);
  return out;
}

DynamicResult runBestReplyDynamic(std::span<const ValuationPtr> valuations, std::span<XosOracle* const> oracles,
                                  const Allocation& initial, std::size_t roundCap, QueryLedger* ledger)
{
  if (valuations.size() != 2 || oracles.size() != 2 || initial.bidders() != 2)
  {
    throw DomainError("the best-reply dynamic runs on two players");
  }
  int const m           = commonItemCount(valuations);
  Bundle const universe = Bundle::full(m);
  validateAllocation(initial, universe);

  DynamicResult out;
  out.allocation = initial;
  out.bids       = BidProfile(2, m);
  std::vector<Money> lastBids[2] = {std::vector<Money>(static_cast<std::size_t>(m)),
                                    std::vector<Money>(static_cast<std::size_t>(m))};
  std::size_t bidder    = 0;
  std::size_t unchanged = 0;
  bool record           = true;
  while (unchanged < 2)
  {
    if (out.trace.rounds >= roundCap)
    {
      throw DynamicCapExceeded("round cap of " + std::to_string(roundCap) + " reached", std::move(out.trace));
    }
    ++out.trace.rounds;
    std::size_t const responder = 1 - bidder;
    Bundle const own            = out.allocation.bundles[bidder];
    AdditiveClause const a      = oracles[bidder]->clause(own);
    auto& bids                  = lastBids[bidder];
    for (int j = 0; j < m; ++j)
    {
      bids[static_cast<std::size_t>(j)] = own.contains(j) ? a.at(j) : Money(0);
    }
    if (record)
    {
      Money sum = 0;
      for (int j = 0; j < m; ++j)
      {
        std::size_t const h = out.allocation.bundles[0].contains(j) ? 0 : 1;
        sum += lastBids[h][static_cast<std::size_t>(j)];
      }
      out.trace.steps.push_back({out.trace.steps.empty() ? std::size_t{1} : bidder, out.allocation, sum});
      record = false;
    }
    // Prices the responder faces: the bidder's clause, zero on the responder's own items.
    auto const& v       = *valuations[responder];
    Bundle const mine   = out.allocation.bundles[responder];
    Bundle const wanted = demand(v, bids, ledger, responder);
    Money price         = 0;
    wanted.forEachItem([&](int j) { price += bids[static_cast<std::size_t>(j)]; });
    if (wanted != mine && v.value(wanted) - price > v.value(mine))
    {
      out.allocation.bundles[responder] = wanted;
      out.allocation.bundles[bidder]    = universe - wanted;
      // The responder's old bids survive only on items it still holds.
      auto& rb = lastBids[responder];
      for (int j = 0; j < m; ++j)
      {
        if (!wanted.contains(j))
        {
          rb[static_cast<std::size_t>(j)] = 0;
        }
      }
      ++out.trace.exchanges;
      unchanged = 0;
      record    = true;
    }
    else
    {
      ++unchanged;
    }
    bidder = responder;
  }
  for (std::size_t i = 0; i < 2; ++i)
  {
    for (int j = 0; j < m; ++j)
    {
      out.bids.set(i, j, lastBids[i][static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

}  // namespace ssa
