#include "ssa/valuation.hpp"

#include "ssa/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>

namespace ssa {

std::string_view kindName(ValuationKind kind)
{
  switch (kind)
  {
  case ValuationKind::Table:
    return "table";
  case ValuationKind::Additive:
    return "additive";
  case ValuationKind::BudgetAdditive:
    return "budget_additive";
  case ValuationKind::Xos:
    return "xos";
  case ValuationKind::Coverage:
    return "coverage";
  case ValuationKind::SetPair:
    return "setpair";
  case ValuationKind::Sensitive:
    return "sensitive";
  case ValuationKind::Gray:
    return "gray";
  case ValuationKind::Marginal:
    return "marginal";
  case ValuationKind::Erased:
    return "erased";
  }
  return "unknown";
}

AdditiveClause::AdditiveClause(std::map<int, Money> perItem)
  : perItem_(std::move(perItem))
{
  for (auto const& [item, weight] : perItem_)
  {
    if (item < 0 || item >= kMaxItems || weight < 0)
    {
      throw DomainError("additive clause entries must be non-negative on valid items");
    }
  }
}

Money AdditiveClause::at(int item) const
{
  auto it = perItem_.find(item);
  return it == perItem_.end() ? Money(0) : it->second;
}

Money AdditiveClause::total(Bundle bundle) const
{
  Money out = 0;
  for (auto const& [item, weight] : perItem_)
  {
    if (bundle.contains(item))
    {
      out += weight;
    }
  }
  return out;
}

void AdditiveClause::set(int item, Money weight)
{
  if (item < 0 || item >= kMaxItems || weight < 0)
  {
    throw DomainError("additive clause entries must be non-negative on valid items");
  }
  perItem_[item] = std::move(weight);
}

Valuation::Valuation(int itemCount)
  : m_(itemCount)
{
  if (itemCount < 0 || itemCount > kMaxItems)
  {
    throw DomainError("item count must lie in [0, 64]");
  }
}

void Valuation::checkBundle(Bundle bundle) const
{
  if (!bundle.isSubsetOf(universe()))
  {
    throw DomainError("bundle " + toString(bundle) + " has an item index >= m = " +
                      std::to_string(m_));
  }
}

Money Valuation::value(Bundle bundle) const
{
  checkBundle(bundle);
  if (bundle.empty())
  {
    return 0;
  }
  return evaluate(bundle);
}

std::optional<Bundle> Valuation::closedFormDemand(std::span<const Money>) const
{
  return std::nullopt;
}

std::optional<AdditiveClause> Valuation::storedClause(Bundle) const
{
  return std::nullopt;
}

nlohmann::json Valuation::toJson() const
{
  throw CapabilityError(std::string("valuation kind '") + std::string(kindName(kind())) +
                        "' has no serialized form");
}

QueryLedger::QueryLedger(std::size_t bidders)
  : counts_(bidders)
{}

QueryLedger::Counts& QueryLedger::slot(std::size_t bidder)
{
  if (bidder >= counts_.size())
  {
    counts_.resize(bidder + 1);
  }
  return counts_[bidder];
}

void QueryLedger::chargeValue(std::size_t bidder, std::uint64_t count)
{
  slot(bidder).value += count;
}

void QueryLedger::chargeDemand(std::size_t bidder, std::uint64_t count)
{
  slot(bidder).demand += count;
}

void QueryLedger::chargeXos(std::size_t bidder, std::uint64_t count)
{
  slot(bidder).xos += count;
}

QueryLedger::Counts QueryLedger::at(std::size_t bidder) const
{
  return bidder < counts_.size() ? counts_[bidder] : Counts{};
}

QueryLedger::Counts QueryLedger::total() const
{
  Counts out;
  for (auto const& c : counts_)
  {
    out.value += c.value;
    out.demand += c.demand;
    out.xos += c.xos;
  }
  return out;
}

Money value(const Valuation& v, Bundle bundle, QueryLedger* ledger, std::size_t bidder)
{
  Money out = v.value(bundle);
  if (ledger != nullptr)
  {
    ledger->chargeValue(bidder, v.queryCost());
  }
  return out;
}

Money marginal(const Valuation& v, int item, Bundle given, QueryLedger* ledger, std::size_t bidder)
{
  if (item < 0 || item >= v.itemCount())
  {
    throw DomainError("item index " + std::to_string(item) + " >= m");
  }
  if (given.contains(item))
  {
    return 0;
  }
  return value(v, given.with(item), ledger, bidder) - value(v, given, ledger, bidder);
}

namespace {

void checkPrices(const Valuation& v, std::span<const Money> prices)
{
  if (prices.size() != static_cast<std::size_t>(v.itemCount()))
  {
    throw DomainError("price vector length must equal m");
  }
  for (auto const& p : prices)
  {
    if (p < 0)
    {
      throw DomainError("prices must be non-negative");
    }
  }
}

}  // namespace

Bundle exhaustiveDemand(const Valuation& v, std::span<const Money> prices)
{
  checkPrices(v, prices);
  int const m = v.itemCount();
  if (m > kMaxTableItems)
  {
    throw CapabilityError("exhaustive demand needs m <= 20");
  }
  std::uint64_t const count = std::uint64_t{1} << m;
  // price[s] extends price[s without its lowest item].
  std::vector<Money> price(count);
  Bundle best;
  Money bestProfit = 0;
  for (std::uint64_t s = 1; s < count; ++s)
  {
    int const low = std::countr_zero(s);
    price[s]      = price[s & (s - 1)] + prices[static_cast<std::size_t>(low)];
    Bundle const bundle(s);
    Money const profit = v.value(bundle) - price[s];
    if (profit > bestProfit || (profit == bestProfit && tieRuleLess(bundle, best)))
    {
      bestProfit = profit;
      best       = bundle;
    }
  }
  return best;
}

Bundle demand(const Valuation& v, std::span<const Money> prices, QueryLedger* ledger, std::size_t bidder)
{
  checkPrices(v, prices);
  if (ledger != nullptr)
  {
    ledger->chargeDemand(bidder);
  }
  if (auto closed = v.closedFormDemand(prices))
  {
    return *closed;
  }
  if (v.itemCount() > kMaxTableItems)
  {
    throw CapabilityError(std::string("no closed-form demand for kind '") +
                          std::string(kindName(v.kind())) + "' at m > 20");
  }
  return exhaustiveDemand(v, prices);
}

AdditiveClause xosClause(const Valuation& v, Bundle bundle, std::span<const int> ordering,
                         QueryLedger* ledger, std::size_t bidder)
{
  if (!bundle.isSubsetOf(v.universe()))
  {
    throw DomainError("bundle has an item index >= m");
  }
  if (auto stored = v.storedClause(bundle))
  {
    if (ledger != nullptr)
    {
      ledger->chargeXos(bidder);
    }
    return *stored;
  }
  if (!v.supportsOrderedClauses())
  {
    throw CapabilityError(std::string("kind '") + std::string(kindName(v.kind())) +
                          "' has no XOS clause oracle");
  }
  Bundle seen;
  for (int item : ordering)
  {
    if (item < 0 || !bundle.contains(item) || seen.contains(item))
    {
      throw DomainError("ordering must be a permutation of the bundle");
    }
    seen = seen.with(item);
  }
  if (seen != bundle)
  {
    throw DomainError("ordering must be a permutation of the bundle");
  }
  if (ledger != nullptr)
  {
    ledger->chargeXos(bidder);
  }
  AdditiveClause clause;
  Bundle prefix;
  Money previous = 0;
  for (int item : ordering)
  {
    prefix             = prefix.with(item);
    Money const current = v.value(prefix);
    clause.set(item, current - previous);
    previous = current;
  }
  return clause;
}

std::vector<Money> tabulate(const Valuation& v)
{
  int const m = v.itemCount();
  if (m > kMaxTableItems)
  {
    throw CapabilityError("tabulation needs m <= 20");
  }
  std::uint64_t const count = std::uint64_t{1} << m;
  std::vector<Money> out(count);
  for (std::uint64_t s = 1; s < count; ++s)
  {
    out[s] = v.value(Bundle(s));
  }
  return out;
}

}  // namespace ssa
