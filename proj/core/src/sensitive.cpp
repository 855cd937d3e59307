#include "ssa/errors.hpp"
#include "ssa/hardness.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <numeric>

namespace ssa {

namespace {

BigInt choose(int n, int k)
{
  if (k < 0 || k > n)
  {
    return 0;
  }
  BigInt r = 1;
  for (int i = 0; i < k; ++i)
  {
    r = r * (n - i) / (i + 1);
  }
  return r;
}

/// Smallest members of `pool` not in `base` added until the result has `size` items.
Bundle padSmallest(Bundle base, int size, int m)
{
  for (int j = 0; j < m && base.size() < size; ++j)
  {
    base = base.with(j);
  }
  return base;
}

/// Lexicographically smallest k-subset of `bundle` rejected by `taken`, if any.
template <class Taken>
std::optional<Bundle> firstSubsetNotIn(Bundle bundle, int k, Taken&& taken)
{
  std::vector<int> const items = bundle.items();
  int const n                  = static_cast<int>(items.size());
  if (k > n)
  {
    return std::nullopt;
  }
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  while (true)
  {
    Bundle sub;
    for (int i : idx)
    {
      sub = sub.with(items[static_cast<std::size_t>(i)]);
    }
    if (!taken(sub))
    {
      return sub;
    }
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i)
    {
      --i;
    }
    if (i < 0)
    {
      return std::nullopt;
    }
    ++idx[static_cast<std::size_t>(i)];
    for (int t = i + 1; t < k; ++t)
    {
      idx[static_cast<std::size_t>(t)] = idx[static_cast<std::size_t>(t - 1)] + 1;
    }
  }
}

AdditiveClause uniformClause(Bundle base, const Money& weight)
{
  AdditiveClause c;
  base.forEachItem([&](int j) { c.set(j, weight); });
  return c;
}

}  // namespace

SensitiveValuation::SensitiveValuation(int m, SensitiveMap kMap, Money defaultK, SensitiveParams params)
  : Valuation(m)
  , half_(m / 2)
  , params_(params)
  , kMap_(std::move(kMap))
  , defaultK_(std::move(defaultK))
{
  if (m < 3 || m % 2 == 0)
  {
    throw DomainError("sensitive valuations need odd m >= 3");
  }
  if (params_.literal() && m < 43)
  {
    throw DomainError("the literal sensitive family needs m >= 43");
  }
  if (params_.g < 0 || params_.g > half_ - 1 || params_.h < 2 || params_.h > half_ + 1)
  {
    throw DomainError("sensitive parameters need 0 <= g < m' and 2 <= h <= m'+1");
  }
  if (defaultK_ <= 0 || defaultK_ >= Money(1, 4))
  {
    throw DomainError("default k must lie in (0, 1/4)");
  }
  Bundle const all = universe();
  for (auto const& [bits, entry] : kMap_)
  {
    Bundle const b(bits);
    if (!b.isSubsetOf(all) || b.size() != half_ + 1)
    {
      throw DomainError("k entries must be (m'+1)-bundles: " + toString(b));
    }
    if (entry.k <= 0 || entry.k >= Money(1, 4))
    {
      throw DomainError("k must lie in (0, 1/4) for " + toString(b));
    }
    if (entry.clauseItem != -1 && !b.contains(entry.clauseItem))
    {
      throw DomainError("clause item outside its bundle " + toString(b));
    }
  }
}

Money SensitiveValuation::k(Bundle bundle) const
{
  auto it = kMap_.find(bundle.bits());
  return it == kMap_.end() ? defaultK_ : it->second.k;
}

int SensitiveValuation::clauseItem(Bundle bundle) const
{
  auto it = kMap_.find(bundle.bits());
  if (it != kMap_.end() && it->second.clauseItem >= 0)
  {
    return it->second.clauseItem;
  }
  return bundle.first();
}

std::pair<Money, Bundle> SensitiveValuation::maxSubsetK(Bundle bundle) const
{
  int const k = half_ + 1;
  if (bundle.size() < k)
  {
    throw DomainError("maxSubsetK needs at least m'+1 items");
  }
  if (bundle.size() == k)
  {
    return {this->k(bundle), bundle};
  }
  std::uint64_t inside = 0;
  std::optional<std::pair<Money, Bundle>> best;
  for (auto const& [bits, entry] : kMap_)
  {
    Bundle const t(bits);
    if (!t.isSubsetOf(bundle))
    {
      continue;
    }
    ++inside;
    if (!best || entry.k > best->first || (entry.k == best->first && lexLess(t, best->second)))
    {
      best = std::pair{entry.k, t};
    }
  }
  if (BigInt(inside) < choose(bundle.size(), k) && (!best || defaultK_ >= best->first))
  {
    auto const free =
      firstSubsetNotIn(bundle, k, [&](Bundle s) { return kMap_.count(s.bits()) != 0; });
    if (!best || defaultK_ > best->first || lexLess(*free, best->second))
    {
      best = std::pair{defaultK_, *free};
    }
  }
  return *best;
}

Money SensitiveValuation::evaluate(Bundle bundle) const
{
  int const s = bundle.size();
  if (s > half_ && s < half_ + params_.h)
  {
    Money const viaB = Money(half_ + 1, half_ + params_.h) * s;
    return std::max(sensitiveValue(*this, bundle), viaB);
  }
  return sensitiveValue(*this, bundle);
}

Money sensitiveValue(const SensitiveValuation& v, Bundle bundle)
{
  int const s    = bundle.size();
  int const half = v.half();
  if (s == 0)
  {
    return 0;
  }
  if (s <= half - v.params().g)
  {
    return half - v.params().g;
  }
  if (s <= half)
  {
    return s;
  }
  if (s < half + v.params().h)
  {
    return Money(half) + Money(1, 4) + v.maxSubsetK(bundle).first;
  }
  return half + 1;
}

std::string_view familyName(ClauseFamily family)
{
  switch (family)
  {
    case ClauseFamily::None: return "none";
    case ClauseFamily::C: return "C";
    case ClauseFamily::A: return "A";
    case ClauseFamily::M: return "M";
    case ClauseFamily::B: return "B";
  }
  return "?";
}

SensitiveClause sensitiveClause(const SensitiveValuation& v, Bundle bundle)
{
  if (!bundle.isSubsetOf(v.universe()))
  {
    throw DomainError("bundle outside the item range");
  }
  int const s    = bundle.size();
  int const half = v.half();
  int const m    = v.itemCount();
  int const h    = v.params().h;
  Money const bWeight(half + 1, half + h);
  SensitiveClause out;
  if (s == 0)
  {
    return out;
  }
  if (s <= half - v.params().g)
  {
    out.family = ClauseFamily::C;
    out.item   = bundle.first();
    out.base   = Bundle::single(out.item);
    out.clause.set(out.item, half - v.params().g);
    return out;
  }
  if (s <= half)
  {
    out.family = ClauseFamily::A;
    out.base   = padSmallest(bundle, half, m);
    out.clause = uniformClause(out.base, 1);
    return out;
  }
  if (s < half + h)
  {
    auto const [k, t] = v.maxSubsetK(bundle);
    if (bWeight * s <= Money(half) + Money(1, 4) + k)
    {
      out.family = ClauseFamily::M;
      out.base   = t;
      out.item   = v.clauseItem(t);
      out.clause = uniformClause(t.without(out.item), 1);
      out.clause.set(out.item, Money(1, 4) + k);
      return out;
    }
    out.family = ClauseFamily::B;
    out.base   = padSmallest(bundle, half + h, m);
    out.clause = uniformClause(out.base, bWeight);
    return out;
  }
  Bundle base;
  for (int j : bundle.items())
  {
    if (base.size() == half + h)
    {
      break;
    }
    base = base.with(j);
  }
  out.family = ClauseFamily::B;
  out.base   = base;
  out.clause = uniformClause(base, bWeight);
  return out;
}

std::optional<AdditiveClause> SensitiveValuation::storedClause(Bundle bundle) const
{
  return sensitiveClause(*this, bundle).clause;
}

std::optional<Bundle> SensitiveValuation::closedFormDemand(std::span<const Money> prices) const
{
  if (kMap_.size() > kMaxSupport)
  {
    return std::nullopt;
  }
  return sparseDemandOracle(*this, prices);
}

nlohmann::json SensitiveValuation::toJson() const
{
  std::vector<std::uint64_t> keys;
  keys.reserve(kMap_.size());
  for (auto const& [bits, entry] : kMap_)
  {
    keys.push_back(bits);
  }
  std::sort(keys.begin(), keys.end());
  auto entries = nlohmann::json::array();
  for (auto bits : keys)
  {
    auto const& e = kMap_.at(bits);
    entries.push_back({{"items", Bundle(bits).items()}, {"k", toString(e.k)}, {"item", e.clauseItem}});
  }
  return {{"kind", "sensitive"}, {"m", itemCount()},       {"g", params_.g},
          {"h", params_.h},      {"default_k", toString(defaultK_)}, {"entries", entries}};
}

bool isJLocalMax(const SensitiveValuation& v, Bundle bundle, int item)
{
  if (bundle.size() != v.half() + 1 || !bundle.contains(item) || !bundle.isSubsetOf(v.universe()))
  {
    throw DomainError("j-local maxima are defined for (m'+1)-bundles containing j");
  }
  Bundle const neighbour = (v.universe() - bundle).with(item);
  return sensitiveValue(v, bundle) >= sensitiveValue(v, neighbour);
}

std::optional<LocalMaxCertificate> localMaxCertificate(const SensitiveValuation& v, Bundle bundle)
{
  int const j = v.clauseItem(bundle);
  if (!isJLocalMax(v, bundle, j))
  {
    return std::nullopt;
  }
  Bundle const neighbour = (v.universe() - bundle).with(j);
  return LocalMaxCertificate{bundle, j, sensitiveValue(v, bundle), sensitiveValue(v, neighbour)};
}

Bundle sparseDemandOracle(const SensitiveValuation& v, std::span<const Money> prices)
{
  int const m    = v.itemCount();
  int const half = v.half();
  int const g    = v.params().g;
  int const h    = v.params().h;
  if (prices.size() != static_cast<std::size_t>(m))
  {
    throw DomainError("price vector length differs from m");
  }
  if (v.entries().size() > SensitiveValuation::kMaxSupport)
  {
    throw CapabilityError("sparse demand supports at most 1e5 k entries");
  }
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return prices[static_cast<std::size_t>(a)] < prices[static_cast<std::size_t>(b)];
  });
  auto price = [&](Bundle b) {
    Money p = 0;
    b.forEachItem([&](int j) { p += prices[static_cast<std::size_t>(j)]; });
    return p;
  };

  Bundle best;
  Money bestProfit = 0;
  auto consider    = [&](Bundle b, const Money& profit) {
    if (profit > bestProfit || (profit == bestProfit && tieRuleLess(b, best)))
    {
      best       = b;
      bestProfit = profit;
    }
  };

  Money const quarter(1, 4);
  Money const bWeight(half + 1, half + h);
  Bundle prefix;
  Money prefixPrice = 0;
  for (int s = 1; s <= m; ++s)
  {
    int const j = order[static_cast<std::size_t>(s - 1)];
    prefix      = prefix.with(j);
    prefixPrice += prices[static_cast<std::size_t>(j)];
    if (s <= half - g)
    {
      consider(prefix, Money(half - g) - prefixPrice);
    }
    else if (s <= half)
    {
      consider(prefix, Money(s) - prefixPrice);
    }
    else if (s < half + h)
    {
      consider(prefix, bWeight * s - prefixPrice);
    }
    else
    {
      consider(prefix, Money(half + 1) - prefixPrice);
    }
  }

  int const k = half + 1;
  for (auto const& [bits, entry] : v.entries())
  {
    Bundle padded(bits);
    Money paid       = price(padded);
    Money const base = Money(half) + quarter + entry.k;
    consider(padded, base - paid);
    for (int j : order)
    {
      if (padded.size() >= half + h - 1)
      {
        break;
      }
      if (padded.contains(j))
      {
        continue;
      }
      padded = padded.with(j);
      paid += prices[static_cast<std::size_t>(j)];
      consider(padded, base - paid);
    }
  }

  Money const viaDefault = Money(half) + quarter + v.defaultK();
  for (int s = k; s < half + h; ++s)
  {
    BigInt const subsets = choose(s, k);
    CheapestSubsets gen(prices, s);
    std::uint64_t steps = 0;
    while (auto next = gen.next())
    {
      auto const& [cand, paid] = *next;
      if (viaDefault - paid < bestProfit)
      {
        break;
      }
      std::uint64_t inside = 0;
      if (s == k)
      {
        inside = v.entries().count(cand.bits());
      }
      else
      {
        for (auto const& [bits, entry] : v.entries())
        {
          inside += Bundle(bits).isSubsetOf(cand) ? 1 : 0;
        }
      }
      if (BigInt(inside) < subsets)
      {
        consider(cand, viaDefault - paid);
        break;
      }
      if (++steps > SensitiveValuation::kMaxSupport + 1)
      {
        throw CapabilityError("default-k bundle search exceeded its budget");
      }
    }
  }
  return best;
}

bool eqCharCheck(const Allocation& allocation, const SensitiveValuation& v)
{
  if (allocation.bundles.size() != 2)
  {
    throw DomainError("the characterization is for two bidders");
  }
  int const half = v.half();
  Bundle const a = allocation.bundles[0];
  Bundle const b = allocation.bundles[1];
  Bundle big;
  if (a.size() == half + 1 && b.size() == half)
  {
    big = a;
  }
  else if (b.size() == half + 1 && a.size() == half)
  {
    big = b;
  }
  else
  {
    return false;
  }
  auto const clause = sensitiveClause(v, big);
  return clause.family == ClauseFamily::M && clause.base == big && isJLocalMax(v, big, clause.item);
}

BigInt coverBoundFormula(int m)
{
  if (m < 1)
  {
    throw DomainError("cover bound needs m >= 1");
  }
  return BigInt(1000) * boost::multiprecision::pow(BigInt(m), 765);
}

bool CheapestSubsets::Later::operator()(const Node& a, const Node& b) const
{
  if (a.price != b.price)
  {
    return a.price > b.price;
  }
  return lexLess(Bundle(b.positions), Bundle(a.positions));
}

CheapestSubsets::CheapestSubsets(std::span<const Money> prices, int k)
{
  int const n = static_cast<int>(prices.size());
  order_.resize(prices.size());
  std::iota(order_.begin(), order_.end(), 0);
  std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
    return prices[static_cast<std::size_t>(a)] < prices[static_cast<std::size_t>(b)];
  });
  for (int j : order_)
  {
    sortedPrices_.push_back(prices[static_cast<std::size_t>(j)]);
  }
  if (k < 0 || k > n)
  {
    return;
  }
  std::uint64_t const root = k == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
  Money p                  = 0;
  for (int i = 0; i < k; ++i)
  {
    p += sortedPrices_[static_cast<std::size_t>(i)];
  }
  heap_.push_back({p, root});
  seen_.insert(root);
}

std::optional<std::pair<Bundle, Money>> CheapestSubsets::next()
{
  if (heap_.empty())
  {
    return std::nullopt;
  }
  std::pop_heap(heap_.begin(), heap_.end(), Later{});
  Node node = std::move(heap_.back());
  heap_.pop_back();
  int const n = static_cast<int>(order_.size());
  Bundle items;
  Bundle(node.positions).forEachItem([&](int pos) {
    items = items.with(order_[static_cast<std::size_t>(pos)]);
    if (pos + 1 < n && ((node.positions >> (pos + 1)) & 1U) == 0)
    {
      std::uint64_t const child = (node.positions & ~(std::uint64_t{1} << pos)) | (std::uint64_t{1} << (pos + 1));
      if (seen_.insert(child).second)
      {
        Money const p = node.price - sortedPrices_[static_cast<std::size_t>(pos)] +
                        sortedPrices_[static_cast<std::size_t>(pos + 1)];
        heap_.push_back({p, child});
        std::push_heap(heap_.begin(), heap_.end(), Later{});
      }
    }
  });
  ++produced_;
  return std::pair{items, node.price};
}

}  // namespace ssa
