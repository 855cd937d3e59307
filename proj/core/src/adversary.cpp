#include "ssa/errors.hpp"
#include "ssa/hardness.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>

namespace ssa {

namespace {

SensitiveParams adversaryParams(int m)
{
  return m >= 43 ? SensitiveParams{} : SensitiveParams{1, 2};
}

int commonItem(Bundle a, Bundle b)
{
  return (a & b).first();
}

}  // namespace

OddGraphAdversary::OddGraphAdversary(int m)
  : m_(m)
  , half_(m / 2)
  , params_(adversaryParams(m))
  , epsilon_(Money(1, BigInt(1) << (m + 2)))
  , base_(Money(m / 2) + Money(1, 4))
  , threshold_(componentThreshold(m / 2))
  , thresholdValue_(0)
  , shortcutValid_(false)
{
  if (m < 5 || m > 63 || m % 2 == 0)
  {
    throw DomainError("the odd-graph adversary needs odd m in [5, 63]");
  }
  thresholdValue_ = threshold_.convert_to<std::uint64_t>();
  shortcutValid_  = oddGraphBallSize(half_ + 1, 4) >= threshold_;
}

bool OddGraphAdversary::isColored(Bundle bundle) const
{
  return colours_.count(bundle.bits()) != 0;
}

bool OddGraphAdversary::blocked(Bundle b) const
{
  return colours_.count(b.bits()) != 0 || queriedSet_.count(b.bits()) != 0;
}

bool OddGraphAdversary::provenLarge(Bundle start, const std::vector<Bundle>& near) const
{
  auto gap = [&](Bundle b, int floor) {
    int d = 1 << 20;
    for (Bundle q : near)
    {
      d = std::min(d, oddGraphDistance(b, q, m_));
      if (d <= floor)
      {
        break;
      }
    }
    return d;
  };
  Bundle cur = start;
  int d      = gap(cur, -1);
  while (d < 5)
  {
    Bundle next = cur;
    int nextGap = d;
    for (Bundle nb : oddGraphNeighbours(cur, m_))
    {
      if (blocked(nb))
      {
        continue;
      }
      int const g = gap(nb, nextGap);
      if (g > nextGap)
      {
        next    = nb;
        nextGap = g;
      }
    }
    if (next == cur)
    {
      return false;
    }
    cur = next;
    d   = nextGap;
  }
  return true;
}

std::optional<std::vector<Bundle>> OddGraphAdversary::smallComponent(Bundle start,
                                                                     std::uint64_t& materialized) const
{
  std::vector<Bundle> component{start};
  std::unordered_set<std::uint64_t> seen{start.bits()};
  for (std::size_t head = 0; head < component.size(); ++head)
  {
    for (Bundle nb : oddGraphNeighbours(component[head], m_))
    {
      if (blocked(nb) || !seen.insert(nb.bits()).second)
      {
        continue;
      }
      component.push_back(nb);
      if (component.size() >= thresholdValue_)
      {
        materialized += component.size();
        return std::nullopt;
      }
    }
  }
  materialized += component.size();
  if (component.size() >= thresholdValue_)
  {
    return std::nullopt;
  }
  return component;
}

void OddGraphAdversary::colourComponent(const std::vector<Bundle>& component, Bundle centre)
{
  std::unordered_set<std::uint64_t> inside;
  for (Bundle b : component)
  {
    inside.insert(b.bits());
  }
  struct Reached
  {
    Bundle vertex;
    int distance;
    int item;
  };
  std::vector<Reached> order;
  std::unordered_set<std::uint64_t> seen{centre.bits()};
  std::deque<std::pair<Bundle, int>> frontier{{centre, 0}};
  while (!frontier.empty())
  {
    auto const [cur, d] = frontier.front();
    frontier.pop_front();
    for (Bundle nb : oddGraphNeighbours(cur, m_))
    {
      if (inside.count(nb.bits()) == 0 || !seen.insert(nb.bits()).second)
      {
        continue;
      }
      order.push_back({nb, d + 1, commonItem(nb, cur)});
      frontier.emplace_back(nb, d + 1);
    }
  }
  std::stable_sort(order.begin(), order.end(), [](const Reached& a, const Reached& b) {
    if (a.distance != b.distance)
    {
      return a.distance > b.distance;
    }
    return a.vertex.bits() < b.vertex.bits();
  });
  for (auto const& r : order)
  {
    assign(r.vertex, r.item, false);
  }
}

void OddGraphAdversary::assign(Bundle b, int clauseItem, bool isQuery)
{
  ++x_;
  Money value = base_ + Money(x_) * epsilon_;
  colours_.emplace(b.bits(), Colour{value, clauseItem});
  transcript_.push_back({b, std::move(value), clauseItem, queried_.size() - 1, isQuery, false});
  ++stats_.colored;
}

AdversaryAnswer OddGraphAdversary::answerFor(Bundle b, bool replay) const
{
  auto const& c = colours_.at(b.bits());
  AdversaryAnswer out;
  out.value      = c.value;
  out.clauseItem = c.clauseItem;
  b.without(c.clauseItem).forEachItem([&](int j) { out.clause.set(j, 1); });
  out.clause.set(c.clauseItem, c.value - Money(half_));
  out.conceded = conceded_;
  out.replay   = replay;
  return out;
}

AdversaryAnswer OddGraphAdversary::query(Bundle bundle)
{
  if (bundle.size() != half_ + 1 || !bundle.isSubsetOf(Bundle::full(m_)))
  {
    throw DomainError("adversary queries are (m'+1)-bundles");
  }
  ++stats_.queries;
  if (isColored(bundle))
  {
    bool const fresh = queriedSet_.insert(bundle.bits()).second;
    if (fresh)
    {
      queried_.push_back(bundle);
    }
    return answerFor(bundle, !fresh);
  }
  queriedSet_.insert(bundle.bits());
  queried_.push_back(bundle);

  std::vector<Bundle> open;
  for (Bundle nb : oddGraphNeighbours(bundle, m_))
  {
    if (!blocked(nb))
    {
      open.push_back(nb);
    }
  }
  std::vector<Bundle> near;
  if (shortcutValid_ && !open.empty())
  {
    for (Bundle q : queried_)
    {
      if (oddGraphDistance(q, bundle, m_) <= 9)
      {
        near.push_back(q);
      }
    }
  }
  std::uint64_t materialized = 0;
  for (Bundle start : open)
  {
    if (blocked(start))
    {
      continue;
    }
    if (shortcutValid_ && provenLarge(start, near))
    {
      ++stats_.shortcuts;
      continue;
    }
    ++stats_.bfsRuns;
    if (auto component = smallComponent(start, materialized))
    {
      colourComponent(*component, bundle);
    }
  }
  stats_.maxBfsPerQuery = std::max(stats_.maxBfsPerQuery, materialized);

  int item = -1;
  bundle.forEachItem([&](int j) {
    if (item < 0 && !blocked((Bundle::full(m_) - bundle).with(j)))
    {
      item = j;
    }
  });
  if (item < 0)
  {
    conceded_ = true;
    item      = bundle.first();
  }
  assign(bundle, item, true);
  transcript_.back().conceded = conceded_;
  return answerFor(bundle, false);
}

Money OddGraphAdversary::value(Bundle bundle)
{
  int const s = bundle.size();
  int const g = params_.g;
  int const h = params_.h;
  if (s == half_ + 1)
  {
    return query(bundle).value;
  }
  if (s > half_ + 1 && s < half_ + h)
  {
    throw DomainError("values of sizes m'+2 .. m'+h-1 depend on unqueried bundles");
  }
  if (s == 0)
  {
    return 0;
  }
  if (s <= half_ - g)
  {
    return half_ - g;
  }
  if (s <= half_)
  {
    return s;
  }
  return half_ + 1;
}

Bundle OddGraphAdversary::demand(std::span<const Money> prices)
{
  if (prices.size() != static_cast<std::size_t>(m_))
  {
    throw DomainError("price vector length differs from m");
  }
  for (auto const& p : prices)
  {
    if (p < 0)
    {
      throw DomainError("demand prices must be non-negative");
    }
  }
  ++stats_.demandQueries;
  int const g = params_.g;
  int const h = params_.h;
  std::vector<int> order(static_cast<std::size_t>(m_));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return prices[static_cast<std::size_t>(a)] < prices[static_cast<std::size_t>(b)];
  });
  Money known = 0;
  Money paid  = 0;
  Money const bWeight(half_ + 1, half_ + h);
  for (int s = 1; s <= m_; ++s)
  {
    paid += prices[static_cast<std::size_t>(order[static_cast<std::size_t>(s - 1)])];
    Money worth;
    if (s <= half_ - g)
    {
      worth = half_ - g;
    }
    else if (s <= half_)
    {
      worth = s;
    }
    else if (s < half_ + h)
    {
      worth = bWeight * s;
    }
    else
    {
      worth = half_ + 1;
    }
    known = std::max(known, Money(worth - paid));
  }
  for (auto const& [bits, colour] : colours_)
  {
    Money p = 0;
    Bundle(bits).forEachItem([&](int j) { p += prices[static_cast<std::size_t>(j)]; });
    known = std::max(known, Money(colour.value - p));
  }
  Money const ceiling = Money(half_) + Money(1, 2);
  CheapestSubsets gen(prices, half_ + 1);
  while (auto next = gen.next())
  {
    if (ceiling - next->second < known)
    {
      break;
    }
    if (!isColored(next->first))
    {
      query(next->first);
    }
    if (gen.produced() > SensitiveValuation::kMaxSupport)
    {
      throw CapabilityError("demand query covers too many undecided bundles");
    }
  }
  return sparseDemandOracle(*realized(), prices);
}

std::shared_ptr<SensitiveValuation> OddGraphAdversary::realized() const
{
  SensitiveMap map;
  map.reserve(colours_.size());
  for (auto const& [bits, colour] : colours_)
  {
    map.emplace(bits, SensitiveEntry{colour.value - base_, colour.clauseItem});
  }
  return std::make_shared<SensitiveValuation>(m_, std::move(map), epsilon_ / 2, params_);
}

AuditResult auditTranscript(const OddGraphAdversary& adversary)
{
  auto const& events = adversary.transcript();
  int const m        = adversary.itemCount();
  Bundle const all   = Bundle::full(m);
  std::unordered_map<std::uint64_t, std::size_t> when;
  for (std::size_t i = 0; i < events.size(); ++i)
  {
    auto const& e = events[i];
    if (!when.emplace(e.vertex.bits(), i).second)
    {
      return {false, "vertex assigned twice: " + toString(e.vertex)};
    }
    if (i > 0 && !(events[i - 1].value < e.value))
    {
      return {false, "values not strictly increasing at " + toString(e.vertex)};
    }
    if (!e.vertex.contains(e.clauseItem))
    {
      return {false, "clause item outside its bundle " + toString(e.vertex)};
    }
  }
  for (std::size_t i = 0; i < events.size(); ++i)
  {
    auto const& e = events[i];
    if (e.conceded)
    {
      continue;
    }
    Bundle const nb = (all - e.vertex).with(e.clauseItem);
    auto const it   = when.find(nb.bits());
    if (it != when.end() && it->second < i)
    {
      return {false, "clause of " + toString(e.vertex) + " points at a vertex colored earlier"};
    }
    if (!e.isQuery && it == when.end())
    {
      return {false, "component vertex " + toString(e.vertex) + " points at an uncolored vertex"};
    }
  }
  return {};
}

std::string_view algorithmName(SearchAlgorithm algorithm)
{
  switch (algorithm)
  {
    case SearchAlgorithm::HillClimb: return "hill";
    case SearchAlgorithm::RandomProbe: return "random";
    case SearchAlgorithm::BestReply: return "bestreply";
  }
  return "?";
}

SearchAlgorithm algorithmByName(const std::string& name)
{
  if (name == "hill" || name == "hill-climb")
  {
    return SearchAlgorithm::HillClimb;
  }
  if (name == "random" || name == "random-probe")
  {
    return SearchAlgorithm::RandomProbe;
  }
  if (name == "bestreply" || name == "best-reply")
  {
    return SearchAlgorithm::BestReply;
  }
  throw DomainError("unknown search algorithm: " + name);
}

namespace {

std::optional<LocalMaxCertificate> probe(OddGraphAdversary& adv, Bundle s, const AdversaryAnswer& a)
{
  Bundle const nb = (Bundle::full(adv.itemCount()) - s).with(a.clauseItem);
  auto const b    = adv.query(nb);
  if (a.value >= b.value)
  {
    return LocalMaxCertificate{s, a.clauseItem, a.value, b.value};
  }
  return std::nullopt;
}

void hillClimb(OddGraphAdversary& adv, std::uint64_t budget, SearchReport& report)
{
  int const m     = adv.itemCount();
  Bundle cur      = Bundle::full(adv.half() + 1);
  AdversaryAnswer a = adv.query(cur);
  while (adv.stats().queries < budget)
  {
    Bundle const nb = (Bundle::full(m) - cur).with(a.clauseItem);
    AdversaryAnswer b = adv.query(nb);
    if (a.value >= b.value)
    {
      report.found = LocalMaxCertificate{cur, a.clauseItem, a.value, b.value};
      return;
    }
    cur = nb;
    a   = std::move(b);
  }
}

void randomProbe(OddGraphAdversary& adv, std::uint64_t budget, std::uint64_t seed, SearchReport& report)
{
  int const m = adv.itemCount();
  std::mt19937_64 rng(seed);
  std::vector<int> items(static_cast<std::size_t>(m));
  std::iota(items.begin(), items.end(), 0);
  while (adv.stats().queries < budget)
  {
    std::shuffle(items.begin(), items.end(), rng);
    Bundle s;
    for (int i = 0; i <= adv.half(); ++i)
    {
      s = s.with(items[static_cast<std::size_t>(i)]);
    }
    auto const a = adv.query(s);
    if (auto cert = probe(adv, s, a))
    {
      report.found = cert;
      return;
    }
  }
}

void bestReply(OddGraphAdversary& adv, std::uint64_t budget, SearchReport& report)
{
  int const m = adv.itemCount();
  Bundle big  = Bundle::full(adv.half() + 1);
  while (adv.stats().queries < budget)
  {
    auto const a = adv.query(big);
    std::vector<Money> prices(static_cast<std::size_t>(m), Money(0));
    for (auto const& [j, w] : a.clause.entries())
    {
      if (big.contains(j))
      {
        prices[static_cast<std::size_t>(j)] = w;
      }
    }
    Bundle const own   = Bundle::full(m) - big;
    Bundle const reply = adv.demand(prices);
    Money profit       = adv.realized()->value(reply);
    reply.forEachItem([&](int j) { profit -= prices[static_cast<std::size_t>(j)]; });
    if (reply == own || profit <= Money(own.size()))
    {
      report.found = probe(adv, big, a);
      return;
    }
    if (reply.size() != adv.half() + 1)
    {
      throw DomainError("best reply left the (m', m'+1) split");
    }
    big = reply;
  }
}

}  // namespace

SearchReport runSearcher(int m, SearchAlgorithm algorithm, std::uint64_t budget, std::uint64_t seed)
{
  OddGraphAdversary adv(m);
  SearchReport report;
  report.algorithm = algorithm;
  report.m         = m;
  report.bound     = queryLowerBound(adv.half());
  switch (algorithm)
  {
    case SearchAlgorithm::HillClimb: hillClimb(adv, budget, report); break;
    case SearchAlgorithm::RandomProbe: randomProbe(adv, budget, seed, report); break;
    case SearchAlgorithm::BestReply: bestReply(adv, budget, report); break;
  }
  report.queries       = adv.stats().queries + adv.stats().demandQueries;
  report.distinct      = adv.queried().size();
  report.demandQueries = adv.stats().demandQueries;
  report.conceded      = adv.conceded();
  report.stats         = adv.stats();
  report.audit         = auditTranscript(adv);
  return report;
}

}  // namespace ssa
