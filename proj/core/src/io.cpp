#include "ssa/io.hpp"

#include "ssa/errors.hpp"
#include "ssa/hardness.hpp"
#include "ssa/xos_dynamics.hpp"

#include <fstream>
#include <iostream>

namespace ssa {

namespace {

std::vector<Money> moneyVector(const nlohmann::json& j)
{
  std::vector<Money> out;
  for (auto const& x : j)
  {
    out.push_back(moneyFromJson(x));
  }
  return out;
}

Bundle bundleFromJson(const nlohmann::json& j)
{
  Bundle b;
  for (auto const& x : j)
  {
    int const item = x.get<int>();
    if (item < 0 || item >= kMaxItems)
    {
      throw DomainError("item index out of range: " + std::to_string(item));
    }
    b = b.with(item);
  }
  return b;
}

}  // namespace

nlohmann::json moneyToJson(const Money& amount)
{
  return toString(amount);
}

Money moneyFromJson(const nlohmann::json& j)
{
  if (j.is_string())
  {
    return parseMoney(j.get<std::string>());
  }
  if (j.is_number_integer())
  {
    return Money(j.get<long long>());
  }
  throw DomainError("amounts are \"num/den\" strings or integers: " + j.dump());
}

ValuationPtr valuationFromJson(const nlohmann::json& j)
{
  std::string const kind = j.at("kind").get<std::string>();
  int const m            = j.at("m").get<int>();
  if (kind == "table")
  {
    auto v = std::make_shared<TableValuation>(m, moneyVector(j.at("values")));
    v->markSubmodular(j.value("submodular", false));
    return v;
  }
  if (kind == "additive")
  {
    return std::make_shared<AdditiveValuation>(moneyVector(j.at("items")));
  }
  if (kind == "budget_additive")
  {
    return std::make_shared<BudgetAdditiveValuation>(moneyFromJson(j.at("budget")), moneyVector(j.at("items")));
  }
  if (kind == "xos")
  {
    std::vector<AdditiveClause> clauses;
    for (auto const& c : j.at("clauses"))
    {
      std::map<int, Money> perItem;
      auto const dense = moneyVector(c);
      for (std::size_t i = 0; i < dense.size(); ++i)
      {
        if (dense[i] != 0)
        {
          perItem.emplace(static_cast<int>(i), dense[i]);
        }
      }
      clauses.emplace_back(std::move(perItem));
    }
    return std::make_shared<XosValuation>(m, std::move(clauses));
  }
  if (kind == "coverage")
  {
    std::vector<WeightedEdge> edges;
    for (auto const& e : j.at("edges"))
    {
      edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), moneyFromJson(e.at(2))});
    }
    return std::make_shared<CoverageValuation>(WeightedGraph(m, std::move(edges)));
  }
  if (kind == "set_pair")
  {
    SetPairSystem system;
    system.m = m;
    for (auto const& p : j.at("pairs"))
    {
      system.pairs.push_back({bundleFromJson(p.at(0)), bundleFromJson(p.at(1))});
    }
    DisjointnessInput flags;
    for (auto const& f : j.at("flags"))
    {
      flags.push_back(f.get<int>() != 0);
    }
    return std::make_shared<SetPairValuation>(std::move(system), std::move(flags), j.at("player").get<std::size_t>());
  }
  if (kind == "sensitive")
  {
    SensitiveMap map;
    for (auto const& e : j.at("entries"))
    {
      map.emplace(bundleFromJson(e.at("items")).bits(),
                  SensitiveEntry{moneyFromJson(e.at("k")), e.value("item", -1)});
    }
    return std::make_shared<SensitiveValuation>(m, std::move(map), moneyFromJson(j.at("default_k")),
                                                SensitiveParams{j.value("g", 20), j.value("h", 10)});
  }
  if (kind == "gray")
  {
    auto coeffs = std::make_shared<GrayCoefficients>();
    for (auto const& e : j.at("k"))
    {
      coeffs->assign(bundleFromJson(e.at(0)), e.at(1).get<std::int64_t>());
    }
    return std::make_shared<GrayValuation>(m, moneyFromJson(j.at("epsilon")), std::move(coeffs));
  }
  throw DomainError("unknown valuation kind: " + kind);
}

nlohmann::json allocationToJson(const Allocation& allocation)
{
  auto out = nlohmann::json::array();
  for (Bundle b : allocation.bundles)
  {
    out.push_back(b.items());
  }
  return out;
}

Allocation allocationFromJson(const nlohmann::json& j)
{
  Allocation out;
  for (auto const& b : j)
  {
    out.bundles.push_back(bundleFromJson(b));
  }
  return out;
}

nlohmann::json bidsToJson(const BidProfile& bids)
{
  auto rows = nlohmann::json::array();
  for (std::size_t i = 0; i < bids.bidders(); ++i)
  {
    auto row = nlohmann::json::array();
    for (int j = 0; j < bids.items(); ++j)
    {
      row.push_back(toString(bids.at(i, j)));
    }
    rows.push_back(row);
  }
  return {{"bids", rows}};
}

BidProfile bidsFromJson(const nlohmann::json& j)
{
  auto const& rows = j.at("bids");
  if (rows.empty())
  {
    return {};
  }
  int const m = static_cast<int>(rows.at(0).size());
  BidProfile out(rows.size(), m);
  for (std::size_t i = 0; i < rows.size(); ++i)
  {
    if (static_cast<int>(rows[i].size()) != m)
    {
      throw DomainError("bid rows differ in length");
    }
    for (int item = 0; item < m; ++item)
    {
      out.set(i, item, moneyFromJson(rows[i][static_cast<std::size_t>(item)]));
    }
  }
  return out;
}

nlohmann::json ledgerToJson(const QueryLedger& ledger)
{
  auto per = nlohmann::json::array();
  for (std::size_t i = 0; i < ledger.bidders(); ++i)
  {
    auto const c = ledger.at(i);
    per.push_back({{"value", c.value}, {"demand", c.demand}, {"xos", c.xos}});
  }
  auto const t = ledger.total();
  return {{"per_bidder", per}, {"value", t.value}, {"demand", t.demand}, {"xos", t.xos}, {"total", t.total()}};
}

nlohmann::json graphToJson(const WeightedGraph& graph)
{
  auto edges = nlohmann::json::array();
  for (auto const& e : graph.edges())
  {
    edges.push_back({e.u, e.v, toString(e.weight)});
  }
  return {{"vertices", graph.vertexCount()}, {"edges", edges}};
}

WeightedGraph graphFromJson(const nlohmann::json& j)
{
  std::vector<WeightedEdge> edges;
  for (auto const& e : j.at("edges"))
  {
    edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), moneyFromJson(e.at(2))});
  }
  return WeightedGraph(j.at("vertices").get<int>(), std::move(edges));
}

nlohmann::json setPairSystemToJson(const SetPairSystem& system)
{
  auto pairs = nlohmann::json::array();
  for (auto const& p : system.pairs)
  {
    pairs.push_back({p.first.items(), p.second.items()});
  }
  return {{"m", system.m}, {"pairs", pairs}};
}

SetPairSystem setPairSystemFromJson(const nlohmann::json& j)
{
  SetPairSystem system;
  system.m = j.at("m").get<int>();
  for (auto const& p : j.at("pairs"))
  {
    system.pairs.push_back({bundleFromJson(p.at(0)), bundleFromJson(p.at(1))});
  }
  return system;
}

nlohmann::json instanceToJson(const Instance& instance)
{
  auto vals = nlohmann::json::array();
  for (auto const& v : instance.valuations)
  {
    vals.push_back(v->toJson());
  }
  nlohmann::json out = {{"family", instance.family}, {"n", instance.n},         {"m", instance.m},
                        {"seed", instance.seed},     {"valuations", vals}};
  if (instance.allocation)
  {
    out["allocation"] = allocationToJson(*instance.allocation);
  }
  if (!instance.extra.empty())
  {
    out["extra"] = instance.extra;
  }
  return out;
}

Instance instanceFromJson(const nlohmann::json& j)
{
  Instance out;
  out.family = j.value("family", std::string{});
  out.n      = j.at("n").get<int>();
  out.m      = j.at("m").get<int>();
  out.seed   = j.value("seed", std::uint64_t{0});
  for (auto const& v : j.at("valuations"))
  {
    out.valuations.push_back(valuationFromJson(v));
  }
  if (static_cast<int>(out.valuations.size()) != out.n)
  {
    throw DomainError("instance lists " + std::to_string(out.valuations.size()) + " valuations for n = " +
                      std::to_string(out.n));
  }
  for (auto const& v : out.valuations)
  {
    if (v->itemCount() != out.m)
    {
      throw DomainError("valuation over " + std::to_string(v->itemCount()) + " items in an m = " +
                        std::to_string(out.m) + " instance");
    }
  }
  if (j.contains("allocation"))
  {
    out.allocation = allocationFromJson(j.at("allocation"));
    if (out.allocation->bidders() != static_cast<std::size_t>(out.n))
    {
      throw DomainError("allocation has the wrong number of bundles");
    }
    validateAllocation(*out.allocation, Bundle::full(out.m));
  }
  if (j.contains("extra"))
  {
    out.extra = j.at("extra");
  }
  return out;
}

nlohmann::json readJsonFile(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw DomainError("cannot open " + path);
  }
  try
  {
    return nlohmann::json::parse(in);
  }
  catch (const nlohmann::json::exception& e)
  {
    throw DomainError(path + ": " + e.what());
  }
}

void writeJson(const nlohmann::json& j, const std::string& path)
{
  if (path.empty() || path == "-")
  {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out)
  {
    throw DomainError("cannot write " + path);
  }
  out << j.dump(2) << '\n';
}

}  // namespace ssa
