#include "ssa/experiments.hpp"

#include "ssa/errors.hpp"
#include "ssa/stealing.hpp"
#include "ssa/topsteal.hpp"
#include "ssa/xos_dynamics.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

namespace ssa {

namespace {

using Clock = std::chrono::steady_clock;

double secondsSince(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Money randomQuarterK(std::mt19937_64& rng)
{
  return Money(static_cast<long>(1 + rng() % 999), 4000);
}

Allocation allToFirst(std::size_t n, int m)
{
  Allocation out;
  out.bundles.assign(n, Bundle{});
  if (n > 0)
  {
    out.bundles[0] = Bundle::full(m);
  }
  return out;
}

std::vector<nlohmann::json> dynamicTrace(const DynamicTrace& trace)
{
  std::vector<nlohmann::json> out;
  for (auto const& step : trace.steps)
  {
    out.push_back({{"step", out.size()},
                   {"responder", step.responder},
                   {"allocation", allocationToJson(step.allocation)},
                   {"winning_bid_sum", toString(step.winningBidSum)}});
  }
  return out;
}

void finish(RunReport& report, std::span<const ValuationPtr> vals)
{
  report.welfare        = welfare(report.allocation, vals);
  report.initialWelfare = welfare(report.initial, vals);
  try
  {
    report.opt = optimalWelfare(vals);
    if (*report.opt > 0)
    {
      report.ratio = report.welfare / *report.opt;
    }
  }
  catch (const CapabilityError&)
  {
  }
  try
  {
    report.equilibriumVerified = isPureNashNoOverbid(vals, report.bids).equilibrium;
  }
  catch (const CapabilityError&)
  {
  }
}

}  // namespace

std::string_view familyName(Family family)
{
  switch (family)
  {
    case Family::TableSubmodular: return "table-submodular";
    case Family::BudgetAdditive: return "budget-additive";
    case Family::Coverage: return "coverage";
    case Family::SetPair: return "setpair";
    case Family::Sensitive: return "sensitive";
    case Family::GrayExponential: return "gray-exponential";
  }
  return "?";
}

Family familyByName(const std::string& name)
{
  for (Family f : {Family::TableSubmodular, Family::BudgetAdditive, Family::Coverage, Family::SetPair,
                   Family::Sensitive, Family::GrayExponential})
  {
    if (familyName(f) == name)
    {
      return f;
    }
  }
  throw DomainError("unknown family: " + name);
}

std::shared_ptr<TableValuation> randomSubmodularTable(int m, std::mt19937_64& rng)
{
  if (m < 1 || m > 14)
  {
    throw DomainError("random submodular tables need 1 <= m <= 14");
  }
  int const ground = 2 * m;
  std::vector<long> weight(static_cast<std::size_t>(ground));
  for (auto& w : weight)
  {
    w = static_cast<long>(1 + rng() % 5);
  }
  std::vector<std::uint64_t> covers(static_cast<std::size_t>(m));
  for (auto& c : covers)
  {
    for (int u = 0; u < ground; ++u)
    {
      if (rng() % 3 == 0)
      {
        c |= std::uint64_t{1} << u;
      }
    }
  }
  std::size_t const size = std::size_t{1} << m;
  std::vector<std::uint64_t> union_(size, 0);
  std::vector<Money> values(size);
  for (std::size_t s = 1; s < size; ++s)
  {
    int const low = std::countr_zero(s);
    union_[s]     = union_[s & (s - 1)] | covers[static_cast<std::size_t>(low)];
    long total    = 0;
    for (int u = 0; u < ground; ++u)
    {
      if ((union_[s] >> u) & 1U)
      {
        total += weight[static_cast<std::size_t>(u)];
      }
    }
    values[s] = total;
  }
  auto v = std::make_shared<TableValuation>(m, std::move(values));
  v->markSubmodular(true);
  return v;
}

std::shared_ptr<BudgetAdditiveValuation> randomBudgetAdditive(int m, std::mt19937_64& rng)
{
  std::vector<Money> items(static_cast<std::size_t>(m));
  Money total = 0;
  Money top   = 0;
  for (auto& x : items)
  {
    x = Money(static_cast<long>(rng() % 7), 2);
    total += x;
    top = std::max(top, x);
  }
  long const steps = 8;
  Money const budget = top + (total - top) * Money(static_cast<long>(rng() % (steps + 1)), steps);
  return std::make_shared<BudgetAdditiveValuation>(budget, std::move(items));
}

std::shared_ptr<CoverageValuation> randomCoverage(int m, std::mt19937_64& rng)
{
  return std::make_shared<CoverageValuation>(randomWeightedGraph(m, rng()));
}

ValuationPtr randomSubmodular(int m, std::mt19937_64& rng)
{
  switch (rng() % 3)
  {
    case 0: return randomSubmodularTable(m, rng);
    case 1: return randomBudgetAdditive(m, rng);
    default: return randomCoverage(m, rng);
  }
}

ValuationList randomSubmodularInstance(int n, int m, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  ValuationList out;
  for (int i = 0; i < n; ++i)
  {
    out.push_back(randomSubmodular(m, rng));
  }
  return out;
}

Instance generate(Family family, const GenParams& params, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  Instance out;
  out.family = std::string(familyName(family));
  out.seed   = seed;
  out.m      = params.m;
  out.n      = params.n;
  if (params.n < 1 || params.m < 1)
  {
    throw DomainError("instances need n >= 1 and m >= 1");
  }
  switch (family)
  {
    case Family::TableSubmodular:
      for (int i = 0; i < params.n; ++i)
      {
        auto v = randomSubmodularTable(params.m, rng);
        if (params.m <= 12 && !verifyClass(*v, ValuationClass::Submodular).holds)
        {
          throw ConstructionError("generated table is not submodular");
        }
        out.valuations.push_back(std::move(v));
      }
      break;
    case Family::BudgetAdditive:
      for (int i = 0; i < params.n; ++i)
      {
        out.valuations.push_back(randomBudgetAdditive(params.m, rng));
      }
      break;
    case Family::Coverage:
      for (int i = 0; i < params.n; ++i)
      {
        out.valuations.push_back(randomCoverage(params.m, rng));
      }
      break;
    case Family::SetPair:
    {
      out.n              = 2;
      auto const system  = buildGoodSetPairSystem(params.m, params.count, rng());
      DisjointnessInput a(params.count), b(params.count);
      for (std::size_t r = 0; r < params.count; ++r)
      {
        a[r] = rng() % 2 == 0;
        b[r] = rng() % 2 == 0;
        if (a[r] && b[r] && !params.common)
        {
          (rng() % 2 == 0 ? a : b)[r] = false;
        }
      }
      if (params.common && !commonIndex(a, b))
      {
        std::size_t const k = static_cast<std::size_t>(rng() % params.count);
        a[k] = b[k] = true;
      }
      out.valuations = {setPairValuation(system, a, 0), setPairValuation(system, b, 1)};
      out.extra      = {{"system", setPairSystemToJson(system)}};
      if (auto k = commonIndex(a, b))
      {
        out.extra["common"] = *k;
      }
      break;
    }
    case Family::Sensitive:
    {
      out.n = 2;
      if (params.m % 2 == 0)
      {
        throw DomainError("sensitive instances need odd m");
      }
      SensitiveParams const sp{params.g, params.h};
      int const half = params.m / 2;
      std::vector<int> items(static_cast<std::size_t>(params.m));
      std::iota(items.begin(), items.end(), 0);
      SensitiveMap map;
      for (std::size_t e = 0; e < params.support; ++e)
      {
        std::shuffle(items.begin(), items.end(), rng);
        Bundle b;
        for (int i = 0; i <= half; ++i)
        {
          b = b.with(items[static_cast<std::size_t>(i)]);
        }
        int const item = b.items()[static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(half + 1))];
        map[b.bits()]  = SensitiveEntry{randomQuarterK(rng), item};
      }
      auto v = std::make_shared<SensitiveValuation>(params.m, std::move(map), randomQuarterK(rng), sp);
      out.valuations = {v, v};
      break;
    }
    case Family::GrayExponential:
    {
      out.n     = 2;
      auto inst = buildExponentialInstance(params.m);
      std::vector<XosOracle*> oracles{inst.oracles[0].get(), inst.oracles[1].get()};
      auto const result = runBestReplyDynamic(inst.valuations, oracles, inst.initial, 1000000);
      out.valuations    = inst.valuations;
      out.allocation    = inst.initial;
      out.extra         = {{"exchanges", result.trace.exchanges}, {"epsilon", toString(inst.adversary->epsilon)}};
      break;
    }
  }
  return instanceFromJson(instanceToJson(out));
}

RunReport runAlgorithm(const Instance& instance, const std::string& algorithm, const RunOptions& options)
{
  auto const start = Clock::now();
  RunReport report;
  report.algorithm     = algorithm;
  auto const& vals     = instance.valuations;
  std::size_t const n  = vals.size();
  int const m          = instance.m;
  report.ledger        = QueryLedger(n);
  if (instance.allocation)
  {
    report.initial = *instance.allocation;
  }
  else if (options.greedyInit || algorithm == "greedy-init")
  {
    report.initial = greedyAllocation(vals, &report.ledger);
  }
  else if (options.randomInit)
  {
    std::mt19937_64 rng(options.seed);
    report.initial.bundles.assign(n, Bundle{});
    for (int j = 0; j < m; ++j)
    {
      auto& b = report.initial.bundles[static_cast<std::size_t>(rng() % n)];
      b       = b.with(j);
    }
  }
  else
  {
    report.initial = allToFirst(n, m);
  }

  if (algorithm == "steal")
  {
    bool const budgetAdditive = std::all_of(vals.begin(), vals.end(), [](const ValuationPtr& v) {
      return v->kind() == ValuationKind::BudgetAdditive;
    });
    StealRun run;
    if (budgetAdditive && options.ordering == "stolen-last" && options.policy == "lex")
    {
      run = runBudgetAdditiveStealing(vals, report.initial, options.stepCap, &report.ledger);
      report.details["cap"] = budgetAdditiveStealCap(n, m);
    }
    else
    {
      auto ordering = orderingPolicyByName(options.ordering);
      auto policy   = stealPolicyByName(options.policy, options.seed);
      run           = runIterativeStealing(vals, report.initial, *ordering, *policy, options.stepCap, &report.ledger);
    }
    report.steals     = run.log.events.size();
    report.allocation = run.allocation;
    report.bids       = run.bids;
    std::size_t tight = 0;
    for (auto const& e : run.log.events)
    {
      tight += (e.tag && *e.tag == LooseTag::Tight) ? 1 : 0;
      nlohmann::json event = {{"step", report.trace.size()},
                              {"thief", e.thief},
                              {"victim", e.victim},
                              {"item", e.item},
                              {"welfare_before", toString(e.welfareBefore)},
                              {"welfare_after", toString(e.welfareAfter)}};
      if (e.tag)
      {
        event["tag"] = std::string(tagName(*e.tag));
      }
      report.trace.push_back(std::move(event));
    }
    report.details["ordering"] = options.ordering;
    report.details["policy"]   = options.policy;
    report.details["tight_steals"] = tight;
  }
  else if (algorithm == "topsteal")
  {
    auto const result = topsteal(vals, report.initial, &report.ledger);
    int t             = 1;
    for (auto const& node : result.trace.nodes)
    {
      t = std::max(t, node.t);
      report.trace.push_back({{"depth", node.depth},
                              {"t", node.t},
                              {"items", node.items},
                              {"case", std::string(caseName(node.kind))},
                              {"moves", node.moves},
                              {"own_steals", node.ownSteals},
                              {"steals", node.steals},
                              {"bound", node.bound},
                              {"children", node.children}});
    }
    report.steals               = result.trace.steals;
    report.allocation           = result.allocation;
    report.bids                 = result.bids;
    report.details["t"]         = t;
    report.details["bound"]     = stealCountBound(m, t);
    report.details["max_depth"] = result.trace.maxDepth;
    report.details["nodes"]     = result.trace.nodes.size();
    report.details["diagnostics"] = result.trace.diagnostics;
  }
  else if (algorithm == "dynamic")
  {
    if (n != 2)
    {
      throw DomainError("the best-reply dynamic runs on two bidders");
    }
    OrderedClauseOracle o0(vals[0], OrderedClauseOracle::Ordering::Greedy, &report.ledger, 0);
    OrderedClauseOracle o1(vals[1], OrderedClauseOracle::Ordering::Greedy, &report.ledger, 1);
    std::vector<XosOracle*> oracles{&o0, &o1};
    auto const result = runBestReplyDynamic(vals, oracles, report.initial, options.roundCap, &report.ledger);
    report.rounds     = result.trace.rounds;
    report.exchanges  = result.trace.exchanges;
    report.allocation = result.allocation;
    report.bids       = result.bids;
    report.trace      = dynamicTrace(result.trace);
  }
  else if (algorithm == "greedy-init")
  {
    report.allocation = report.initial;
    report.bids       = procedureBids(vals, report.allocation);
  }
  else
  {
    throw DomainError("unknown algorithm: " + algorithm);
  }
  finish(report, vals);
  report.wallSeconds = secondsSince(start);
  return report;
}

RunReport runGrayDynamic(int m, const RunOptions& options)
{
  auto const start = Clock::now();
  RunReport report;
  report.algorithm = "dynamic";
  report.ledger    = QueryLedger(2);
  auto inst        = buildExponentialInstance(m, std::nullopt, &report.ledger);
  std::vector<XosOracle*> oracles{inst.oracles[0].get(), inst.oracles[1].get()};
  auto const result = runBestReplyDynamic(inst.valuations, oracles, inst.initial, options.roundCap, &report.ledger);
  report.initial    = inst.initial;
  report.allocation = result.allocation;
  report.bids       = result.bids;
  report.rounds     = result.trace.rounds;
  report.exchanges  = result.trace.exchanges;
  report.trace      = dynamicTrace(result.trace);
  auto sums         = nlohmann::json::array();
  for (auto const& step : result.trace.steps)
  {
    sums.push_back(toString(step.winningBidSum));
  }
  report.details = {{"m", m},
                    {"path_length", inst.adversary->path.size()},
                    {"epsilon", toString(inst.adversary->epsilon)},
                    {"winning_bid_sums", sums}};
  finish(report, inst.valuations);
  report.wallSeconds = secondsSince(start);
  return report;
}

nlohmann::json reportToJson(const RunReport& report, bool withWallTime)
{
  nlohmann::json out = {{"algorithm", report.algorithm},
                        {"steals", report.steals},
                        {"rounds", report.rounds},
                        {"exchanges", report.exchanges},
                        {"queries", ledgerToJson(report.ledger)},
                        {"initial", allocationToJson(report.initial)},
                        {"allocation", allocationToJson(report.allocation)},
                        {"bids", bidsToJson(report.bids).at("bids")},
                        {"initial_welfare", toString(report.initialWelfare)},
                        {"welfare", toString(report.welfare)},
                        {"opt", report.opt ? nlohmann::json(toString(*report.opt)) : nlohmann::json()},
                        {"ratio", report.ratio ? nlohmann::json(toString(*report.ratio)) : nlohmann::json()},
                        {"equilibrium_verified",
                         report.equilibriumVerified ? nlohmann::json(*report.equilibriumVerified) : nlohmann::json()},
                        {"details", report.details}};
  if (withWallTime)
  {
    out["wall_seconds"] = report.wallSeconds;
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> reportColumns(const RunReport& report)
{
  auto const total = report.ledger.total();
  return {{"algorithm", report.algorithm},
          {"steals", std::to_string(report.steals)},
          {"rounds", std::to_string(report.rounds)},
          {"exchanges", std::to_string(report.exchanges)},
          {"value_queries", std::to_string(total.value)},
          {"demand_queries", std::to_string(total.demand)},
          {"xos_queries", std::to_string(total.xos)},
          {"initial_welfare", toString(report.initialWelfare)},
          {"welfare", toString(report.welfare)},
          {"opt", report.opt ? toString(*report.opt) : ""},
          {"ratio", report.ratio ? toString(*report.ratio) : ""},
          {"equilibrium_verified",
           report.equilibriumVerified ? (*report.equilibriumVerified ? "true" : "false") : ""},
          {"wall_seconds", std::to_string(report.wallSeconds)}};
}

nlohmann::json searchReportToJson(const SearchReport& report)
{
  nlohmann::json found;
  if (report.found)
  {
    found = {{"bundle", report.found->bundle.items()},
             {"item", report.found->item},
             {"value", toString(report.found->value)},
             {"neighbour_value", toString(report.found->neighbourValue)}};
  }
  return {{"algorithm", algorithmName(report.algorithm)},
          {"m", report.m},
          {"queries", report.queries},
          {"distinct", report.distinct},
          {"demand_queries", report.demandQueries},
          {"conceded", report.conceded},
          {"found", found},
          {"bound", report.bound.str()},
          {"meets_bound", BigInt(report.queries) >= report.bound && !report.found},
          {"shortcuts", report.stats.shortcuts},
          {"bfs_runs", report.stats.bfsRuns},
          {"max_bfs_per_query", report.stats.maxBfsPerQuery},
          {"colored", report.stats.colored},
          {"audit", {{"ok", report.audit.ok}, {"message", report.audit.message}}}};
}

nlohmann::json isoperimetricToJson(const IsoperimetricReport& report)
{
  return {{"n", report.n},
          {"vertices", report.vertices},
          {"subsets", report.subsets},
          {"max_internal", report.maxInternal},
          {"edge_bound", report.edgeBound},
          {"neighbour_bound", report.neighbourBound}};
}

std::vector<BenchRow> runBench(std::uint64_t seed, double scale)
{
  auto runs = [&](std::size_t base) { return std::max<std::size_t>(1, static_cast<std::size_t>(base * scale)); };
  std::vector<BenchRow> rows;
  auto timed = [&](std::string name, std::size_t count, auto&& body) {
    auto const start = Clock::now();
    for (std::size_t r = 0; r < count; ++r)
    {
      body(r);
    }
    rows.push_back({std::move(name), count, secondsSince(start)});
  };
  timed("topsteal n=2 m=8", runs(100), [&](std::size_t r) {
    auto const vals = randomSubmodularInstance(2, 8, seed + r);
    topsteal(vals, allToFirst(2, 8));
  });
  timed("steal n=4 m=8", runs(100), [&](std::size_t r) {
    auto const vals = randomSubmodularInstance(4, 8, seed + r);
    auto ordering   = orderingPolicyByName("stolen-last");
    auto policy     = stealPolicyByName("lex", seed);
    runIterativeStealing(vals, allToFirst(4, 8), *ordering, *policy, 1000000);
  });
  timed("gray dynamic m=9", runs(5), [&](std::size_t) { runGrayDynamic(9, RunOptions{}); });
  timed("adversary m=43 random 500", runs(2),
        [&](std::size_t r) { runSearcher(43, SearchAlgorithm::RandomProbe, 500, seed + r); });
  timed("isoperimetric O_3", runs(5), [&](std::size_t) { isoperimetricExhaustive(3); });
  timed("sparse demand m=45", runs(20), [&](std::size_t r) {
    GenParams p;
    p.m       = 45;
    p.support = 256;
    auto inst = generate(Family::Sensitive, p, seed + r);
    std::mt19937_64 rng(seed + r);
    std::vector<Money> prices(45);
    for (auto& x : prices)
    {
      x = Money(static_cast<long>(rng() % 2000), 1000);
    }
    sparseDemandOracle(static_cast<const SensitiveValuation&>(*inst.valuations[0]), prices);
  });
  return rows;
}

}  // namespace ssa
