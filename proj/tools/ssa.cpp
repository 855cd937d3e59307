#include "ssa/errors.hpp"
#include "ssa/experiments.hpp"
#include "ssa/reductions.hpp"
#include "ssa/stealing.hpp"
#include "ssa/xos_dynamics.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

constexpr int kOk         = 0;
constexpr int kViolation  = 1;
constexpr int kCapability = 2;

struct Global
{
  std::uint64_t seed = 1;
  std::string out    = "-";
  std::string format = "json";
};

std::string csvCell(const json& v)
{
  std::string text;
  if (v.is_null())
  {
    return text;
  }
  text = v.is_string() ? v.get<std::string>() : v.dump();
  if (text.find_first_of(",\"\n") == std::string::npos)
  {
    return text;
  }
  std::string quoted = "\"";
  for (char c : text)
  {
    quoted += c;
    if (c == '"')
    {
      quoted += '"';
    }
  }
  return quoted + "\"";
}

/// One row per object; nested values become JSON text cells.
std::string toCsv(const json& j)
{
  std::vector<json> rows;
  if (j.is_array())
  {
    rows.assign(j.begin(), j.end());
  }
  else
  {
    rows.push_back(j);
  }
  std::vector<std::string> columns;
  for (auto const& row : rows)
  {
    for (auto const& [key, _] : row.items())
    {
      if (std::find(columns.begin(), columns.end(), key) == columns.end())
      {
        columns.push_back(key);
      }
    }
  }
  std::ostringstream out;
  for (std::size_t c = 0; c < columns.size(); ++c)
  {
    out << (c ? "," : "") << csvCell(columns[c]);
  }
  out << '\n';
  for (auto const& row : rows)
  {
    for (std::size_t c = 0; c < columns.size(); ++c)
    {
      out << (c ? "," : "") << (row.contains(columns[c]) ? csvCell(row.at(columns[c])) : std::string{});
    }
    out << '\n';
  }
  return out.str();
}

void writeText(const std::string& text, const std::string& path)
{
  if (path.empty() || path == "-")
  {
    std::cout << text;
    return;
  }
  std::ofstream file(path);
  if (!file)
  {
    throw ssa::DomainError("cannot write " + path);
  }
  file << text;
}

void emit(const Global& g, const json& j, const json& csvRows = nullptr)
{
  if (g.format == "csv")
  {
    writeText(toCsv(csvRows.is_null() ? j : csvRows), g.out);
  }
  else
  {
    ssa::writeJson(j, g.out);
  }
}

void writeTrace(const std::vector<json>& events, const std::string& path)
{
  if (path.empty())
  {
    return;
  }
  std::string text;
  for (auto const& e : events)
  {
    text += e.dump() + '\n';
  }
  writeText(text, path);
}

json reportRow(const ssa::RunReport& report)
{
  json row = json::object();
  for (auto const& [key, value] : ssa::reportColumns(report))
  {
    row[key] = value;
  }
  return row;
}

ssa::Instance loadInstance(const std::string& path)
{
  return ssa::instanceFromJson(ssa::readJsonFile(path));
}

/// Applies --init: auto keeps the instance's allocation, file reads one, greedy/random/start replace it.
ssa::Instance applyInit(ssa::Instance instance, const std::string& init, const std::string& allocationPath,
                        ssa::RunOptions& options)
{
  if (init == "auto")
  {
    return instance;
  }
  if (init == "file")
  {
    if (!allocationPath.empty())
    {
      instance.allocation = ssa::allocationFromJson(ssa::readJsonFile(allocationPath));
      return ssa::instanceFromJson(ssa::instanceToJson(instance));
    }
    if (!instance.allocation)
    {
      throw ssa::DomainError("--init file needs --allocation or an instance allocation");
    }
    return instance;
  }
  instance.allocation.reset();
  options.greedyInit = init == "greedy";
  options.randomInit = init == "random";
  return instance;
}

std::vector<bool> parseFlags(const std::string& text)
{
  std::vector<bool> out;
  for (char c : text)
  {
    if (c == '0' || c == '1')
    {
      out.push_back(c == '1');
    }
    else if (c != ',' && c != ' ')
    {
      throw ssa::DomainError("flags are 0/1 digits");
    }
  }
  return out;
}

json classCheck(const ssa::Valuation& v, ssa::ValuationClass cls)
{
  try
  {
    return ssa::verifyClass(v, cls).holds;
  }
  catch (const ssa::CapabilityError&)
  {
    return nullptr;
  }
}

int verdict(bool ok)
{
  return ok ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Simultaneous second-price auction equilibria"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--out", g.out, "Output path, - for stdout")->capture_default_str();
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  auto sub = [&app](const std::string& name, const std::string& help) {
    auto* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };

  ssa::GenParams gp;
  std::string family;
  bool disjoint = false;
  auto* gen     = sub("gen", "Generate an instance");
  gen->set_help_flag("--help", "Print this help message and exit");
  gen->add_option("--family", family, "Instance family")
      ->required()
      ->check(CLI::IsMember({"table-submodular", "budget-additive", "coverage", "setpair", "sensitive",
                             "gray-exponential"}));
  gen->add_option("--n", gp.n, "Bidders")->capture_default_str();
  gen->add_option("--m", gp.m, "Items")->capture_default_str();
  gen->add_option("--count", gp.count, "Set-pair count")->capture_default_str();
  gen->add_flag("--disjoint", disjoint, "Set-pair flags without a common index");
  gen->add_option("--g", gp.g, "Sensitive parameter g")->capture_default_str();
  gen->add_option("--h", gp.h, "Sensitive parameter h")->capture_default_str();
  gen->add_option("--support", gp.support, "Sensitive k entries")->capture_default_str();

  std::string instancePath, tracePath, init = "auto", allocationPath;
  ssa::RunOptions ro;
  auto* steal = sub("steal", "Iterative stealing");
  steal->add_option("--instance", instancePath, "Instance JSON")->required();
  steal->add_option("--policy", ro.ordering, "Ordering policy")
      ->check(CLI::IsMember({"stolen-last", "ascending"}))
      ->capture_default_str();
  steal->add_option("--select", ro.policy, "Steal selection")
      ->check(CLI::IsMember({"lex", "largest-gain", "random"}))
      ->capture_default_str();
  steal->add_option("--cap", ro.stepCap, "Steal cap")->capture_default_str();
  steal->add_option("--trace", tracePath, "Steal events as JSON lines");

  auto addInit = [&](CLI::App* s) {
    s->add_option("--init", init, "Start allocation")
        ->check(CLI::IsMember({"auto", "greedy", "random", "file", "start"}))
        ->capture_default_str();
    s->add_option("--allocation", allocationPath, "Allocation JSON for --init file");
  };
  addInit(steal);

  auto* top = sub("topsteal", "Top-competitor stealing");
  top->add_option("--instance", instancePath, "Instance JSON")->required();
  top->add_option("--report", g.out, "Report path");
  top->add_option("--trace", tracePath, "Recursion nodes as JSON lines");
  addInit(top);

  std::string oracle = "greedy";
  int grayM          = 7;
  auto* dynamic      = sub("dynamic", "XOS best-reply dynamic");
  dynamic->add_option("--instance", instancePath, "Instance JSON (greedy oracle)");
  dynamic->add_option("--oracle", oracle, "Clause oracle")
      ->check(CLI::IsMember({"greedy", "adaptive-gray"}))
      ->capture_default_str();
  dynamic->add_option("--m", grayM, "Items for the adaptive Gray instance")->capture_default_str();
  dynamic->add_option("--cap", ro.roundCap, "Round cap")->capture_default_str();
  dynamic->add_option("--trace", tracePath, "Dynamic steps as JSON lines");
  addInit(dynamic);

  int advM              = 43;
  std::string algorithm = "hill";
  std::uint64_t budget  = 2000;
  auto* adversary       = sub("adversary", "Searchers against the odd-graph adversary");
  adversary->add_option("--m", advM, "Items (odd)")->capture_default_str();
  adversary->add_option("--algorithm", algorithm, "Searcher")
      ->check(CLI::IsMember({"hill", "random", "bestreply"}))
      ->capture_default_str();
  adversary->add_option("--budget", budget, "Query budget")->capture_default_str();
  adversary->add_option("--report", g.out, "Report path");

  std::string bidsPath;
  auto* verify = sub("verify", "Brute-force equilibrium check");
  verify->add_option("--instance", instancePath, "Instance JSON")->required();
  verify->add_option("--bids", bidsPath, "Bids JSON")->required();

  int spM                   = 8;
  std::size_t spCount       = 3;
  std::size_t spRetries     = 100000;
  auto* setpairGen          = sub("setpair-gen", "Build a good set-pair system");
  setpairGen->add_option("--m", spM, "Items (multiple of 8)")->capture_default_str();
  setpairGen->add_option("--count", spCount, "Pairs")->capture_default_str();
  setpairGen->add_option("--retries", spRetries, "Rejection retries")->capture_default_str();

  std::string systemPath, flagsA, flagsB;
  std::size_t samples = 500;
  auto* setpairCheck  = sub("setpair-check", "Check a set-pair system and its gadget");
  setpairCheck->add_option("--system", systemPath, "System or set-pair instance JSON")->required();
  setpairCheck->add_option("--flags-a", flagsA, "First player's flags, e.g. 101");
  setpairCheck->add_option("--flags-b", flagsB, "Second player's flags");
  setpairCheck->add_option("--samples", samples, "Random profiles without a common index")->capture_default_str();

  std::string graphPath;
  int vertices  = 6;
  auto* maxcut  = sub("maxcut-reduce", "Max-cut reduction analysis");
  maxcut->add_option("--graph", graphPath, "Graph JSON; a random graph when omitted");
  maxcut->add_option("--vertices", vertices, "Random graph size")->capture_default_str();

  int isoN                = 3;
  std::uint64_t isoSamples = 0;
  auto* iso               = sub("isoperimetric", "Odd-graph isoperimetric check");
  iso->add_option("--n", isoN, "Odd graph O_n")->capture_default_str();
  iso->add_option("--samples", isoSamples, "Random subsets; 0 enumerates all")->capture_default_str();

  double scale = 1.0;
  auto* bench  = sub("bench", "Timed fixed workloads");
  bench->add_option("--scale", scale, "Run-count multiplier")->capture_default_str();

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    int const code = app.exit(e);
    return code == 0 ? kOk : kCapability;
  }

  try
  {
    if (gen->parsed())
    {
      gp.common = !disjoint;
      emit(g, ssa::instanceToJson(ssa::generate(ssa::familyByName(family), gp, g.seed)));
      return kOk;
    }
    if (steal->parsed() || top->parsed() || (dynamic->parsed() && oracle == "greedy"))
    {
      if (instancePath.empty())
      {
        throw ssa::DomainError("--instance is required");
      }
      ro.seed                = g.seed;
      auto const instance    = applyInit(loadInstance(instancePath), init, allocationPath, ro);
      std::string const name = steal->parsed() ? "steal" : top->parsed() ? "topsteal" : "dynamic";
      ssa::RunReport report;
      try
      {
        report = ssa::runAlgorithm(instance, name, ro);
      }
      catch (const ssa::StealCapExceeded& e)
      {
        std::cerr << "ssa: " << e.what() << '\n';
        return kViolation;
      }
      catch (const ssa::DynamicCapExceeded& e)
      {
        std::cerr << "ssa: " << e.what() << '\n';
        return kViolation;
      }
      writeTrace(report.trace, tracePath);
      emit(g, ssa::reportToJson(report), reportRow(report));
      bool ok = report.equilibriumVerified.value_or(true);
      if (name == "topsteal")
      {
        ok = ok && report.steals <= report.details.at("bound").get<std::uint64_t>();
      }
      if (report.details.contains("cap"))
      {
        ok = ok && report.steals <= report.details.at("cap").get<std::uint64_t>();
      }
      return verdict(ok);
    }
    if (dynamic->parsed())
    {
      ro.seed = g.seed;
      ssa::RunReport report;
      try
      {
        report = ssa::runGrayDynamic(grayM, ro);
      }
      catch (const ssa::DynamicCapExceeded& e)
      {
        std::cerr << "ssa: " << e.what() << '\n';
        return kViolation;
      }
      writeTrace(report.trace, tracePath);
      emit(g, ssa::reportToJson(report), reportRow(report));
      return verdict(report.equilibriumVerified.value_or(true));
    }
    if (adversary->parsed())
    {
      auto const report = ssa::runSearcher(advM, ssa::algorithmByName(algorithm), budget, g.seed);
      emit(g, ssa::searchReportToJson(report));
      bool const early = report.found && ssa::BigInt(report.queries) < report.bound;
      return verdict(report.audit.ok && !early);
    }
    if (verify->parsed())
    {
      auto const instance = loadInstance(instancePath);
      auto const bids     = ssa::bidsFromJson(ssa::readJsonFile(bidsPath));
      auto const check    = ssa::isPureNashNoOverbid(instance.valuations, bids);
      auto const outcome  = ssa::resolve(bids, instance.valuations);
      json witnesses      = json::array();
      for (auto const& w : check.witnesses)
      {
        witnesses.push_back({{"bidder", w.bidder},
                             {"kind", w.kind == ssa::BidderWitness::Kind::Overbids ? "overbids" : "deviates"},
                             {"bundle", w.bundle.items()},
                             {"utility", ssa::toString(w.utility)}});
      }
      json opt = nullptr;
      try
      {
        opt = ssa::toString(ssa::optimalWelfare(instance.valuations));
      }
      catch (const ssa::CapabilityError&)
      {
      }
      emit(g, {{"equilibrium", check.equilibrium},
               {"witnesses", witnesses},
               {"allocation", ssa::allocationToJson(outcome.allocation)},
               {"welfare", ssa::toString(ssa::welfare(outcome.allocation, instance.valuations))},
               {"opt", opt}});
      return verdict(check.equilibrium);
    }
    if (setpairGen->parsed())
    {
      auto const system = ssa::buildGoodSetPairSystem(spM, spCount, g.seed, spRetries);
      emit(g, ssa::setPairSystemToJson(system));
      return kOk;
    }
    if (setpairCheck->parsed())
    {
      auto const input = ssa::readJsonFile(systemPath);
      ssa::SetPairSystem system;
      ssa::DisjointnessInput a = parseFlags(flagsA), b = parseFlags(flagsB);
      if (input.contains("valuations"))
      {
        auto const instance = ssa::instanceFromJson(input);
        auto const v0 = std::dynamic_pointer_cast<const ssa::SetPairValuation>(instance.valuations.at(0));
        auto const v1 = std::dynamic_pointer_cast<const ssa::SetPairValuation>(instance.valuations.at(1));
        if (!v0 || !v1)
        {
          throw ssa::DomainError("instance valuations are not set-pair valuations");
        }
        system = v0->system();
        a      = flagsA.empty() ? v0->flags() : a;
        b      = flagsB.empty() ? v1->flags() : b;
      }
      else
      {
        system = ssa::setPairSystemFromJson(input);
      }
      auto const sc = ssa::checkSetPairSystem(system);
      json out      = {{"m", system.m}, {"pairs", system.pairs.size()}, {"good", sc.good}, {"violation", sc.violation}};
      bool ok       = sc.good;
      if (!a.empty() || !b.empty())
      {
        auto const v0 = ssa::setPairValuation(system, a, 0);
        auto const v1 = ssa::setPairValuation(system, b, 1);
        for (auto const& [name, v] : {std::pair{"first", v0}, std::pair{"second", v1}})
        {
          json const sub = classCheck(*v, ssa::ValuationClass::Subadditive);
          json const mon = classCheck(*v, ssa::ValuationClass::Monotone);
          out[std::string(name) + "_subadditive"] = sub;
          out[std::string(name) + "_monotone"]    = mon;
          ok = ok && sub != json(false) && mon != json(false);
        }
        std::vector<ssa::ValuationPtr> const vals{v0, v1};
        if (auto const k = ssa::commonIndex(a, b))
        {
          auto const bids    = ssa::equilibriumWitness(system, a, b, *k);
          auto const check   = ssa::isPureNashNoOverbid(vals, bids);
          auto const outcome = ssa::resolve(bids, vals);
          out["common"]      = *k;
          out["witness"]     = {{"bids", ssa::bidsToJson(bids).at("bids")},
                                {"equilibrium", check.equilibrium},
                                {"utilities", {ssa::toString(outcome.utilities[0]), ssa::toString(outcome.utilities[1])}},
                                {"payments", {ssa::toString(outcome.payments[0]), ssa::toString(outcome.payments[1])}}};
          ok = ok && check.equilibrium;
        }
        else
        {
          auto const sweep = ssa::sweepUnprotected(v0, v1, samples, g.seed);
          out["common"]    = nullptr;
          out["deviations"] = {{"profiles", sweep.profiles},
                               {"strict", sweep.strict},
                               {"missing", sweep.missing},
                               {"cases", sweep.cases}};
          ok = ok && sweep.strict == sweep.profiles;
        }
      }
      emit(g, out);
      return verdict(ok);
    }
    if (maxcut->parsed())
    {
      auto const graph = graphPath.empty() ? ssa::randomWeightedGraph(vertices, g.seed)
                                           : ssa::graphFromJson(ssa::readJsonFile(graphPath));
      auto const a     = ssa::analyzeMaxcut(graph);
      auto const v     = ssa::maxcutValuation(graph);
      json gap         = nullptr;
      if (a.gap.witness)
      {
        auto const& w = *a.gap.witness;
        gap           = {{"initial", ssa::allocationToJson(w.initial)},
                         {"allocation", ssa::allocationToJson(w.allocation)},
                         {"bids", ssa::bidsToJson(w.bids).at("bids")},
                         {"steals", w.steals},
                         {"move", {{"from", w.move.from}, {"to", w.move.to}, {"item", w.move.item},
                                   {"gain", ssa::toString(w.move.gain)}}}};
      }
      json const out = {{"graph", ssa::graphToJson(graph)},
                        {"valuation", v->toJson()},
                        {"cuts", a.cuts},
                        {"local_maxima", a.localMaxima},
                        {"flip_optimal", a.flipOptimal},
                        {"coincide", a.coincide},
                        {"mismatch", a.mismatch ? json(a.mismatch->items()) : json()},
                        {"verified_equilibria", a.verifiedEquilibria},
                        {"all_local_maxima_equilibria", a.allLocalMaximaEquilibria},
                        {"topsteal_runs", a.gap.runs},
                        {"max_steals", a.gap.maxSteals},
                        {"steal_bound_held", a.gap.stealBoundHeld},
                        {"all_outputs_equilibria", a.gap.allEquilibria},
                        {"equilibrium_not_local_max", gap}};
      emit(g, out);
      return verdict(a.coincide && a.allLocalMaximaEquilibria && a.gap.stealBoundHeld && a.gap.allEquilibria);
    }
    if (iso->parsed())
    {
      auto const report = isoSamples == 0 ? ssa::isoperimetricExhaustive(isoN)
                                          : ssa::isoperimetricSampled(isoN, isoSamples, g.seed);
      emit(g, ssa::isoperimetricToJson(report));
      return verdict(report.edgeBound && report.neighbourBound);
    }
    if (bench->parsed())
    {
      json rows = json::array();
      for (auto const& row : ssa::runBench(g.seed, scale))
      {
        rows.push_back({{"name", row.name}, {"runs", row.runs}, {"seconds", row.seconds}});
      }
      emit(g, rows);
      return kOk;
    }
  }
  catch (const ssa::CapabilityError& e)
  {
    std::cerr << "ssa: " << e.what() << '\n';
    return kCapability;
  }
  catch (const std::exception& e)
  {
    std::cerr << "ssa: " << e.what() << '\n';
    return kCapability;
  }
  return kOk;
}
