#pragma once

#include "ssa/hardness.hpp"
#include "ssa/io.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace ssa {

enum class Family
{
  TableSubmodular,
  BudgetAdditive,
  Coverage,
  SetPair,
  Sensitive,
  GrayExponential,
};

std::string_view familyName(Family family);
Family familyByName(const std::string& name);

struct GenParams
{
  int n              = 2;
  int m              = 6;
  std::size_t count  = 3;     ///< set-pair systems: number of pairs
  bool common        = true;  ///< set-pair flags: share a flagged index
  int g              = 20;
  int h              = 10;
  std::size_t support = 64;   ///< sensitive: listed k entries
};

/// Weighted coverage of a hidden ground set (2m elements), tabulated (m <= 14).
std::shared_ptr<TableValuation> randomSubmodularTable(int m, std::mt19937_64& rng);
/// Half-integer item values in [0, 3], budget between the largest item and the total.
std::shared_ptr<BudgetAdditiveValuation> randomBudgetAdditive(int m, std::mt19937_64& rng);
std::shared_ptr<CoverageValuation> randomCoverage(int m, std::mt19937_64& rng);
/// Uniform choice among the three families above.
ValuationPtr randomSubmodular(int m, std::mt19937_64& rng);
ValuationList randomSubmodularInstance(int n, int m, std::uint64_t seed);

/// Deterministic under the seed; the result is validated before it is returned.
Instance generate(Family family, const GenParams& params, std::uint64_t seed);

struct RunOptions
{
  std::string ordering = "stolen-last";
  std::string policy   = "lex";
  std::size_t stepCap  = 1000000;
  std::size_t roundCap = 1000000;
  bool greedyInit      = false;
  bool randomInit      = false;  ///< uniform random start drawn from `seed`
  std::uint64_t seed   = 0;
};

struct RunReport
{
  std::string algorithm;
  std::uint64_t steals    = 0;
  std::uint64_t rounds    = 0;
  std::uint64_t exchanges = 0;
  QueryLedger ledger;
  Allocation initial;
  Allocation allocation;
  BidProfile bids;
  Money initialWelfare;
  Money welfare;
  std::optional<Money> opt;
  std::optional<Money> ratio;
  /// Set only by the brute-force equilibrium check; empty when it is out of reach.
  std::optional<bool> equilibriumVerified;
  double wallSeconds = 0;
  /// Steal events, dynamic steps or recursion nodes, one JSON object each.
  std::vector<nlohmann::json> trace;
  nlohmann::json details = nlohmann::json::object();
};

/// "steal", "topsteal", "dynamic" or "greedy-init" on an instance. The start is the
/// instance's allocation, the greedy allocation with greedyInit, a random allocation with
/// randomInit, or everything to bidder 0.
RunReport runAlgorithm(const Instance& instance, const std::string& algorithm, const RunOptions& options);

/// Best-reply dynamic on the adaptive Gray instance for odd m.
RunReport runGrayDynamic(int m, const RunOptions& options);

nlohmann::json reportToJson(const RunReport& report, bool withWallTime = true);
/// Scalar report fields as (column, value) pairs for CSV output.
std::vector<std::pair<std::string, std::string>> reportColumns(const RunReport& report);

nlohmann::json searchReportToJson(const SearchReport& report);
nlohmann::json isoperimetricToJson(const IsoperimetricReport& report);

struct BenchRow
{
  std::string name;
  std::size_t runs = 0;
  double seconds   = 0;
};

/// Fixed workloads timed end to end; `scale` multiplies the run counts.
std::vector<BenchRow> runBench(std::uint64_t seed, double scale = 1.0);

}  // namespace ssa
