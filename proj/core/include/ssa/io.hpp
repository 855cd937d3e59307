#pragma once

#include "ssa/auction.hpp"
#include "ssa/families.hpp"
#include "ssa/reductions.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace ssa {

/// Inverse of Valuation::toJson for every serializable family.
ValuationPtr valuationFromJson(const nlohmann::json& j);

nlohmann::json moneyToJson(const Money& amount);
Money moneyFromJson(const nlohmann::json& j);

nlohmann::json allocationToJson(const Allocation& allocation);
Allocation allocationFromJson(const nlohmann::json& j);

/// {"bids": [["num/den", ...], ...]}.
nlohmann::json bidsToJson(const BidProfile& bids);
BidProfile bidsFromJson(const nlohmann::json& j);

nlohmann::json ledgerToJson(const QueryLedger& ledger);

/// {"vertices": N, "edges": [[u, v, "w/1"], ...]}.
nlohmann::json graphToJson(const WeightedGraph& graph);
WeightedGraph graphFromJson(const nlohmann::json& j);

nlohmann::json setPairSystemToJson(const SetPairSystem& system);
SetPairSystem setPairSystemFromJson(const nlohmann::json& j);

struct Instance
{
  std::string family;
  int n              = 0;
  int m              = 0;
  std::uint64_t seed = 0;
  ValuationList valuations;
  std::optional<Allocation> allocation;
  nlohmann::json extra = nlohmann::json::object();
};

/// {"family", "n", "m", "seed", "valuations": [...], "allocation": [[...]], "extra": {...}}.
nlohmann::json instanceToJson(const Instance& instance);
/// Validates sizes and the allocation.
Instance instanceFromJson(const nlohmann::json& j);

nlohmann::json readJsonFile(const std::string& path);
/// Writes `j` followed by a newline; "-" or "" means stdout.
void writeJson(const nlohmann::json& j, const std::string& path);

}  // namespace ssa
