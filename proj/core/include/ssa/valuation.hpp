#pragma once

#include "ssa/bundle.hpp"
#include "ssa/money.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace ssa {

enum class ValuationKind
{
  Table,
  Additive,
  BudgetAdditive,
  Xos,
  Coverage,
  SetPair,
  Sensitive,
  Gray,
  Marginal,
  Erased,
};

std::string_view kindName(ValuationKind kind);

/// Additive valuation given by non-negative per-item weights; unlisted items weigh 0.
class AdditiveClause
{
public:
  AdditiveClause() = default;
  explicit AdditiveClause(std::map<int, Money> perItem);

  Money at(int item) const;
  Money total(Bundle bundle) const;
  void set(int item, Money weight);
  const std::map<int, Money>& entries() const
  {
    return perItem_;
  }

  friend bool operator==(const AdditiveClause&, const AdditiveClause&) = default;

private:
  std::map<int, Money> perItem_;
};

/// A monotone, normalized set function over m items. Implementations are immutable
/// after construction (the adaptive Gray family is the one documented exception: its
/// coefficients are owned by a single run).
class Valuation
{
public:
  explicit Valuation(int itemCount);
  virtual ~Valuation() = default;

  Valuation(const Valuation&)            = delete;
  Valuation& operator=(const Valuation&) = delete;

  int itemCount() const
  {
    return m_;
  }
  Bundle universe() const
  {
    return Bundle::full(m_);
  }

  virtual ValuationKind kind() const = 0;

  /// Unmetered evaluation. Throws DomainError for items >= m.
  Money value(Bundle bundle) const;

  /// Structured demand for families that have one; nullopt means "enumerate".
  virtual std::optional<Bundle> closedFormDemand(std::span<const Money> prices) const;

  /// True when the ordering-induced marginal clause is a legal XOS clause, i.e. the
  /// family is known to be submodular.
  virtual bool supportsOrderedClauses() const
  {
    return false;
  }

  /// Families that carry their own clause representation answer here.
  virtual std::optional<AdditiveClause> storedClause(Bundle bundle) const;

  /// Number of base value queries one evaluation costs (wrappers forward to a base).
  virtual std::uint64_t queryCost() const
  {
    return 1;
  }

  /// Serializes with the common {"kind": ..., "m": ...} schema.
  virtual nlohmann::json toJson() const;

protected:
  virtual Money evaluate(Bundle bundle) const = 0;
  void checkBundle(Bundle bundle) const;

private:
  int m_;
};

using ValuationPtr  = std::shared_ptr<const Valuation>;
using ValuationList = std::vector<ValuationPtr>;

/// Per-bidder query counters. Every metered oracle call increments exactly one counter.
class QueryLedger
{
public:
  struct Counts
  {
    std::uint64_t value  = 0;
    std::uint64_t demand = 0;
    std::uint64_t xos    = 0;

    std::uint64_t total() const
    {
      return value + demand + xos;
    }
  };

  QueryLedger() = default;
  explicit QueryLedger(std::size_t bidders);

  void chargeValue(std::size_t bidder, std::uint64_t count = 1);
  void chargeDemand(std::size_t bidder, std::uint64_t count = 1);
  void chargeXos(std::size_t bidder, std::uint64_t count = 1);

  Counts at(std::size_t bidder) const;
  Counts total() const;
  std::size_t bidders() const
  {
    return counts_.size();
  }

private:
  Counts& slot(std::size_t bidder);

  std::vector<Counts> counts_;
};

/// Metered query operations. A null ledger means unmetered.
Money value(const Valuation& v, Bundle bundle, QueryLedger* ledger = nullptr, std::size_t bidder = 0);

/// v(item | given) = v(given + item) - v(given). Two value queries.
Money marginal(const Valuation& v, int item, Bundle given, QueryLedger* ledger = nullptr,
               std::size_t bidder = 0);

/// Profit maximizer of v(S) - sum of prices over S. Ties: smallest cardinality, then
/// lexicographically smallest. Throws CapabilityError when no closed form exists and m > 20.
Bundle demand(const Valuation& v, std::span<const Money> prices, QueryLedger* ledger = nullptr,
              std::size_t bidder = 0);

/// Exhaustive argmax under the same tie rule (m <= 20), never uses closed forms.
Bundle exhaustiveDemand(const Valuation& v, std::span<const Money> prices);

/// A maximizing clause of S. Families with stored clauses return them; submodular
/// families return the marginals along `ordering`, which must be a permutation of S.
AdditiveClause xosClause(const Valuation& v, Bundle bundle, std::span<const int> ordering,
                         QueryLedger* ledger = nullptr, std::size_t bidder = 0);

/// All 2^m values indexed by bitmask (m <= 20).
std::vector<Money> tabulate(const Valuation& v);

inline constexpr int kMaxTableItems = 20;

/// Source of maximizing clauses for one bidder. Stateful oracles (the adaptive one)
/// must answer identically when asked twice about the same bundle.
class XosOracle
{
public:
  virtual ~XosOracle() = default;
  virtual AdditiveClause clause(Bundle bundle) = 0;
};

enum class ValuationClass
{
  Monotone,
  Submodular,
  Xos,
  Subadditive,
};

struct ClassWitness
{
  Bundle first;
  Bundle second;
  int item = -1;
};

struct ClassCheck
{
  bool holds = true;
  std::optional<ClassWitness> witness;
};

/// Exhaustive class membership: monotone/submodular/subadditive need m <= 12, XOS m <= 8.
/// A violated check reports (S, T, j) where meaningful: monotone (S, S+j, j), submodular
/// (S, T ⊇ S, j), subadditive (S, T, -1), XOS (S, -, -1).
ClassCheck verifyClass(const Valuation& v, ValuationClass cls);

}  // namespace ssa
