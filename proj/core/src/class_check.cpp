#include "ssa/errors.hpp"
#include "ssa/valuation.hpp"

#include <limits>

namespace ssa {

namespace {

constexpr int kMaxExhaustiveItems = 12;
constexpr int kMaxXosItems        = 8;

/// Maximizes sum(x) subject to rows * x <= rhs, x >= 0, with rhs >= 0 so the origin
/// is feasible. Condensed tableau, Bland's rule; exact arithmetic.
Money maximizeClauseMass(std::vector<std::vector<Money>> rows, std::vector<Money> rhs, int vars)
{
  std::size_t const rowCount = rows.size();
  std::size_t const cols     = static_cast<std::size_t>(vars);
  // Labels: 0..vars-1 are structural, vars.. are slacks.
  std::vector<int> nonbasic(cols);
  std::vector<int> basic(rowCount);
  for (std::size_t j = 0; j < cols; ++j)
  {
    nonbasic[j] = static_cast<int>(j);
  }
  for (std::size_t i = 0; i < rowCount; ++i)
  {
    basic[i] = vars + static_cast<int>(i);
  }
  std::vector<Money> reduced(cols, Money(1));
  Money objective = 0;

  while (true)
  {
    std::size_t entering = cols;
    for (std::size_t j = 0; j < cols; ++j)
    {
      if (reduced[j] > 0 && (entering == cols || nonbasic[j] < nonbasic[entering]))
      {
        entering = j;
      }
    }
    if (entering == cols)
    {
      return objective;
    }
    std::size_t leaving = rowCount;
    Money bestRatio;
    for (std::size_t i = 0; i < rowCount; ++i)
    {
      if (rows[i][entering] <= 0)
      {
        continue;
      }
      Money const ratio = rhs[i] / rows[i][entering];
      if (leaving == rowCount || ratio < bestRatio ||
          (ratio == bestRatio && basic[i] < basic[leaving]))
      {
        leaving   = i;
        bestRatio = ratio;
      }
    }
    if (leaving == rowCount)
    {
      throw DomainError("clause LP is unbounded; valuation is not normalized");
    }

    Money const pivot = rows[leaving][entering];
    auto& pivotRow    = rows[leaving];
    for (std::size_t j = 0; j < cols; ++j)
    {
      if (j != entering)
      {
        pivotRow[j] /= pivot;
      }
    }
    pivotRow[entering] = Money(1) / pivot;
    rhs[leaving] /= pivot;

    for (std::size_t i = 0; i < rowCount; ++i)
    {
      if (i == leaving || rows[i][entering] == 0)
      {
        continue;
      }
      Money const factor = rows[i][entering];
      for (std::size_t j = 0; j < cols; ++j)
      {
        if (j != entering)
        {
          rows[i][j] -= factor * pivotRow[j];
        }
      }
      rows[i][entering] = -factor * pivotRow[entering];
      rhs[i] -= factor * rhs[leaving];
    }
    if (reduced[entering] != 0)
    {
      Money const factor = reduced[entering];
      for (std::size_t j = 0; j < cols; ++j)
      {
        if (j != entering)
        {
          reduced[j] -= factor * pivotRow[j];
        }
      }
      reduced[entering] = -factor * pivotRow[entering];
      objective += factor * rhs[leaving];
    }
    std::swap(nonbasic[entering], basic[leaving]);
  }
}

ClassCheck checkMonotone(const std::vector<Money>& table, int m)
{
  std::uint64_t const count = std::uint64_t{1} << m;
  for (std::uint64_t s = 0; s < count; ++s)
  {
    for (int j = 0; j < m; ++j)
    {
      std::uint64_t const bit = std::uint64_t{1} << j;
      if (!(s & bit) && table[s | bit] < table[s])
      {
        return {false, ClassWitness{Bundle(s), Bundle(s | bit), j}};
      }
    }
  }
  return {};
}

ClassCheck checkSubmodular(const std::vector<Money>& table, int m)
{
  std::uint64_t const count = std::uint64_t{1} << m;
  for (std::uint64_t s = 0; s < count; ++s)
  {
    for (int j = 0; j < m; ++j)
    {
      std::uint64_t const bj = std::uint64_t{1} << j;
      if (s & bj)
      {
        continue;
      }
      Money const small = table[s | bj] - table[s];
      for (int k = 0; k < m; ++k)
      {
        std::uint64_t const bk = std::uint64_t{1} << k;
        if (k == j || (s & bk))
        {
          continue;
        }
        Money const large = table[s | bj | bk] - table[s | bk];
        if (small < large)
        {
          return {false, ClassWitness{Bundle(s), Bundle(s | bk), j}};
        }
      }
    }
  }
  return {};
}

ClassCheck checkSubadditive(const std::vector<Money>& table, int m)
{
  std::uint64_t const count = std::uint64_t{1} << m;
  bool const monotone       = checkMonotone(table, m).holds;
  if (monotone)
  {
    // For monotone v, disjoint pairs suffice: v(S)+v(T) >= v(S)+v(T-S) >= v(S u T).
    for (std::uint64_t u = 1; u < count; ++u)
    {
      ClassCheck result;
      forEachSubset(Bundle(u), [&](Bundle s) {
        if (!result.holds)
        {
          return;
        }
        Bundle const t = Bundle(u) - s;
        if (table[s.bits()] + table[t.bits()] < table[u])
        {
          result = {false, ClassWitness{s, t, -1}};
        }
      });
      if (!result.holds)
      {
        return result;
      }
    }
    return {};
  }
  for (std::uint64_t s = 0; s < count; ++s)
  {
    for (std::uint64_t t = s; t < count; ++t)
    {
      if (table[s] + table[t] < table[s | t])
      {
        return {false, ClassWitness{Bundle(s), Bundle(t), -1}};
      }
    }
  }
  return {};
}

ClassCheck checkXos(const std::vector<Money>& table, int m)
{
  // v is XOS iff every S admits a clause a >= 0 supported on S with a(S) = v(S) and
  // a(T) <= v(T) for all T subset of S (monotonicity covers the rest).
  std::uint64_t const count = std::uint64_t{1} << m;
  if (!checkMonotone(table, m).holds)
  {
    return checkMonotone(table, m);
  }
  for (std::uint64_t s = 1; s < count; ++s)
  {
    Bundle const bundle(s);
    std::vector<int> const members = bundle.items();
    int const vars                 = static_cast<int>(members.size());
    std::vector<std::vector<Money>> rows;
    std::vector<Money> rhs;
    forEachSubset(bundle, [&](Bundle t) {
      if (t.empty())
      {
        return;
      }
      std::vector<Money> row(static_cast<std::size_t>(vars));
      for (int idx = 0; idx < vars; ++idx)
      {
        row[static_cast<std::size_t>(idx)] = t.contains(members[static_cast<std::size_t>(idx)]) ? 1 : 0;
      }
      rows.push_back(std::move(row));
      rhs.push_back(table[t.bits()]);
    });
    Money const best = maximizeClauseMass(std::move(rows), std::move(rhs), vars);
    if (best < table[s])
    {
      return {false, ClassWitness{bundle, Bundle{}, -1}};
    }
  }
  return {};
}

}  // namespace

ClassCheck verifyClass(const Valuation& v, ValuationClass cls)
{
  int const m   = v.itemCount();
  int const cap = cls == ValuationClass::Xos ? kMaxXosItems : kMaxExhaustiveItems;
  if (m > cap)
  {
    throw CapabilityError("exhaustive class check needs m <= " + std::to_string(cap));
  }
  std::vector<Money> const table = tabulate(v);
  switch (cls)
  {
  case ValuationClass::Monotone:
    return checkMonotone(table, m);
  case ValuationClass::Submodular:
    return checkSubmodular(table, m);
  case ValuationClass::Subadditive:
    return checkSubadditive(table, m);
  case ValuationClass::Xos:
    return checkXos(table, m);
  }
  return {};
}

}  // namespace ssa
