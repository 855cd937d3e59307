#include "ssa/errors.hpp"
#include "ssa/hardness.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace ssa {

namespace {

BigInt binomial(int n, int k)
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

BigInt pow2(int e)
{
  return BigInt(1) << e;
}

/// Smallest N >= 1 with (N * scale)^4 >= 2^e.
BigInt fourthRootCeil(int e, int scale)
{
  if (e <= 0)
  {
    return 1;
  }
  BigInt const target = pow2(e);
  BigInt lo           = 1;
  BigInt hi           = pow2(e / 4 + 2);
  while (lo < hi)
  {
    BigInt const mid = (lo + hi) / 2;
    BigInt const v   = mid * scale;
    if (v * v * v * v >= target)
    {
      hi = mid;
    }
    else
    {
      lo = mid + 1;
    }
  }
  return lo;
}

struct Graph
{
  int n = 0;
  std::vector<Bundle> vertices;
  std::vector<std::vector<int>> adjacency;
};

Graph buildGraph(int n)
{
  Graph g;
  g.n         = n;
  g.vertices  = oddGraphVertices(n);
  int const m = 2 * n - 1;
  std::unordered_map<std::uint64_t, int> index;
  for (std::size_t i = 0; i < g.vertices.size(); ++i)
  {
    index.emplace(g.vertices[i].bits(), static_cast<int>(i));
  }
  g.adjacency.resize(g.vertices.size());
  for (std::size_t i = 0; i < g.vertices.size(); ++i)
  {
    for (Bundle nb : oddGraphNeighbours(g.vertices[i], m))
    {
      g.adjacency[i].push_back(index.at(nb.bits()));
    }
  }
  return g;
}

void record(IsoperimetricReport& report, int n, std::uint64_t k, std::uint64_t internal, std::uint64_t neighbours)
{
  ++report.subsets;
  report.maxInternal[k] = std::max(report.maxInternal[k], internal);
  report.edgeBound      = report.edgeBound && edgeBoundHolds(internal, k);
  report.neighbourBound = report.neighbourBound && neighbourBoundHolds(n, k, neighbours);
}

}  // namespace

std::vector<Bundle> oddGraphNeighbours(Bundle vertex, int m)
{
  if (m % 2 == 0 || vertex.size() != m / 2 + 1 || !vertex.isSubsetOf(Bundle::full(m)))
  {
    throw DomainError("odd graph vertices are (m'+1)-subsets of [m] for odd m");
  }
  Bundle const rest = Bundle::full(m) - vertex;
  std::vector<Bundle> out;
  out.reserve(static_cast<std::size_t>(vertex.size()));
  vertex.forEachItem([&](int j) { out.push_back(rest.with(j)); });
  return out;
}

int oddGraphDistance(Bundle a, Bundle b, int m)
{
  int const half = m / 2;
  int const s    = (a & b).size() - 1;
  if (s < 0 || a.size() != half + 1 || b.size() != half + 1)
  {
    throw DomainError("odd graph distance needs two (m'+1)-bundles");
  }
  return std::min(2 * (half - s), 2 * s + 1);
}

BigInt oddGraphBallSize(int n, int radius)
{
  int const half = n - 1;
  BigInt total   = 0;
  for (int t = 1; t <= n; ++t)
  {
    int const s = t - 1;
    if (std::min(2 * (half - s), 2 * s + 1) <= radius)
    {
      total += binomial(n, t) * binomial(n - 1, n - t);
    }
  }
  return total;
}

std::vector<Bundle> oddGraphVertices(int n)
{
  if (n < 1 || n > 8)
  {
    throw CapabilityError("explicit odd graphs are limited to n <= 8");
  }
  std::vector<Bundle> out;
  forEachKSubset(2 * n - 1, n, [&](Bundle b) { out.push_back(b); });
  return out;
}

bool edgeBoundHolds(std::uint64_t internalEdges, std::uint64_t k)
{
  if (k <= 1)
  {
    return internalEdges == 0;
  }
  BigInt const lhs = pow2(static_cast<int>(3 * internalEdges));
  BigInt const rhs = boost::multiprecision::pow(BigInt(k), static_cast<unsigned>(2 * k));
  return lhs <= rhs;
}

bool neighbourBoundHolds(int n, std::uint64_t k, std::uint64_t neighbours)
{
  if (k == 0 || neighbours >= k)
  {
    return true;
  }
  BigInt const lhs = pow2(static_cast<int>(3 * static_cast<std::uint64_t>(n) * (k - neighbours)));
  BigInt const rhs = boost::multiprecision::pow(BigInt(k), static_cast<unsigned>(4 * k));
  return lhs <= rhs;
}

IsoperimetricReport isoperimetricExhaustive(int n)
{
  if (n < 1 || n > 3)
  {
    throw CapabilityError("exhaustive isoperimetric checks stop at O_3 (2^35 subsets for O_4)");
  }
  Graph const g = buildGraph(n);
  std::size_t const count = g.vertices.size();
  std::vector<std::uint64_t> adjMask(count);
  for (std::size_t i = 0; i < count; ++i)
  {
    for (int j : g.adjacency[i])
    {
      adjMask[i] |= std::uint64_t{1} << j;
    }
  }
  IsoperimetricReport report;
  report.n        = n;
  report.vertices = count;
  report.maxInternal.assign(count + 1, 0);
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << count); ++mask)
  {
    std::uint64_t twice = 0;
    std::uint64_t reach = 0;
    Bundle(mask).forEachItem([&](int i) {
      twice += static_cast<std::uint64_t>(std::popcount(adjMask[static_cast<std::size_t>(i)] & mask));
      reach |= adjMask[static_cast<std::size_t>(i)];
    });
    record(report, n, static_cast<std::uint64_t>(std::popcount(mask)), twice / 2,
           static_cast<std::uint64_t>(std::popcount(reach & ~mask)));
  }
  return report;
}

IsoperimetricReport isoperimetricSampled(int n, std::uint64_t samples, std::uint64_t seed)
{
  if (n < 1 || n > 6)
  {
    throw CapabilityError("sampled isoperimetric checks stop at O_6");
  }
  Graph const g = buildGraph(n);
  std::size_t const count = g.vertices.size();
  IsoperimetricReport report;
  report.n        = n;
  report.vertices = count;
  report.maxInternal.assign(count + 1, 0);
  std::mt19937_64 rng(seed);
  std::vector<int> perm(count);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<char> member(count, 0);
  std::vector<char> reached(count, 0);
  for (std::uint64_t sample = 0; sample < samples; ++sample)
  {
    std::size_t const k = std::uniform_int_distribution<std::size_t>(1, count)(rng);
    for (std::size_t i = 0; i < k; ++i)
    {
      std::swap(perm[i], perm[std::uniform_int_distribution<std::size_t>(i, count - 1)(rng)]);
    }
    std::fill(member.begin(), member.end(), 0);
    std::fill(reached.begin(), reached.end(), 0);
    for (std::size_t i = 0; i < k; ++i)
    {
      member[static_cast<std::size_t>(perm[i])] = 1;
    }
    std::uint64_t twice      = 0;
    std::uint64_t neighbours = 0;
    for (std::size_t i = 0; i < k; ++i)
    {
      for (int j : g.adjacency[static_cast<std::size_t>(perm[i])])
      {
        auto const u = static_cast<std::size_t>(j);
        if (member[u])
        {
          ++twice;
        }
        else if (!reached[u])
        {
          reached[u] = 1;
          ++neighbours;
        }
      }
    }
    record(report, n, k, twice / 2, neighbours);
  }
  return report;
}

BigInt componentThreshold(int half)
{
  return fourthRootCeil(3 * half - 4, 1);
}

BigInt queryLowerBound(int half)
{
  if (half < 1)
  {
    throw DomainError("query bound needs m' >= 1");
  }
  return fourthRootCeil(3 * half - 4, half);
}

}  // namespace ssa
