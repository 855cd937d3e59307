#include "ssa/xos_dynamics.hpp"

#include "ssa/errors.hpp"

#include <algorithm>
#include <random>

namespace ssa {

namespace {

/// Colex rank of weight-w bitstrings over m bits.
class LevelRanker
{
public:
  explicit LevelRanker(int m)
    : m_(m)
    , binom_(static_cast<std::size_t>(m + 1), std::vector<std::uint64_t>(static_cast<std::size_t>(m + 1), 0))
  {
    for (int a = 0; a <= m; ++a)
    {
      binom_[static_cast<std::size_t>(a)][0] = 1;
      for (int b = 1; b <= a; ++b)
      {
        binom_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          binom_[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)] +
          (b <= a - 1 ? binom_[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b)] : 0);
      }
    }
  }

  std::uint64_t choose(int a, int b) const
  {
    return (b < 0 || b > a) ? 0 : binom_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }

  std::uint64_t rank(std::uint64_t bits) const
  {
    std::uint64_t r = 0;
    int k           = 0;
    for (int j = 0; j < m_; ++j)
    {
      if ((bits >> j) & 1U)
      {
        ++k;
        r += choose(j, k);
      }
    }
    return r;
  }

  std::uint64_t unrank(std::uint64_t r, int w) const
  {
    std::uint64_t bits = 0;
    for (int j = m_ - 1; j >= 0 && w > 0; --j)
    {
      std::uint64_t const c = choose(j, w);
      if (r >= c)
      {
        r -= c;
        bits |= std::uint64_t{1} << j;
        --w;
      }
    }
    return bits;
  }

private:
  int m_;
  std::vector<std::vector<std::uint64_t>> binom_;
};

}  // namespace

std::vector<Bundle> grayMiddleLevels(int m)
{
  if (m < 3 || m > 25 || m % 2 == 0)
  {
    throw DomainError("middle-levels path needs odd m in [3, 25]");
  }
  int const h = m / 2;
  LevelRanker const ranker(m);
  std::uint64_t const lower = ranker.choose(m, h);
  std::uint64_t const total = 2 * lower;

  auto bitsOf = [&](std::uint64_t v) {
    return v < lower ? ranker.unrank(v, h) : ranker.unrank(v - lower, h + 1);
  };
  auto indexOf = [&](std::uint64_t bits) {
    return std::popcount(bits) == h ? ranker.rank(bits) : lower + ranker.rank(bits);
  };
  auto neighbours = [&](std::uint64_t v, auto&& fn) {
    std::uint64_t const bits = bitsOf(v);
    bool const low           = v < lower;
    for (int j = 0; j < m; ++j)
    {
      bool const set = ((bits >> j) & 1U) != 0;
      if (low != set)
      {
        fn(indexOf(bits ^ (std::uint64_t{1} << j)));
      }
    }
  };

  std::uint64_t const start = indexOf((std::uint64_t{1} << h) - 1);
  for (std::uint64_t attempt = 0; attempt < 8; ++attempt)
  {
    std::mt19937_64 rng(0x5eed + attempt);
    std::vector<std::uint64_t> path;
    path.reserve(total);
    std::vector<std::int64_t> pos(total, -1);
    std::vector<std::uint8_t> freeDegree(total, static_cast<std::uint8_t>(h + 1));
    auto visit = [&](std::uint64_t v) {
      pos[v] = static_cast<std::int64_t>(path.size());
      path.push_back(v);
      neighbours(v, [&](std::uint64_t u) { --freeDegree[u]; });
    };
    visit(start);
    std::uint64_t budget = 400 * total + 10000;
    std::vector<std::uint64_t> onPath;
    while (path.size() < total && budget > 0)
    {
      std::uint64_t const end = path.back();
      std::int64_t best       = -1;
      onPath.clear();
      neighbours(end, [&](std::uint64_t u) {
        if (pos[u] < 0)
        {
          if (best < 0 || freeDegree[u] < freeDegree[static_cast<std::uint64_t>(best)])
          {
            best = static_cast<std::int64_t>(u);
          }
        }
        else if (pos[u] + 2 < static_cast<std::int64_t>(path.size()))
        {
          onPath.push_back(u);
        }
      });
      if (best >= 0)
      {
        visit(static_cast<std::uint64_t>(best));
        continue;
      }
      if (onPath.empty())
      {
        break;
      }
      // Rotation: close onto w and reverse the tail, the old successor of w becomes the end.
      --budget;
      std::uniform_int_distribution<std::size_t> pick(0, onPath.size() - 1);
      // Of two random pivots keep the later one: shorter reversals, same randomness.
      auto const i = static_cast<std::size_t>(std::max(pos[onPath[pick(rng)]], pos[onPath[pick(rng)]]));
      std::reverse(path.begin() + static_cast<std::ptrdiff_t>(i + 1), path.end());
      for (std::size_t k = i + 1; k < path.size(); ++k)
      {
        pos[path[k]] = static_cast<std::int64_t>(k);
      }
    }
    if (path.size() == total)
    {
      std::vector<Bundle> out;
      out.reserve(total);
      for (auto v : path)
      {
        out.emplace_back(bitsOf(v));
      }
      return out;
    }
  }
  throw CapabilityError("middle-levels path search exhausted its budget at m = " + std::to_string(m));
}

bool isMiddleLevelsPath(const std::vector<Bundle>& path, int m)
{
  if (m < 3 || m % 2 == 0 || m > 25)
  {
    return false;
  }
  int const h = m / 2;
  LevelRanker const ranker(m);
  if (path.size() != 2 * ranker.choose(m, h))
  {
    return false;
  }
  std::vector<char> seen(path.size(), 0);
  std::uint64_t const lower = ranker.choose(m, h);
  for (std::size_t k = 0; k < path.size(); ++k)
  {
    Bundle const b = path[k];
    if (!b.isSubsetOf(Bundle::full(m)) || (b.size() != h && b.size() != h + 1))
    {
      return false;
    }
    std::uint64_t const idx = b.size() == h ? ranker.rank(b.bits()) : lower + ranker.rank(b.bits());
    if (seen[idx] != 0)
    {
      return false;
    }
    seen[idx] = 1;
    if (k > 0 && std::popcount(b.bits() ^ path[k - 1].bits()) != 1)
    {
      return false;
    }
  }
  return true;
}

}  // namespace ssa
