#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace ssa {

inline constexpr int kMaxItems = 64;

/// A set of item indices in [0, 64), stored as a bitmask.
class Bundle
{
public:
  constexpr Bundle() = default;
  constexpr explicit Bundle(std::uint64_t bits)
    : bits_(bits)
  {}

  static constexpr Bundle full(int m)
  {
    return Bundle(m >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << m) - 1));
  }
  static constexpr Bundle single(int item)
  {
    return Bundle(std::uint64_t{1} << item);
  }
  static Bundle of(std::initializer_list<int> items);
  static Bundle fromItems(const std::vector<int>& items);

  constexpr std::uint64_t bits() const
  {
    return bits_;
  }
  constexpr bool contains(int item) const
  {
    return (bits_ >> item) & 1U;
  }
  constexpr Bundle with(int item) const
  {
    return Bundle(bits_ | (std::uint64_t{1} << item));
  }
  constexpr Bundle without(int item) const
  {
    return Bundle(bits_ & ~(std::uint64_t{1} << item));
  }
  constexpr int size() const
  {
    return std::popcount(bits_);
  }
  constexpr bool empty() const
  {
    return bits_ == 0;
  }
  constexpr bool isSubsetOf(Bundle other) const
  {
    return (bits_ & ~other.bits_) == 0;
  }
  constexpr bool intersects(Bundle other) const
  {
    return (bits_ & other.bits_) != 0;
  }
  /// Smallest member; undefined on the empty bundle.
  constexpr int first() const
  {
    return std::countr_zero(bits_);
  }
  /// One past the largest member (0 for the empty bundle).
  constexpr int bound() const
  {
    return 64 - std::countl_zero(bits_);
  }

  std::vector<int> items() const;

  template <class Fn>
  void forEachItem(Fn&& fn) const
  {
    for (std::uint64_t rest = bits_; rest != 0; rest &= rest - 1)
    {
      fn(std::countr_zero(rest));
    }
  }

  friend constexpr Bundle operator|(Bundle a, Bundle b)
  {
    return Bundle(a.bits_ | b.bits_);
  }
  friend constexpr Bundle operator&(Bundle a, Bundle b)
  {
    return Bundle(a.bits_ & b.bits_);
  }
  /// Set difference.
  friend constexpr Bundle operator-(Bundle a, Bundle b)
  {
    return Bundle(a.bits_ & ~b.bits_);
  }
  friend constexpr bool operator==(Bundle a, Bundle b) = default;

private:
  std::uint64_t bits_ = 0;
};

/// Lexicographic order on the ascending item lists ({0,2} < {1} , {0} < {0,1}).
bool lexLess(Bundle a, Bundle b);

/// Demand tie rule: smaller cardinality first, then lexicographically smaller.
bool tieRuleLess(Bundle a, Bundle b);

/// Calls fn(sub) for every subset of mask, including the empty set and mask itself.
template <class Fn>
void forEachSubset(Bundle mask, Fn&& fn)
{
  std::uint64_t const m = mask.bits();
  std::uint64_t sub     = m;
  while (true)
  {
    fn(Bundle(sub));
    if (sub == 0)
    {
      break;
    }
    sub = (sub - 1) & m;
  }
}

/// Calls fn(sub) for every k-subset of the first n items in increasing bit order (Gosper).
template <class Fn>
void forEachKSubset(int n, int k, Fn&& fn)
{
  if (k < 0 || k > n)
  {
    return;
  }
  if (k == 0)
  {
    fn(Bundle{});
    return;
  }
  std::uint64_t s     = (std::uint64_t{1} << k) - 1;
  std::uint64_t limit = n >= 64 ? 0 : (std::uint64_t{1} << n);
  while (true)
  {
    fn(Bundle(s));
    std::uint64_t const c = s & (~s + 1);
    std::uint64_t const r = s + c;
    if (r == 0)
    {
      break;  // wrapped past bit 63
    }
    s = (((r ^ s) >> 2) / c) | r;
    if (limit != 0 && s >= limit)
    {
      break;
    }
  }
}

std::string toString(Bundle bundle);

}  // namespace ssa
