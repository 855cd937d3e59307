#include "ssa/bundle.hpp"

#include "ssa/errors.hpp"

namespace ssa {

Bundle Bundle::of(std::initializer_list<int> items)
{
  return fromItems(std::vector<int>(items));
}

Bundle Bundle::fromItems(const std::vector<int>& items)
{
  std::uint64_t bits = 0;
  for (int item : items)
  {
    if (item < 0 || item >= kMaxItems)
    {
      throw DomainError("item index " + std::to_string(item) + " out of range");
    }
    std::uint64_t const bit = std::uint64_t{1} << item;
    if (bits & bit)
    {
      throw DomainError("duplicate item " + std::to_string(item) + " in bundle");
    }
    bits |= bit;
  }
  return Bundle(bits);
}

std::vector<int> Bundle::items() const
{
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(size()));
  forEachItem([&](int j) { out.push_back(j); });
  return out;
}

bool lexLess(Bundle a, Bundle b)
{
  std::uint64_t const diff = a.bits() ^ b.bits();
  if (diff == 0)
  {
    return false;
  }
  int const d = std::countr_zero(diff);
  // Lists agree below d. The list holding d continues with d; the other continues with
  // its next item above d, or ends (and is then a proper prefix, hence smaller).
  bool const dInA              = a.contains(d);
  std::uint64_t const aboveMask = d >= 63 ? 0 : (~std::uint64_t{0} << (d + 1));
  if (dInA)
  {
    return (b.bits() & aboveMask) != 0;
  }
  return (a.bits() & aboveMask) == 0;
}

bool tieRuleLess(Bundle a, Bundle b)
{
  if (a.size() != b.size())
  {
    return a.size() < b.size();
  }
  return lexLess(a, b);
}

std::string toString(Bundle bundle)
{
  std::string out = "{";
  bool first      = true;
  bundle.forEachItem([&](int j) {
    if (!first)
    {
      out += ",";
    }
    out += std::to_string(j);
    first = false;
  });
  return out + "}";
}

}  // namespace ssa
