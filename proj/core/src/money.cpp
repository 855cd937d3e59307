#include "ssa/money.hpp"

#include "ssa/errors.hpp"

#include <charconv>

namespace ssa {

std::string toString(const Money& amount)
{
  return numerator(amount).str() + "/" + denominator(amount).str();
}

namespace {

BigInt parseInteger(std::string_view text, std::string_view whole)
{
  std::size_t start = 0;
  if (!text.empty() && (text[0] == '-' || text[0] == '+'))
  {
    start = 1;
  }
  if (start == text.size())
  {
    throw DomainError("malformed rational '" + std::string(whole) + "'");
  }
  for (std::size_t i = start; i < text.size(); ++i)
  {
    if (text[i] < '0' || text[i] > '9')
    {
      throw DomainError("malformed rational '" + std::string(whole) + "'");
    }
  }
  std::string digits(text);
  if (digits[0] == '+')
  {
    digits.erase(0, 1);
  }
  return BigInt(digits);
}

}  // namespace

Money parseMoney(std::string_view text)
{
  auto const slash = text.find('/');
  if (slash == std::string_view::npos)
  {
    return Money(parseInteger(text, text));
  }
  BigInt const num = parseInteger(text.substr(0, slash), text);
  BigInt const den = parseInteger(text.substr(slash + 1), text);
  if (den == 0)
  {
    throw DomainError("zero denominator in '" + std::string(text) + "'");
  }
  return Money(num, den);
}

Money rationalGcd(const Money& a, const Money& b)
{
  if (a == 0)
  {
    return abs(b);
  }
  if (b == 0)
  {
    return abs(a);
  }
  BigInt const num = gcd(BigInt(numerator(a)), BigInt(numerator(b)));
  BigInt const den = lcm(BigInt(denominator(a)), BigInt(denominator(b)));
  return abs(Money(num, den));
}

Money sum(const std::vector<Money>& amounts)
{
  Money total = 0;
  for (auto const& a : amounts)
  {
    total += a;
  }
  return total;
}

}  // namespace ssa
