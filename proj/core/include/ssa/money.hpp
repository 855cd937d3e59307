#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace ssa {

/// Exact rational amount used for every value, bid, price and epsilon.
using Money = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

/// Serializes as "num/den" (always with a denominator, e.g. "3/1").
std::string toString(const Money& amount);

/// Accepts "num/den" or a bare integer "num". Throws DomainError on malformed input
/// or a zero denominator.
Money parseMoney(std::string_view text);

/// Greatest common divisor of two non-negative rationals (gcd of numerators over lcm
/// of denominators). gcd(0, x) = x.
Money rationalGcd(const Money& a, const Money& b);

Money sum(const std::vector<Money>& amounts);

}  // namespace ssa
