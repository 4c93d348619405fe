#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace maninlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Primes p <= limit, ascending (simple sieve).
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

bool is_prime(std::uint64_t n);

/// Distinct prime divisors of |n|, ascending. n must be nonzero.
std::vector<std::uint64_t> prime_divisors(std::uint64_t n);

/// p-adic valuation of a nonzero integer.
int valuation(std::int64_t x, std::uint64_t p);
int valuation(const BigInt& x, std::uint64_t p);

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t m);
/// Inverse of a modulo m; requires gcd(a, m) = 1.
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m);
/// Reduce a signed integer into [0, m).
std::uint64_t reduce_mod(std::int64_t x, std::uint64_t m);

/// base^e as a 64-bit integer; throws Error(Overflow) if it does not fit.
std::uint64_t checked_pow(std::uint64_t base, unsigned e);

/// p^e for any integer e, exactly.
Rational rational_power(std::uint64_t p, int e);
Rational rational_pow(const Rational& base, int e);

std::int64_t gcd_all(std::span<const std::int64_t> v);

double to_double(const Rational& q);
long double to_long_double(const Rational& q);
/// "a/b" or "a" when the denominator is 1.
std::string to_string(const Rational& q);
/// Exact rational value of a finite double.
Rational exact_rational(double x);

/// Formats with 12 significant digits, the interchange precision of all reports.
std::string format_real(double x);

}  // namespace maninlab

namespace maninlab {

BigInt to_bigint(__int128 x);
/// p-adic valuation of a nonzero 128-bit integer.
int valuation(__int128 x, std::uint64_t p);
__int128 abs128(__int128 x);
std::string to_string(__int128 x);

}  // namespace maninlab
