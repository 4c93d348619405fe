#include "maninlab/arith.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "maninlab/errors.hpp"

namespace maninlab {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::NonHomogeneous: return "NonHomogeneous";
    case ErrorCode::DegreeTooSmall: return "DegreeTooSmall";
    case ErrorCode::TooFewVariables: return "TooFewVariables";
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BadPrime: return "BadPrime";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::PoleAt: return "PoleAt";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::BoundTooLarge: return "BoundTooLarge";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::PrecisionNotReached: return "PrecisionNotReached";
  }
  return "Unknown";
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "prime_divisors: zero has no factorization");
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

int valuation(std::int64_t x, std::uint64_t p) {
  if (x == 0) fail(ErrorCode::InvalidArgument, "valuation of zero");
  std::uint64_t u = x < 0 ? static_cast<std::uint64_t>(-(x + 1)) + 1 : static_cast<std::uint64_t>(x);
  int v = 0;
  while (u % p == 0) {
    u /= p;
    ++v;
  }
  return v;
}

int valuation(const BigInt& x, std::uint64_t p) {
  if (x == 0) fail(ErrorCode::InvalidArgument, "valuation of zero");
  BigInt u = abs(x);
  int v = 0;
  while (u % p == 0) {
    u /= p;
    ++v;
  }
  return v;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (e > 0) {
    if (e & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    e >>= 1;
  }
  return result;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(m), new_r = static_cast<std::int64_t>(a % m);
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::int64_t tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) fail(ErrorCode::InvalidArgument, "inv_mod: argument not invertible");
  return reduce_mod(t, m);
}

std::uint64_t reduce_mod(std::int64_t x, std::uint64_t m) {
  std::int64_t r = x % static_cast<std::int64_t>(m);
  if (r < 0) r += static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(r);
}

std::uint64_t checked_pow(std::uint64_t base, unsigned e) {
  std::uint64_t result = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (__builtin_mul_overflow(result, base, &result)) {
      fail(ErrorCode::Overflow, "checked_pow: " + std::to_string(base) + "^" + std::to_string(e) +
                                    " exceeds 64 bits");
    }
  }
  return result;
}

Rational rational_power(std::uint64_t p, int e) {
  BigInt magnitude = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(e < 0 ? -e : e));
  if (e >= 0) return Rational(magnitude);
  return Rational(BigInt(1), magnitude);
}

Rational rational_pow(const Rational& base, int e) {
  const unsigned k = static_cast<unsigned>(e < 0 ? -e : e);
  Rational result = Rational(boost::multiprecision::pow(numerator(base), k),
                             boost::multiprecision::pow(denominator(base), k));
  if (e < 0) {
    if (result == 0) fail(ErrorCode::InvalidArgument, "rational_pow: zero to a negative power");
    result = 1 / result;
  }
  return result;
}

std::int64_t gcd_all(std::span<const std::int64_t> v) {
  std::int64_t g = 0;
  for (std::int64_t x : v) g = std::gcd(g, x);
  return g;
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

long double to_long_double(const Rational& q) {
  // cpp_rational converts through its own float path; do it via scaled integers.
  const BigInt& num = numerator(q);
  const BigInt& den = denominator(q);
  if (num == 0) return 0.0L;
  const long num_bits = static_cast<long>(msb(abs(num)));
  const long den_bits = static_cast<long>(msb(den));
  // Keep ~100 significant bits of the quotient.
  const long shift = 100 - (num_bits - den_bits);
  BigInt scaled = shift >= 0 ? BigInt((num << shift) / den) : BigInt(num / (den << -shift));
  long double mantissa = scaled.convert_to<long double>();
  return std::ldexp(mantissa, static_cast<int>(-shift));
}

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

Rational exact_rational(double x) {
  if (!std::isfinite(x)) fail(ErrorCode::InvalidArgument, "exact_rational: non-finite value");
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);
  // mantissa * 2^53 is an integer.
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  return Rational(scaled) * rational_power(2, exponent - 53);
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace maninlab

namespace maninlab {

BigInt to_bigint(__int128 x) {
  const bool negative = x < 0;
  unsigned __int128 u = negative ? static_cast<unsigned __int128>(-(x + 1)) + 1 : static_cast<unsigned __int128>(x);
  BigInt hi = static_cast<std::uint64_t>(u >> 64);
  BigInt result = (hi << 64) + static_cast<std::uint64_t>(u);
  return negative ? BigInt(-result) : result;
}

int valuation(__int128 x, std::uint64_t p) {
  if (x == 0) fail(ErrorCode::InvalidArgument, "valuation of zero");
  unsigned __int128 u = x < 0 ? static_cast<unsigned __int128>(-(x + 1)) + 1 : static_cast<unsigned __int128>(x);
  int v = 0;
  while (u % p == 0) {
    u /= p;
    ++v;
  }
  return v;
}

__int128 abs128(__int128 x) { return x < 0 ? -x : x; }

std::string to_string(__int128 x) { return to_bigint(x).str(); }

}  // namespace maninlab
