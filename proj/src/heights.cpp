#include "maninlab/heights.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <numeric>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "maninlab/errors.hpp"

namespace maninlab {

RationalPoint::RationalPoint(std::vector<std::int64_t> a, std::int64_t b) : a_(std::move(a)), b_(b) {
  if (b_ == 0) fail(ErrorCode::InvalidArgument, "rational point with zero denominator");
  if (b_ < 0) {
    b_ = -b_;
    for (auto& x : a_) x = -x;
  }
  std::int64_t g = b_;
  for (std::int64_t x : a_) g = std::gcd(g, x);
  if (g > 1) {
    b_ /= g;
    for (auto& x : a_) x /= g;
  }
}

RationalPoint RationalPoint::from_rationals(std::span<const Rational> x) {
  BigInt common = 1;
  for (const Rational& q : x) common = boost::multiprecision::lcm(common, boost::multiprecision::denominator(q));
  std::vector<std::int64_t> a;
  a.reserve(x.size());
  for (const Rational& q : x) {
    BigInt v = boost::multiprecision::numerator(q) * (common / boost::multiprecision::denominator(q));
    if (abs(v) > BigInt(INT64_MAX)) fail(ErrorCode::Overflow, "rational point does not fit 64-bit coordinates");
    a.push_back(v.convert_to<std::int64_t>());
  }
  if (common > BigInt(INT64_MAX)) fail(ErrorCode::Overflow, "rational point denominator too large");
  return RationalPoint(std::move(a), common.convert_to<std::int64_t>());
}

std::vector<Rational> RationalPoint::coordinates() const {
  std::vector<Rational> out;
  out.reserve(a_.size());
  for (std::int64_t x : a_) out.emplace_back(Rational(x) / b_);
  return out;
}

bool PicardParameter::is_integral() const {
  return std::floor(s0) == s0 && std::floor(s1) == s1 && std::fabs(s0) < 1e6 && std::fabs(s1) < 1e6;
}

Rational LocalHeightValue::exact_d0() const {
  if (place.is_archimedean()) fail(ErrorCode::InvalidArgument, "archimedean heights are not exact");
  return rational_power(place.prime, e0);
}

Rational LocalHeightValue::exact_d1() const {
  if (place.is_archimedean()) fail(ErrorCode::InvalidArgument, "archimedean heights are not exact");
  return rational_power(place.prime, e1);
}

namespace {

// v_p(b) - min_i v_p(a_i), or nullopt for a = 0.
std::optional<int> sup_norm_exponent(const RationalPoint& x, std::uint64_t p) {
  std::optional<int> min_v;
  for (std::int64_t ai : x.numerators()) {
    if (ai == 0) continue;
    const int v = valuation(ai, p);
    if (!min_v || v < *min_v) min_v = v;
  }
  if (!min_v) return std::nullopt;
  return valuation(x.denominator(), p) - *min_v;
}

}  // namespace

Rational padic_sup_norm(const RationalPoint& x, std::uint64_t p) {
  const auto e = sup_norm_exponent(x, p);
  if (!e) return Rational(0);
  return rational_power(p, *e);
}

int padic_max_exponent(const RationalPoint& x, std::uint64_t p) {
  const auto e = sup_norm_exponent(x, p);
  return e ? std::max(0, *e) : 0;
}

LocalHeightValue local_height(const HomogeneousPolynomial& f, const RationalPoint& x, Place v) {
  if (x.dimension() != f.num_variables()) {
    fail(ErrorCode::DimensionMismatch, "point dimension does not match the polynomial");
  }
  LocalHeightValue out;
  out.place = v;
  const __int128 fa = f.evaluate(x.numerators());
  const std::int64_t b = x.denominator();
  const int d = f.degree();
  if (!v.is_archimedean()) {
    const std::uint64_t p = v.prime;
    const int m = padic_max_exponent(x, p);
    // H_{D1,p}^{-1} = max(p^-m, |f(x)|_p p^{-dm}), |f(x)|_p = p^{d v(b) - v(f(a))}.
    int e1 = m;
    if (fa != 0) e1 = std::min(m, valuation(fa, p) - d * valuation(b, p) + d * m);
    out.e1 = e1;
    out.e0 = m - e1;
    out.h_d0 = std::pow(static_cast<long double>(p), out.e0);
    out.h_d1 = std::pow(static_cast<long double>(p), out.e1);
    return out;
  }
  // Archimedean: 1 + |x|^2 = Q / b^2 with Q = b^2 + |a|^2.
  long double q = static_cast<long double>(b) * b;
  for (std::int64_t ai : x.numerators()) q += static_cast<long double>(ai) * ai;
  const long double bb = static_cast<long double>(b) * b;
  const long double scaled_f = static_cast<long double>(fa) / std::pow(q, d / 2.0L);
  const long double inv_h1 = std::sqrt(bb / q + scaled_f * scaled_f);
  out.h_d1 = 1.0L / inv_h1;
  out.h_d0 = std::sqrt(q) / static_cast<long double>(b) * inv_h1;
  return out;
}

long double local_height_pairing(const LocalHeightValue& h, const PicardParameter& s) {
  if (!h.place.is_archimedean()) {
    const long double e = h.e0 * static_cast<long double>(s.s0) + h.e1 * static_cast<long double>(s.s1);
    return std::pow(static_cast<long double>(h.place.prime), e);
  }
  return std::pow(h.h_d0, static_cast<long double>(s.s0)) * std::pow(h.h_d1, static_cast<long double>(s.s1));
}

GlobalHeight global_height(const HomogeneousPolynomial& f, const PicardParameter& s, const RationalPoint& x) {
  GlobalHeight out;
  out.archimedean = local_height_pairing(local_height(f, x, Place::infinity()), s);
  const bool integral = s.is_integral();
  Rational exact = 1;
  long double finite = 1.0L;
  if (x.denominator() > 1) {
    for (std::uint64_t p : prime_divisors(static_cast<std::uint64_t>(x.denominator()))) {
      const LocalHeightValue h = local_height(f, x, Place::finite(p));
      if (h.e0 == 0 && h.e1 == 0) continue;
      out.contributing_primes.push_back(p);
      finite *= local_height_pairing(h, s);
      if (integral) {
        exact *= rational_power(p, h.e0 * static_cast<int>(s.s0) + h.e1 * static_cast<int>(s.s1));
      }
    }
  }
  out.finite_part = finite;
  if (integral) {
    out.finite_part_exact = exact;
    out.finite_part = to_long_double(exact);
  }
  out.value = out.finite_part * out.archimedean;
  return out;
}

HeightDecomposition height_decomposition(const HomogeneousPolynomial& f, const RationalPoint& x) {
  HeightDecomposition out;
  const LocalHeightValue inf = local_height(f, x, Place::infinity());
  // max term at infinity: sqrt(1 + |x|^2) = H_D0 * H_D1
  out.m_global = inf.h_d0 * inf.h_d1;
  out.h_d1_global = inf.h_d1;
  if (x.denominator() > 1) {
    for (std::uint64_t p : prime_divisors(static_cast<std::uint64_t>(x.denominator()))) {
      const LocalHeightValue h = local_height(f, x, Place::finite(p));
      out.m_global *= std::pow(static_cast<long double>(p), h.e0 + h.e1);
      out.h_d1_global *= h.h_d1;
    }
  }
  return out;
}

HeightEvaluator::HeightEvaluator(const HomogeneousPolynomial& f, const PicardParameter& s)
    : f_(f), s_(s), degree_(f.degree()) {}

HeightEvaluator::Sample HeightEvaluator::sample(std::span<const std::int64_t> a, std::int64_t b) const {
  Sample x;
  x.b = b;
  x.q = b * b;
  for (std::int64_t ai : a) x.q += ai * ai;
  x.fa = f_.evaluate(a);
  if (x.fa == 0) {
    x.g = b;
  } else {
    const __int128 r = abs128(x.fa) % b;
    x.g = std::gcd(b, static_cast<std::int64_t>(r));
  }
  const long double q = static_cast<long double>(x.q);
  const long double bb = static_cast<long double>(b) * b;
  const long double scaled_f = static_cast<long double>(x.fa) / std::pow(q, degree_ / 2.0L);
  const long double inner = bb / q + scaled_f * scaled_f;
  const long double s0 = s_.s0, s1 = s_.s1;
  x.log_height = 0.5L * s0 * std::log(q) + (s1 - s0) * std::log(static_cast<long double>(x.g)) +
                 0.5L * (s0 - s1) * std::log(inner);
  return x;
}

long double HeightEvaluator::height(std::span<const std::int64_t> a, std::int64_t b) const {
  return std::exp(sample(a, b).log_height);
}

bool HeightEvaluator::at_most(const Sample& x, double bound) const { return compare(x, bound) <= 0; }

int HeightEvaluator::compare(const Sample& x, double bound) const {
  if (!(bound > 0.0)) return 1;
  const long double diff = x.log_height - std::log(static_cast<long double>(bound));
  constexpr long double kGuard = 1e-12L;
  if (diff < -kGuard) return -1;
  if (diff > kGuard) return 1;
  return compare_exact(x, bound);
}

int HeightEvaluator::compare_exact(const Sample& x, double bound) const {
  if (s_.is_integral()) {
    // H^2 = Q^s0 g^(2(s1-s0)) ((b^2 Q^(d-1) + f(a)^2) / Q^d)^(s0-s1)
    const int s0 = static_cast<int>(s_.s0);
    const int s1 = static_cast<int>(s_.s1);
    const Rational q(x.q);
    const BigInt fa = to_bigint(x.fa);
    const Rational bb = Rational(x.b) * x.b;
    const Rational inner = (bb * rational_pow(q, degree_ - 1) + Rational(fa * fa)) / rational_pow(q, degree_);
    const Rational h2 = rational_pow(q, s0) * rational_pow(Rational(x.g), 2 * (s1 - s0)) * rational_pow(inner, s0 - s1);
    const Rational bound_exact = exact_rational(bound);
    const Rational b2 = bound_exact * bound_exact;
    if (h2 < b2) return -1;
    if (h2 > b2) return 1;
    return 0;
  }
  using Float = boost::multiprecision::cpp_bin_float_100;
  const Float q(x.q);
  const Float fa(to_bigint(x.fa));
  const Float bb = Float(x.b) * x.b;
  const Float inner = bb / q + (fa * fa) / pow(q, degree_);
  const Float s0(s_.s0), s1(s_.s1);
  const Float log_h = s0 / 2 * log(q) + (s1 - s0) * log(Float(x.g)) + (s0 - s1) / 2 * log(inner);
  const Float diff = log_h - log(Float(bound));
  if (abs(diff) < Float("1e-80")) return 0;
  return diff < 0 ? -1 : 1;
}

}  // namespace maninlab
