#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "maninlab/arith.hpp"
#include "maninlab/polynomial.hpp"

namespace maninlab {

// x = a / b in Q^n with b > 0 and gcd(a_1, ..., a_n, b) = 1.
class RationalPoint {
 public:
  /// Reduces (a, b) to primitive form; b must be nonzero (sign moves into a).
  RationalPoint(std::vector<std::int64_t> a, std::int64_t b);
  static RationalPoint origin(int n) { return RationalPoint(std::vector<std::int64_t>(n, 0), 1); }
  static RationalPoint from_rationals(std::span<const Rational> x);

  std::span<const std::int64_t> numerators() const noexcept { return a_; }
  std::int64_t denominator() const noexcept { return b_; }
  int dimension() const noexcept { return static_cast<int>(a_.size()); }
  std::vector<Rational> coordinates() const;

  friend bool operator==(const RationalPoint&, const RationalPoint&) = default;

 private:
  std::vector<std::int64_t> a_;
  std::int64_t b_;
};

// s = (s0, s1) on the basis (D0, D1) of Pic(X).
struct PicardParameter {
  double s0 = 0.0;
  double s1 = 0.0;

  static PicardParameter anticanonical(int n) { return {static_cast<double>(n + 1), static_cast<double>(n)}; }
  bool is_integral() const;
  bool is_effective() const { return s0 >= 0.0 && s1 >= 0.0; }
  friend bool operator==(const PicardParameter&, const PicardParameter&) = default;
};

// A place of Q: a prime, or the archimedean place (prime == 0).
struct Place {
  std::uint64_t prime = 0;
  static Place infinity() { return {0}; }
  static Place finite(std::uint64_t p) { return {p}; }
  bool is_archimedean() const noexcept { return prime == 0; }
};

// Local heights (H_{D0,v}, H_{D1,v}). At a finite place both are p^e0, p^e1;
// at the archimedean place they are reals.
struct LocalHeightValue {
  Place place;
  int e0 = 0;  // finite places: H_{D0,p} = p^e0
  int e1 = 0;  // finite places: H_{D1,p} = p^e1
  long double h_d0 = 1.0L;
  long double h_d1 = 1.0L;

  Rational exact_d0() const;
  Rational exact_d1() const;
};

/// ||x||_p = p^(v_p(b) - min_i v_p(a_i)); 0 for x = 0.
Rational padic_sup_norm(const RationalPoint& x, std::uint64_t p);

/// Exponent m_p with max(1, ||x||_p) = p^m_p.
int padic_max_exponent(const RationalPoint& x, std::uint64_t p);

LocalHeightValue local_height(const HomogeneousPolynomial& f, const RationalPoint& x, Place v);

/// Local factor H_v(s; x) = H_{D0,v}^s0 * H_{D1,v}^s1.
long double local_height_pairing(const LocalHeightValue& h, const PicardParameter& s);

struct GlobalHeight {
  long double value = 1.0L;
  long double archimedean = 1.0L;
  long double finite_part = 1.0L;
  /// Exact finite part when s is integral.
  std::optional<Rational> finite_part_exact;
  /// Primes where some local height differs from 1 (all divide b).
  std::vector<std::uint64_t> contributing_primes;
};

/// Product over all places; the finite places with a nontrivial factor are
/// the primes dividing b.
GlobalHeight global_height(const HomogeneousPolynomial& f, const PicardParameter& s, const RationalPoint& x);

struct HeightDecomposition {
  long double m_global = 1.0L;     // prod_v max-term = sqrt(b^2 + |a|^2)
  long double h_d1_global = 1.0L;  // prod_v H_{D1,v}
};

HeightDecomposition height_decomposition(const HomogeneousPolynomial& f, const RationalPoint& x);

// Closed-form global height in primitive coordinates, the counting hot path:
// with Q = b^2 + |a|^2 and g = gcd(b, f(a)),
//   H(s; a/b) = Q^(s0/2) * g^(s1-s0) * (b^2/Q + f(a)^2/Q^d)^((s0-s1)/2).
// Comparisons against a bound are float-first; near ties are settled exactly
// (integral s) or in 100-digit arithmetic.
class HeightEvaluator {
 public:
  HeightEvaluator(const HomogeneousPolynomial& f, const PicardParameter& s);

  struct Sample {
    std::int64_t q = 0;   // b^2 + |a|^2
    __int128 fa = 0;      // f(a)
    std::int64_t g = 1;   // gcd(b, f(a))
    std::int64_t b = 1;
    long double log_height = 0.0L;
  };

  Sample sample(std::span<const std::int64_t> a, std::int64_t b) const;
  long double height(std::span<const std::int64_t> a, std::int64_t b) const;

  /// Exact-on-ties test H <= bound.
  bool at_most(const Sample& x, double bound) const;
  /// -1, 0, +1 as H <, =, > bound; escalates precision only near ties.
  int compare(const Sample& x, double bound) const;

  const PicardParameter& parameter() const noexcept { return s_; }

 private:
  int compare_exact(const Sample& x, double bound) const;

  HomogeneousPolynomial f_;
  PicardParameter s_;
  int degree_;
};

}  // namespace maninlab
