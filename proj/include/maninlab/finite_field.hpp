#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "maninlab/arith.hpp"
#include "maninlab/polynomial.hpp"

namespace maninlab {

inline constexpr double kDefaultCountBudget = 1e8;

// A character a in Z^n \ {0}; S(a) is the set of primes p with a in pZ^n.
struct CharacterVector {
  std::vector<std::int64_t> a;

  explicit CharacterVector(std::vector<std::int64_t> coords);
  static CharacterVector unit(int n, int i);

  std::int64_t content() const { return gcd_all(a); }
  bool is_primitive() const { return content() == 1; }
  bool in_support(std::uint64_t p) const;  // p in S(a)
  int dimension() const { return static_cast<int>(a.size()); }
};

struct SectionCount {
  std::uint64_t p = 0;
  std::uint64_t total = 0;
  std::uint64_t transverse = 0;
  std::uint64_t nontransverse = 0;
};

/// #Z_f(F_p) by exhaustive affine-cone enumeration divided by p - 1.
std::uint64_t count_projective_hypersurface(const Form& f, std::uint64_t p, double budget = kDefaultCountBudget);

/// Same count by fibering over the first n-1 coordinates and counting roots
/// in the last one with gcd(h, t^p - t). Cost ~ p^(n-2) log p.
std::uint64_t count_projective_fibered(const Form& f, std::uint64_t p);

/// (1 - 1/p) #Z_f(F_p) / p^(n-2).
Rational tau_p(const Form& f, std::uint64_t p);

/// Exhaustive count of Z_{f,a}(F_p) with the rank-2 transversality split.
SectionCount count_section(const Hypersurface& X, const CharacterVector& a, std::uint64_t p);

// Counts of primitive solutions y mod p^j of g(y) = 0 (mod p^j), j = 0..levels.
// Classes where grad g has stabilized (level k >= 2 delta + 1) are extended in
// closed form; from `geometric_from` on, affine[j+1] = p^(n-1) affine[j].
struct ValuationProfile {
  std::uint64_t p = 0;
  int n = 0;
  std::vector<BigInt> affine;
  bool stable = false;
  int geometric_from = 0;

  /// Projective count affine[j] / (p^(j-1) (p-1)).
  BigInt projective(int j) const;
  /// vol{y in Z_p^n : ||y|| = 1, v(g(y)) >= j} = affine[j] / p^(nj).
  Rational volume(int j) const;
};

ValuationProfile valuation_profile(const Form& g, std::uint64_t p, int levels, double budget = kDefaultCountBudget);

/// g(z_2..z_n) = f restricted to <a, y> = 0 through a unimodular change of
/// variables, so primitive zeros of the section correspond to primitive zeros of g.
Form section_form(const Form& f, const CharacterVector& a);

/// #Z_f(Z/p^alpha) (a empty) or #Z_{f,a}(Z/p^alpha): primitive solutions up to
/// unit scaling, by layered lifting.
BigInt count_mod_prime_power(const Hypersurface& X, const std::optional<CharacterVector>& a, std::uint64_t p,
                             int alpha, double budget = kDefaultCountBudget);

/// Exhaustive count of the same quantity; the hyperplane is solved for one
/// coordinate, so the cost is p^(alpha (n-1)) with a section and p^(alpha n) without.
BigInt count_mod_prime_power_exhaustive(const Form& f, const std::optional<CharacterVector>& a, std::uint64_t p,
                                        int alpha, double budget = kDefaultCountBudget);

/// #P^d(F_q).
BigInt projective_space_points(int d, std::uint64_t q);

/// point_count <= #P^d(F_q) * degree.
bool weil_bound_check(const BigInt& point_count, int dimension, const BigInt& degree, std::uint64_t q);

}  // namespace maninlab
