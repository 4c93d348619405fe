#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "maninlab/arith.hpp"

namespace maninlab {

struct Term {
  std::int64_t coefficient = 0;
  std::vector<int> exponents;

  friend bool operator==(const Term&, const Term&) = default;
};

// Integer-coefficient homogeneous form, stored sparsely. Terms are kept with
// distinct exponent vectors, nonzero coefficients, sorted lexicographically
// descending (x1 is the most significant variable). The zero form is allowed
// here; HomogeneousPolynomial adds the invariants of the defining datum.
class Form {
 public:
  Form(int num_variables, int degree, std::vector<Term> terms);

  int num_variables() const noexcept { return num_variables_; }
  int degree() const noexcept { return degree_; }
  std::span<const Term> terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Evaluation in any commutative ring given as a policy object with
  /// value_type, zero(), from_int(int64), add(x, y), mul(x, y).
  template <class Ring>
  typename Ring::value_type evaluate_in(const Ring& ring,
                                        std::span<const typename Ring::value_type> x) const {
    check_dimension(x.size());
    auto sum = ring.zero();
    for (const Term& t : terms_) {
      auto prod = ring.from_int(t.coefficient);
      for (int i = 0; i < num_variables_; ++i) {
        for (int e = 0; e < t.exponents[i]; ++e) prod = ring.mul(prod, x[i]);
      }
      sum = ring.add(sum, prod);
    }
    return sum;
  }

  /// Exact integer value; throws Error(Overflow) past 127 bits.
  __int128 evaluate(std::span<const std::int64_t> x) const;
  BigInt evaluate(std::span<const BigInt> x) const;
  Rational evaluate(std::span<const Rational> x) const;
  /// Value modulo m for residues x_i in [0, m).
  std::uint64_t evaluate_mod(std::span<const std::uint64_t> x, std::uint64_t m) const;

  /// Partial derivative with respect to x_{i+1} (0-based i).
  Form derivative(int i) const;
  std::vector<Form> gradient() const;

  /// Coefficients of f(x', t) as a polynomial in the last variable t, for a
  /// fixed assignment x' of the first n-1 variables modulo m; entry e holds
  /// the coefficient of t^e (size degree+1).
  std::vector<std::uint64_t> last_variable_coefficients_mod(std::span<const std::uint64_t> head,
                                                            std::uint64_t m) const;

  std::string to_string() const;

  friend bool operator==(const Form&, const Form&) = default;

 protected:
  void check_dimension(std::size_t size) const;

  int num_variables_ = 0;
  int degree_ = 0;
  std::vector<Term> terms_;
};

// The defining form f of X: n >= 3 variables, degree d >= 2, coprime
// coefficients, leading coefficient positive.
class HomogeneousPolynomial : public Form {
 public:
  /// Text syntax: terms joined by '+'/'-', each "[coeff][*]x<i>[^e]..." with
  /// implicit coefficient and exponent 1; whitespace ignored. num_variables
  /// of 0 infers n from the largest index used.
  static HomogeneousPolynomial parse(std::string_view text, int num_variables = 0);
  static HomogeneousPolynomial from_terms(int num_variables, std::vector<Term> terms);

  /// gcd of the coefficients (1 after construction; exposed for checks).
  std::int64_t content() const;

 private:
  explicit HomogeneousPolynomial(Form form) : Form(std::move(form)) {}
};

// Ring policies for Form::evaluate_in.
struct ModRing {
  using value_type = std::uint64_t;
  std::uint64_t modulus;
  value_type zero() const { return 0; }
  value_type from_int(std::int64_t c) const { return reduce_mod(c, modulus); }
  value_type add(value_type a, value_type b) const {
    const value_type s = a + b;
    return s >= modulus ? s - modulus : s;
  }
  value_type mul(value_type a, value_type b) const { return mul_mod(a, b, modulus); }
};

// F_{p^2} = F_p[t]/(t^2 - c1 t - c0) with an irreducible quadratic.
struct QuadraticExtensionField {
  struct value_type {
    std::uint64_t re = 0;  // constant part
    std::uint64_t im = 0;  // coefficient of t
    friend bool operator==(const value_type&, const value_type&) = default;
  };
  std::uint64_t p;
  std::uint64_t c0;
  std::uint64_t c1;

  static QuadraticExtensionField for_prime(std::uint64_t p);

  value_type zero() const { return {}; }
  value_type from_int(std::int64_t c) const { return {reduce_mod(c, p), 0}; }
  value_type add(value_type a, value_type b) const {
    return {(a.re + b.re) % p, (a.im + b.im) % p};
  }
  value_type mul(value_type a, value_type b) const;
};

enum class PrimeProvenance { Detected, UserDeclared, Both };

// The set S of primes where Z_f may fail to be smooth.
class BadPrimeSet {
 public:
  void insert(std::uint64_t p, PrimeProvenance provenance);
  bool contains(std::uint64_t p) const { return entries_.count(p) != 0; }
  std::vector<std::uint64_t> primes() const;
  std::optional<PrimeProvenance> provenance(std::uint64_t p) const;
  std::uint64_t search_bound() const noexcept { return search_bound_; }
  void set_search_bound(std::uint64_t bound) noexcept { search_bound_ = bound; }
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::map<std::uint64_t, PrimeProvenance> entries_;
  std::uint64_t search_bound_ = 0;
};

/// True iff f and all partials vanish at a common nonzero point over F_p
/// (extension_degree 1) or F_{p^2} (extension_degree 2).
bool has_singular_point(const Form& f, std::uint64_t p, int extension_degree);

/// Primes p <= search_bound for which Z_f mod p has a singular point over F_p
/// or F_{p^2}, united with the user-declared primes.
BadPrimeSet bad_primes(const HomogeneousPolynomial& f, std::uint64_t search_bound,
                       std::span<const std::uint64_t> extra = {});

// f together with its bad-prime set; the context object of the local modules.
struct Hypersurface {
  HomogeneousPolynomial f;
  BadPrimeSet bad;
  std::vector<Form> gradient;

  Hypersurface(HomogeneousPolynomial poly, BadPrimeSet bad_set);
  static Hypersurface with_detected_primes(HomogeneousPolynomial poly, std::uint64_t search_bound = 50,
                                           std::span<const std::uint64_t> extra = {});

  int n() const noexcept { return f.num_variables(); }
  int d() const noexcept { return f.degree(); }
  bool is_good(std::uint64_t p) const { return !bad.contains(p); }
};

}  // namespace maninlab
