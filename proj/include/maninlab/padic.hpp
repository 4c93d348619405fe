#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maninlab/arith.hpp"
#include "maninlab/finite_field.hpp"
#include "maninlab/polynomial.hpp"

namespace maninlab {

enum class StratumKind { U0, U1_ab, U1_a, U_a };

// Level sets of (||x||_p, |f(x)|_p) in Q_p^n on which both local heights are constant:
//   U0          ||x|| <= 1
//   U1(a, b)    ||x|| = p^a, |f(x)| = p^(da - b), 1 <= b < a
//   U1(a)       ||x|| = p^a, |f(x)| <= p^(da - a)
//   U(a)        ||x|| = p^a, |f(x)| = p^(da)
struct StratumDescriptor {
  StratumKind kind = StratumKind::U0;
  int alpha = 0;
  int beta = 0;

  static StratumDescriptor u0() { return {}; }
  static StratumDescriptor u1(int alpha, int beta);
  static StratumDescriptor u1(int alpha);
  static StratumDescriptor u(int alpha);

  /// (e0, e1) with H_{D0,p} = p^e0 and H_{D1,p} = p^e1 on the stratum.
  std::pair<int, int> height_exponents() const;
  std::string label() const;
  friend bool operator==(const StratumDescriptor&, const StratumDescriptor&) = default;
};

/// Haar volume by exhaustive residue counting of y = p^alpha x mod p^k. A
/// precision of 0 picks the smallest modulus at which the stratum is determined.
Rational stratum_volume_direct(const Form& f, std::uint64_t p, const StratumDescriptor& stratum, int precision = 0,
                               double budget = kDefaultCountBudget);

/// Closed-form volume in terms of tau_p(f); p must be good.
Rational stratum_volume_closed(const Hypersurface& X, std::uint64_t p, const StratumDescriptor& stratum);

/// Mean of psi(t u) over u in Z_p^*.
Rational mean_value_psi(const Rational& t, std::uint64_t p);

/// vol(||x|| = 1, p^beta | f(x), p^alpha | <a, x>) from #Z_{f,a}(Z/p^beta).
Rational incidence_volume(const Hypersurface& X, const CharacterVector& a, std::uint64_t p, int alpha, int beta);
/// Same volume by residue counting mod p^alpha.
Rational incidence_volume_direct(const Form& f, const CharacterVector& a, std::uint64_t p, int alpha, int beta,
                                 double budget = kDefaultCountBudget);

/// Reduces sum_r hist[r] zeta^r (zeta a primitive p^alpha-th root of unity)
/// modulo the cyclotomic polynomial; returns the coefficients on 1..zeta^(phi-1).
std::vector<BigInt> cyclotomic_reduce(std::span<const std::int64_t> hist, std::uint64_t p, int alpha);
/// The exact value of sum_r hist[r] zeta^r when it is rational.
std::optional<Rational> cyclotomic_rational(std::span<const std::int64_t> hist, std::uint64_t p, int alpha);

struct CharacterSum {
  std::complex<double> value;
  std::optional<Rational> exact;
  double error_bound = 0.0;  // floating-point rounding budget of `value`
};

// I(alpha, beta) = integral of psi(<a, x>) over ||x|| = p^alpha, |f(x)| <= p^(d alpha - beta).
// An empty character means psi_0 = 1.
struct CharacterSumTable {
  std::uint64_t p = 0;
  int n = 0;
  int max_alpha = 0;
  std::optional<CharacterVector> a;
  std::vector<std::vector<CharacterSum>> I;  // I[alpha][beta], 1 <= alpha <= max_alpha, 0 <= beta <= alpha
};

/// One pass over y mod p^alpha per alpha. Cost ~ sum_alpha p^(n alpha).
CharacterSumTable character_sum_table(const Form& f, const std::optional<CharacterVector>& a, std::uint64_t p,
                                      int max_alpha, double budget = kDefaultCountBudget);

/// Single entry; beta may exceed alpha (modulus p^max(alpha, beta)).
CharacterSum character_sum_I(const Form& f, const std::optional<CharacterVector>& a, std::uint64_t p, int alpha,
                             int beta, double budget = kDefaultCountBudget);

struct ComplexPicard {
  std::complex<double> s0;
  std::complex<double> s1;

  bool is_integral() const;
};

// `exact` is the exact value of the evaluated expression (truncated for the
// direct sums); error_bound bounds its distance to the full transform.
struct LocalFourierValue {
  std::complex<double> value;
  std::optional<Rational> exact;
  std::uint64_t p = 0;
  ComplexPicard s;
  std::optional<CharacterVector> character;
  int truncation = -1;  // series cutoff or -1 for closed forms summed exactly
  double error_bound = 0.0;
  // Non-trivial closed form only: the value of the display as printed in the
  // source, which carries an extra 1/(p-1) on both count terms.
  std::optional<std::complex<double>> printed_value;
  bool printed_discrepancy = false;
  // Trivial closed form only: the second algebraic form of the same value.
  std::optional<std::complex<double>> alternate_form;
};

/// H_hat_{P^n,p}(s0) + tau_p (p^(s0-n) - p^(s1-n)) / ((p^(s0-n) - 1)(p^(s1-n+1) - 1)).
LocalFourierValue fourier_trivial_closed(const Hypersurface& X, std::uint64_t p, const ComplexPicard& s);

/// Stratified sum over alpha <= A with the layered counts of Z_f mod p^j; any p.
LocalFourierValue fourier_trivial_direct(const Hypersurface& X, std::uint64_t p, const ComplexPicard& s, int A);

/// Closed form with the character sums evaluated:
///   1 - p^-s0 + (p^(s1-s0) - 1) p^-s1 #Z_f(F_p)
///     - (p^(s1-s0) - 1)(1 - p^(n-s1-2)) sum_alpha p^(-alpha(s1-1)) #Z_{f,a}(Z/p^alpha).
/// Smooth sections are summed geometrically; otherwise the series stops at A
/// with the lifting-bound tail.
LocalFourierValue fourier_char_closed(const Hypersurface& X, const CharacterVector& a, std::uint64_t p,
                                      const ComplexPicard& s, int A = 8);

/// 1 + sum p^(-alpha s0) I(alpha, 0) - (p^(s1-s0) - 1) sum sum p^(-alpha s0 - beta(s1-s0)) I(alpha, beta).
LocalFourierValue fourier_char_direct(const Hypersurface& X, const CharacterSumTable& table, const ComplexPicard& s);
LocalFourierValue fourier_char_direct(const Hypersurface& X, const std::optional<CharacterVector>& a,
                                      std::uint64_t p, const ComplexPicard& s, int A,
                                      double budget = kDefaultCountBudget);

}  // namespace maninlab
