// Acceptance criteria AC1-AC11. One PASS/FAIL line per criterion; tolerances are fixed here.
// Usage: acceptance [--only ACk]...
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "maninlab/cache.hpp"
#include "maninlab/constants.hpp"
#include "maninlab/enumeration.hpp"
#include "maninlab/finite_field.hpp"
#include "maninlab/heights.hpp"
#include "maninlab/maninlab.h"
#include "maninlab/padic.hpp"
#include "maninlab/verification.hpp"

using namespace maninlab;

namespace {

// Pinned tolerances.
constexpr double kCharacterSumTol = 1e-9;       // AC4
constexpr double kEpsilon = 0.5;                // AC8
constexpr double kRatioLow = 0.7;               // AC10
constexpr double kRatioHigh = 1.3;              // AC10
constexpr std::uint64_t kPMax = 10000;          // AC10
constexpr double kBudget = kDefaultCountBudget;

struct Outcome {
  bool passed = false;
  std::string detail;
};

const Hypersurface& reference() {
  static const Hypersurface X = Hypersurface::with_detected_primes(HomogeneousPolynomial::parse("x1^2+x2^2+x3^2"));
  return X;
}

const Hypersurface& secondary() {
  static const Hypersurface X =
      Hypersurface::with_detected_primes(HomogeneousPolynomial::parse("x1^2+x2^2+x3^2+x4^2"));
  return X;
}

ComplexPicard real_s(double s0, double s1) { return {{s0, 0.0}, {s1, 0.0}}; }

std::string fmt(double x) { return format_real(x); }

// Largest alpha with p^(n alpha) residues within the count budget.
int affordable_alpha(std::uint64_t p, int n, int cap) {
  int a = 0;
  while (a < cap && std::pow(static_cast<double>(p), n * (a + 1)) <= kBudget) ++a;
  return a;
}

Outcome ac1() {
  const Hypersurface& X = reference();
  const std::vector<StratumDescriptor> strata = {StratumDescriptor::u0(), StratumDescriptor::u1(1),
                                                 StratumDescriptor::u1(2, 1), StratumDescriptor::u(1),
                                                 StratumDescriptor::u(2)};
  int checked = 0;
  std::string first_bad;
  for (std::uint64_t p : {3, 5, 7}) {
    for (const StratumDescriptor& st : strata) {
      const Rational direct = stratum_volume_direct(X.f, p, st);
      const Rational closed = stratum_volume_closed(X, p, st);
      ++checked;
      if (direct != closed && first_bad.empty()) {
        first_bad = "p=" + std::to_string(p) + " " + st.label() + ": direct " + to_string(direct) + " closed " +
                    to_string(closed);
      }
    }
  }
  if (!first_bad.empty()) return {false, first_bad};
  return {true, std::to_string(checked) + " exact rational equalities (p in {3,5,7}, U0 U1(1) U1(2,1) U(1) U(2))"};
}

Outcome ac2() {
  int checked = 0;
  std::string detail;
  for (const Hypersurface* X : {&reference(), &secondary()}) {
    const int n = X->n();
    for (std::uint64_t p : {3, 5, 7}) {
      const BigInt zp(count_projective_hypersurface(X->f, p, kBudget));
      const BigInt predicted = BigInt(checked_pow(p, static_cast<unsigned>(n - 2))) * zp;
      const BigInt exhaustive = count_mod_prime_power_exhaustive(X->f, std::nullopt, p, 2, kBudget);
      ++checked;
      if (exhaustive != predicted) {
        return {false, "n=" + std::to_string(n) + " p=" + std::to_string(p) + ": #Z(Z/p^2)=" + exhaustive.str() +
                           " but p^(n-2) #Z(F_p)=" + predicted.str()};
      }
      if (p == 7) detail += "n=" + std::to_string(n) + " p=7: " + exhaustive.str() + "; ";
    }
  }
  return {true, std::to_string(checked) + " exhaustive counts mod p^2 equal p^(n-2) #Z_f(F_p) (" + detail +
                    "both instances)"};
}

// Exact mean of psi(t u) over u in (Z/p^k)^*, with the character values reduced in Q(zeta_{p^k}).
Rational mean_value_exact(const Rational& t, std::uint64_t p) {
  const BigInt num = boost::multiprecision::numerator(t), den = boost::multiprecision::denominator(t);
  if (num == 0) return 1;
  const int v = valuation(num, p) - valuation(den, p);
  if (v >= 0) return 1;
  const int k = -v;
  const std::uint64_t m = checked_pow(p, static_cast<unsigned>(k));
  BigInt w = den;
  for (int i = 0; i < k; ++i) w /= p;
  const std::uint64_t c = mul_mod(static_cast<std::uint64_t>(((num % m) + m) % m),
                                  inv_mod(static_cast<std::uint64_t>(w % m), m), m);
  std::vector<std::int64_t> hist(m, 0);
  for (std::uint64_t u = 1; u < m; ++u)
    if (u % p) ++hist[mul_mod(c, u, m)];
  return *cyclotomic_rational(hist, p, k) / Rational(m - m / p);
}

// Same mean in floating point: exp(2 pi i {t u}_p) summed over units.
double mean_value_numeric(const Rational& t, std::uint64_t p) {
  const BigInt num = boost::multiprecision::numerator(t), den = boost::multiprecision::denominator(t);
  if (num == 0) return 1.0;
  const int v = valuation(num, p) - valuation(den, p);
  if (v >= 0) return 1.0;
  const std::uint64_t m = checked_pow(p, static_cast<unsigned>(-v));
  BigInt w = den;
  for (int i = 0; i < -v; ++i) w /= p;
  const std::uint64_t c = mul_mod(static_cast<std::uint64_t>(((num % m) + m) % m),
                                  inv_mod(static_cast<std::uint64_t>(w % m), m), m);
  std::complex<double> sum = 0;
  std::uint64_t units = 0;
  for (std::uint64_t u = 1; u < m; ++u) {
    if (u % p == 0) continue;
    ++units;
    sum += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(mul_mod(c, u, m)) / static_cast<double>(m));
  }
  return sum.real() / static_cast<double>(units);
}

Outcome ac3() {
  int checked = 0;
  int cases[3] = {0, 0, 0};
  for (std::uint64_t p : {2, 3, 5, 7, 11}) {
    const std::int64_t q = static_cast<std::int64_t>(p);
    const Rational half_unit = p == 2 ? Rational(3) : Rational(1, 2);  // a p-adic unit that is not an integer
    const std::vector<Rational> ts = {0,
                                      5 * q,
                                      half_unit,
                                      Rational(1, q),
                                      Rational(q - 1, q),
                                      half_unit / q,
                                      Rational(7, q * q),
                                      Rational(1, q * q * q),
                                      Rational(-2 * q - 1, q * q * q) * half_unit};
    for (const Rational& t : ts) {
      const Rational closed = mean_value_psi(t, p);
      const Rational exact = mean_value_exact(t, p);
      const double numeric = mean_value_numeric(t, p);
      const BigInt num = boost::multiprecision::numerator(t), den = boost::multiprecision::denominator(t);
      const int v = num == 0 ? 1 : valuation(num, p) - valuation(den, p);
      ++cases[v >= 0 ? 0 : v == -1 ? 1 : 2];
      ++checked;
      if (closed != exact || std::abs(numeric - to_double(exact)) > 1e-12) {
        return {false, "p=" + std::to_string(p) + " t=" + to_string(t) + ": lemma " + to_string(closed) +
                           ", exact oracle " + to_string(exact) + ", numeric " + fmt(numeric)};
      }
    }
  }
  return {true, std::to_string(checked) + " exact agreements, p in {2,3,5,7,11}; cases v>=0: " +
                    std::to_string(cases[0]) + ", v=-1: " + std::to_string(cases[1]) +
                    ", v<=-2: " + std::to_string(cases[2])};
}

Outcome ac4() {
  const Hypersurface& X = reference();
  const std::vector<CharacterVector> chars = {CharacterVector::unit(3, 0), CharacterVector({1, 1, 0}),
                                              CharacterVector({1, 2, 3})};
  double worst = 0.0;
  int checked = 0;
  for (std::uint64_t p : {3, 5}) {
    for (const CharacterVector& a : chars) {
      const CharacterSumTable t = character_sum_table(X.f, a, p, 3, kBudget);
      for (int alpha = 1; alpha <= 3; ++alpha) {
        for (int beta = 0; beta < alpha; ++beta) {
          const double expected = alpha == 1 && beta == 0 ? -1.0 : 0.0;
          worst = std::max(worst, std::abs(t.I[alpha][beta].value - expected));
          ++checked;
        }
      }
    }
  }
  return {worst <= kCharacterSumTol, std::to_string(checked) + " sums I(a,b), a<=3; max |I - expected| = " +
                                         fmt(worst) + " (tol " + fmt(kCharacterSumTol) + ")"};
}

Outcome ac5() {
  const Hypersurface& X = reference();
  double worst_ratio = 0.0;
  int checked = 0;
  for (std::uint64_t p : {3, 5, 7}) {
    for (const ComplexPicard& s : {real_s(4, 3), real_s(5, 4), real_s(4.5, 3.5)}) {
      const LocalFourierValue closed = fourier_trivial_closed(X, p, s);
      const LocalFourierValue direct = fourier_trivial_direct(X, p, s, 12);
      const double diff = std::abs(closed.value - direct.value);
      const double bound = direct.error_bound + closed.error_bound;
      worst_ratio = std::max(worst_ratio, bound > 0 ? diff / bound : (diff > 0 ? INFINITY : 0.0));
      ++checked;
    }
  }
  const LocalFourierValue v = fourier_trivial_closed(X, 3, real_s(4, 3));
  const bool exact = v.exact && *v.exact == Rational(52, 27);
  return {worst_ratio <= 1.0 && exact,
          std::to_string(checked) + " closed vs direct (A=12): max |diff|/tail bound = " + fmt(worst_ratio) +
              "; closed(p=3, s=(4,3)) = " + (v.exact ? to_string(*v.exact) : std::string("inexact"))};
}

// The identity grid: a in {+-e_i, (1,1,0), (1,2,3)}, p in {3,5,7}, s in three points of the region.
struct CharGridResult {
  int total = 0;
  int printed_fail = 0;
  int corrected_fail = 0;
  double printed_worst = 0.0;
  double corrected_worst_ratio = 0.0;
  std::string example;
};

const CharGridResult& character_grid() {
  static const CharGridResult r = [] {
    CharGridResult out;
    const Hypersurface& X = reference();
    const std::vector<ComplexPicard> grid = {real_s(4.5, 3.5), real_s(5, 3), {{5.5, 1.0}, {4.0, -0.5}}};
    for (std::uint64_t p : {3, 5, 7}) {
      const int A = affordable_alpha(p, 3, 5);
      for (const CharacterVector& a : default_characters(3)) {
        if (a.in_support(p)) continue;
        const CharacterSumTable table = character_sum_table(X.f, a, p, A, kBudget);
        for (const ComplexPicard& s : grid) {
          const LocalFourierValue closed = fourier_char_closed(X, a, p, s);
          const LocalFourierValue direct = fourier_char_direct(X, table, s);
          const double tol = closed.error_bound + direct.error_bound;
          const double dc = std::abs(closed.value - direct.value);
          const double dp = std::abs(*closed.printed_value - direct.value);
          ++out.total;
          out.corrected_worst_ratio = std::max(out.corrected_worst_ratio, dc / tol);
          if (dc > tol) ++out.corrected_fail;
          if (dp > tol) {
            if (out.printed_fail++ == 0) {
              std::ostringstream ex;
              ex << "e.g. p=" << p << " a=(" << a.a[0] << "," << a.a[1] << "," << a.a[2] << ") s=("
                 << fmt(s.s0.real()) << "," << fmt(s.s1.real()) << "): printed " << fmt(closed.printed_value->real())
                 << ", direct " << fmt(direct.value.real()) << ", bound " << fmt(tol);
              out.example = ex.str();
            }
          }
          out.printed_worst = std::max(out.printed_worst, dp);
        }
      }
    }
    return out;
  }();
  return r;
}

Outcome ac6() {
  const CharGridResult& r = character_grid();
  return {r.printed_fail == 0,
          "printed display vs direct: " + std::to_string(r.total - r.printed_fail) + "/" + std::to_string(r.total) +
              " within bounds, max |diff| = " + fmt(r.printed_worst) + (r.example.empty() ? "" : "; " + r.example) +
              " (constant-level discrepancy: extra 1/(p-1) on both count terms)"};
}

Outcome ac6_corrected() {
  const CharGridResult& r = character_grid();
  return {r.corrected_fail == 0, "corrected constant vs direct: " + std::to_string(r.total - r.corrected_fail) +
                                     "/" + std::to_string(r.total) + " within bounds, max |diff|/bound = " +
                                     fmt(r.corrected_worst_ratio)};
}

Outcome ac7() {
  VerificationOptions o;
  o.character_norm = 5;
  o.bounds_max_prime = 13;
  const VerificationReport r = verify_bounds(reference(), o);
  int gating = 0, passed = 0;
  bool exhaustive = true;
  for (const auto& c : r.checks) {
    if (!c.gating) continue;
    ++gating;
    passed += c.passed;
    for (const auto& [k, v] : c.inputs)
      if (k == "counts" && v != "exhaustive") exhaustive = false;
  }
  std::string failed;
  for (const auto& c : r.checks)
    if (c.gating && !c.passed && failed.empty()) failed = "; first failure: " + c.name + " " + c.actual;
  return {r.passed() && exhaustive && gating > 0,
          std::to_string(passed) + "/" + std::to_string(gating) +
              " bound checks pass (p<=13 good, |a|_inf<=5, alpha<=2, C=d(d-1)^(n-1)=2, counts " +
              (exhaustive ? "exhaustive" : "NOT exhaustive") + ")" + failed};
}

Outcome ac8() {
  const Hypersurface& X = reference();
  const int n = X.n();
  const std::vector<CharacterVector> chars = {CharacterVector::unit(3, 0), CharacterVector({1, 2, 3})};
  // Re s0 > n + eps, Re s1 > n - 1 + eps, with and without imaginary parts.
  std::vector<ComplexPicard> grid;
  for (double s0 : {n + kEpsilon + 0.1, n + 1.0, n + 2.0})
    for (double s1 : {n - 1 + kEpsilon + 0.1, double(n), n + 1.0})
      for (auto [t0, t1] : {std::pair{0.0, 0.0}, std::pair{3.0, -2.0}}) grid.push_back({{s0, t0}, {s1, t1}});

  std::map<std::uint64_t, double> scaled;  // max |H_hat - 1| p^(1+eps) per prime
  for (std::uint64_t p : primes_up_to(50)) {
    double worst = 0.0;
    for (const CharacterVector& a : chars) {
      if (a.in_support(p)) continue;
      std::optional<CharacterSumTable> table;
      if (!X.is_good(p)) table = character_sum_table(X.f, a, p, affordable_alpha(p, n, 8), kBudget);
      for (const ComplexPicard& s : grid) {
        const LocalFourierValue v = X.is_good(p) ? fourier_char_closed(X, a, p, s) : fourier_char_direct(X, *table, s);
        const double dev = std::abs(v.value - 1.0) + v.error_bound;
        worst = std::max(worst, dev * std::pow(static_cast<double>(p), 1.0 + kEpsilon));
      }
    }
    scaled[p] = worst;
  }
  double C = 0.0, C_low = 0.0, upper = 0.0;
  for (const auto& [p, v] : scaled) {
    C = std::max(C, v);
    if (p <= 23) C_low = std::max(C_low, v);
    else upper = std::max(upper, v);
  }
  const bool finite = std::isfinite(C) && C > 0.0;
  return {finite && upper <= C_low,
          "fitted C = " + fmt(C) + " over p<=50, a in {e1,(1,2,3)}, " + std::to_string(grid.size()) +
              " points of the region, eps=0.5; C from p<=23 is " + fmt(C_low) + " and bounds p in (23,50] (max " +
              fmt(upper) + ")"};
}

// Exact H^2 for s = (n+1, n) from the per-place definitions; x = a/b primitive.
Rational height_squared(const HomogeneousPolynomial& f, const std::vector<std::int64_t>& a, std::int64_t b) {
  const int n = f.num_variables(), d = f.degree();
  const __int128 fa = f.evaluate(std::span<const std::int64_t>(a));
  // Finite places: H_{D1,p} = p^min(v(b), v(f(a))), H_{D0,p} = p^v(b) / H_{D1,p}.
  Rational finite = 1;
  if (b > 1) {
    for (std::uint64_t p : prime_divisors(static_cast<std::uint64_t>(b))) {
      const int m = valuation(b, p);
      const int e1 = fa == 0 ? m : std::min(m, valuation(fa, p));
      finite *= rational_power(p, (n + 1) * (m - e1) + n * e1);
    }
  }
  // Archimedean: Q = 1 + |x|^2, H_{D1}^-2 = 1/Q + f(x)^2/Q^d, H_{D0} = sqrt(Q) H_{D1}^-1, so
  // H^2 = Q^(n+1) H_{D1}^-2.
  Rational Q = 1;
  for (std::int64_t ai : a) Q += Rational(ai * ai, b * b);
  const Rational fx = Rational(to_bigint(fa), BigInt(b)) / rational_pow(Rational(b), d - 1);
  const Rational inv_h1_sq = 1 / Q + fx * fx / rational_pow(Q, d);
  return finite * finite * rational_pow(Q, n + 1) * inv_h1_sq;
}

Outcome ac9() {
  const HomogeneousPolynomial& f = reference().f;
  const int n = f.num_variables();
  const PicardParameter anti = PicardParameter::anticanonical(n);
  std::string detail;
  bool ok = true;
  for (double B : {1.0, 3.5, 10.0, 100.0}) {
    // Superset: H >= b^n from the finite places and H >= |a_i / b|^n from the archimedean one.
    const Rational B2 = exact_rational(B) * exact_rational(B);
    const double root = std::pow(B, 1.0 / n) * (1 + 1e-12);
    std::set<std::vector<std::int64_t>> oracle;
    std::vector<std::int64_t> a(n);
    for (std::int64_t b = 1; b <= static_cast<std::int64_t>(std::floor(root)); ++b) {
      const std::int64_t r = static_cast<std::int64_t>(std::floor(b * root));
      std::fill(a.begin(), a.end(), -r);
      for (;;) {
        std::vector<std::int64_t> v = a;
        v.push_back(b);
        if (gcd_all(v) == 1 && height_squared(f, a, b) <= B2) oracle.insert(v);
        int i = n - 1;
        while (i >= 0 && a[i] == r) a[i--] = -r;
        if (i < 0) break;
        ++a[i];
      }
    }
    const std::uint64_t N = count_bounded(f, anti, B).N;
    std::set<std::vector<std::int64_t>> listed;
    for (const BoundedPoint& p : bounded_points(f, anti, B)) {
      std::vector<std::int64_t> v = p.a;
      v.push_back(p.b);
      listed.insert(v);
    }
    const bool match = N == oracle.size() && listed == oracle;
    ok = ok && match;
    detail += "N(" + fmt(B) + ")=" + std::to_string(N) + (match ? "" : " vs oracle " + std::to_string(oracle.size())) +
              " ";
  }
  const bool anchors = detail.rfind("N(1)=1 N(3.5)=7 ", 0) == 0;
  return {ok && anchors, detail + "(point sets equal to the exact box oracle)"};
}

Outcome ac10() {
  const Hypersurface& X = reference();
  const PicardParameter anti = PicardParameter::anticanonical(X.n());
  const auto records = scan(X.f, anti, parse_geometric_grid("100:100000:25"));
  const FitResult fit = fit_manin(records);
  const TamagawaBreakdown t = tamagawa_number(X, kPMax);
  const double pred = expected_leading_constant(t);
  const double ratio = fit.theta_hat / pred;
  // Decade windows [10^k, 10^(k+1)].
  std::vector<double> window;
  for (double lo : {1e2, 1e3, 1e4}) {
    std::vector<CountRecord> w;
    for (const CountRecord& r : records)
      if (r.B >= lo && r.B <= 10 * lo) w.push_back(r);
    window.push_back(fit_manin(w).theta_hat / pred);
  }
  const bool toward = std::abs(window.back() - 1.0) < std::abs(window.front() - 1.0);
  const bool in_range = ratio >= kRatioLow && ratio <= kRatioHigh;
  std::ostringstream d;
  d << "theta_hat = " << fmt(fit.theta_hat) << ", theta_pred = tau/12 = " << fmt(pred) << " (tau = " << fmt(t.tau)
    << ", P_max = " << kPMax << "), ratio = " << fmt(ratio) << " in [" << kRatioLow << ", " << kRatioHigh
    << "]; decade-window ratios " << fmt(window[0]) << " -> " << fmt(window[1]) << " -> " << fmt(window[2])
    << "; N(1e5) = " << records.back().N;
  return {in_range && toward, d.str()};
}

// Every artifact through the C API with the cache off.
std::map<std::string, std::string> artifacts(int threads) {
  std::map<std::string, std::string> out;
  ml_experiment* e = nullptr;
  auto check = [](ml_status st, const char* what) {
    if (st != ML_OK) throw std::runtime_error(std::string(what) + ": " + ml_last_error());
  };
  check(ml_experiment_from_polynomial("x1^2+x2^2+x3^2", &e), "experiment");
  auto set = [&](const char* k, const std::string& v) { check(ml_experiment_set(e, k, v.c_str()), k); };
  set("cache.enabled", "false");
  set("threads", std::to_string(threads));
  set("primes", "[3, 5, 7]");
  set("P_max", "2000");
  set("seed", "20240607");
  auto take = [&](const std::string& name, char* text) {
    out[name] = text ? text : "";
    ml_string_free(text);
  };
  char* text = nullptr;
  int passed = 0;
  for (const char* format : {"json", "csv"}) {
    set("format", format);
    check(ml_count_report(e, 1000.0, &text, nullptr), "count");
    take(std::string("count.") + format, text);
    check(ml_ff_count(e, &text), "ff-count");
    take(std::string("ff-count.") + format, text);
  }
  check(ml_scan(e, &text, nullptr), "scan");
  const std::string scan_csv = text;
  take("scan.csv", text);
  check(ml_fit(scan_csv.c_str(), &text), "fit");
  take("fit.json", text);
  check(ml_points(e, 300.0, &text), "points");
  take("points.csv", text);
  check(ml_theta(e, &text, nullptr), "theta");
  take("theta.json", text);
  for (const char* suite : {"volumes", "fourier-trivial", "hensel"}) {
    check(ml_verify(e, suite, &passed, &text, nullptr), suite);
    take(std::string("verify-") + suite + ".json", text);
  }
  ml_experiment_free(e);
  return out;
}

Outcome ac11() {
  const auto one = artifacts(1);
  const auto eight = artifacts(8);
  const auto again = artifacts(8);
  std::string diff;
  for (const auto& [name, text] : one) {
    if (eight.at(name) != text || again.at(name) != text) diff += name + " ";
  }
  const std::string theta_hash = sha256_hex(one.at("theta.json")).substr(0, 12);
  return {diff.empty(), std::to_string(one.size()) + " artifacts bit-identical at threads 1, 8, 8 (theta.json sha256 " +
                            theta_hash + "...)" + (diff.empty() ? "" : "; differing: " + diff)};
}

struct Criterion {
  std::string id;
  std::string title;
  std::function<Outcome()> run;
  std::function<Outcome()> companion;  // reported alongside, never changes the verdict
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {"AC1", "volume identities", ac1, nullptr},
      {"AC2", "Hensel counts", ac2, nullptr},
      {"AC3", "mean-value lemma", ac3, nullptr},
      {"AC4", "character-sum structure", ac4, nullptr},
      {"AC5", "trivial-character Fourier identity", ac5, nullptr},
      {"AC6", "non-trivial-character Fourier identity", ac6, ac6_corrected},
      {"AC7", "lifting, transversality and Weil bounds", ac7, nullptr},
      {"AC8", "uniform local bound", ac8, nullptr},
      {"AC9", "counting ground truth", ac9, nullptr},
      {"AC10", "Manin-Peyre asymptotic", ac10, nullptr},
      {"AC11", "determinism", ac11, nullptr},
  };
  std::set<std::string> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only.insert(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--only ACk]...\n";
      return 2;
    }
  }
  int failed = 0, ran = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << c.id << ' ' << (o.passed ? "PASS" : "FAIL") << " [" << c.title << "] " << o.detail << " ("
              << fmt(std::round(secs * 10) / 10) << " s)" << std::endl;
    if (!o.passed) ++failed;
    if (c.companion) {
      Outcome k;
      try {
        k = c.companion();
      } catch (const std::exception& e) {
        k = {false, std::string("exception: ") + e.what()};
      }
      std::cout << "  companion " << (k.passed ? "PASS" : "FAIL") << ": " << k.detail << std::endl;
    }
  }
  if (ran == 0) {
    std::cerr << "no criterion matched\n";
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
