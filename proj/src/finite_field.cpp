#include "maninlab/finite_field.hpp"

#include <algorithm>
#include <map>

#include "maninlab/errors.hpp"

namespace maninlab {

CharacterVector::CharacterVector(std::vector<std::int64_t> coords) : a(std::move(coords)) {
  if (a.empty() || std::all_of(a.begin(), a.end(), [](std::int64_t x) { return x == 0; })) {
    fail(ErrorCode::InvalidArgument, "character vector must be nonzero");
  }
}

CharacterVector CharacterVector::unit(int n, int i) {
  std::vector<std::int64_t> v(n, 0);
  v.at(i) = 1;
  return CharacterVector(std::move(v));
}

bool CharacterVector::in_support(std::uint64_t p) const {
  return std::all_of(a.begin(), a.end(), [p](std::int64_t x) { return reduce_mod(x, p) == 0; });
}

namespace {

// Odometer over [0, m)^k; returns false after the last vector.
bool next_vector(std::vector<std::uint64_t>& v, std::uint64_t m) {
  for (auto& x : v) {
    if (++x < m) return true;
    x = 0;
  }
  return false;
}

// Calls visit(y) for the representatives of P^{n-1}(F_p) whose first nonzero entry is 1.
template <class Visit>
void for_each_projective_point(int n, std::uint64_t p, Visit&& visit) {
  std::vector<std::uint64_t> y(n);
  for (int lead = 0; lead < n; ++lead) {
    std::fill(y.begin(), y.end(), 0);
    y[lead] = 1;
    std::vector<std::uint64_t> tail(n - lead - 1, 0);
    do {
      for (int i = lead + 1; i < n; ++i) y[i] = tail[i - lead - 1];
      visit(std::span<const std::uint64_t>(y));
    } while (!tail.empty() && next_vector(tail, p));
  }
}

double power_estimate(std::uint64_t p, int e) { return std::pow(static_cast<double>(p), e); }

void check_budget(double cost, double budget, const char* what) {
  if (cost > budget) {
    fail(ErrorCode::BudgetExceeded, std::string(what) + ": about " + format_real(cost) +
                                        " evaluations exceed the budget of " + format_real(budget) +
                                        "; raise the count budget");
  }
}

// Dense polynomials over F_p, low degree first.
using Poly = std::vector<std::uint64_t>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mod(Poly a, const Poly& m, std::uint64_t p) {
  trim(a);
  const std::uint64_t inv_lead = inv_mod(m.back(), p);
  while (a.size() >= m.size()) {
    const std::uint64_t c = mul_mod(a.back(), inv_lead, p);
    const std::size_t shift = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i) {
      a[shift + i] = (a[shift + i] + p - mul_mod(c, m[i], p)) % p;
    }
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + mul_mod(a[i], b[j], p)) % p;
  }
  return poly_mod(std::move(c), m, p);
}

std::size_t poly_gcd_degree(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a.empty() ? 0 : a.size() - 1;
}

// Number of distinct roots in F_p of h; p when h vanishes identically.
std::uint64_t count_roots(Poly h, std::uint64_t p) {
  trim(h);
  if (h.empty()) return p;
  if (h.size() == 1) return 0;
  // t^p mod h by square and multiply
  Poly result{1}, base = poly_mod(Poly{0, 1}, h, p);
  for (std::uint64_t e = p; e > 0; e >>= 1) {
    if (e & 1) result = poly_mulmod(result, base, h, p);
    base = poly_mulmod(base, base, h, p);
  }
  result.resize(std::max<std::size_t>(result.size(), 2), 0);
  result[1] = (result[1] + p - 1) % p;
  return poly_gcd_degree(h, result, p);
}

std::vector<std::uint64_t> residues(std::span<const std::int64_t> v, std::uint64_t m) {
  std::vector<std::uint64_t> out;
  for (std::int64_t x : v) out.push_back(reduce_mod(x, m));
  return out;
}

// V in GL_n(Z) with V a = e_1 (a primitive), by Euclid on the entries.
std::vector<std::vector<std::int64_t>> unimodular_completion(std::vector<std::int64_t> w) {
  const int n = static_cast<int>(w.size());
  std::vector<std::vector<std::int64_t>> V(n, std::vector<std::int64_t>(n, 0));
  for (int i = 0; i < n; ++i) V[i][i] = 1;
  for (;;) {
    int pivot = -1;
    for (int i = 0; i < n; ++i) {
      if (w[i] != 0 && (pivot < 0 || std::llabs(w[i]) < std::llabs(w[pivot]))) pivot = i;
    }
    bool done = true;
    for (int k = 0; k < n; ++k) {
      if (k == pivot || w[k] == 0) continue;
      done = false;
      const std::int64_t q = w[k] / w[pivot];
      w[k] -= q * w[pivot];
      for (int j = 0; j < n; ++j) V[k][j] -= q * V[pivot][j];
    }
    if (done) {
      if (std::llabs(w[pivot]) != 1) fail(ErrorCode::InvalidArgument, "character vector is not primitive");
      std::swap(w[0], w[pivot]);
      std::swap(V[0], V[pivot]);
      if (w[0] < 0) {
        for (auto& x : V[0]) x = -x;
      }
      return V;
    }
  }
}

using SparsePoly = std::map<std::vector<int>, BigInt>;

SparsePoly multiply(const SparsePoly& x, const SparsePoly& y) {
  SparsePoly out;
  for (const auto& [ex, cx] : x) {
    for (const auto& [ey, cy] : y) {
      std::vector<int> e(ex.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ex[i] + ey[i];
      out[e] += cx * cy;
    }
  }
  return out;
}

}  // namespace

std::uint64_t count_projective_hypersurface(const Form& f, std::uint64_t p, double budget) {
  if (!is_prime(p)) fail(ErrorCode::InvalidArgument, "p must be prime");
  const int n = f.num_variables();
  check_budget(power_estimate(p, n), budget, "count_projective_hypersurface");
  std::vector<std::uint64_t> y(n, 0);
  std::uint64_t zeros = 0;
  while (next_vector(y, p)) {  // skips the zero vector
    if (f.evaluate_mod(y, p) == 0) ++zeros;
  }
  return zeros / (p - 1);
}

std::uint64_t count_projective_fibered(const Form& f, std::uint64_t p) {
  if (!is_prime(p)) fail(ErrorCode::InvalidArgument, "p must be prime");
  const int n = f.num_variables();
  std::uint64_t total = 0;
  // the point (0 : ... : 0 : 1)
  std::vector<std::uint64_t> head(n - 1, 0);
  if (f.last_variable_coefficients_mod(head, p).back() == 0) ++total;
  // Fibers of degree <= 2 at odd p are settled by a table of squares.
  std::vector<char> square;
  if (p > 2 && p <= (1u << 26)) {
    square.assign(p, 0);
    for (std::uint64_t x = 0; x < p; ++x) square[mul_mod(x, x, p)] = 1;
  }
  for_each_projective_point(n - 1, p, [&](std::span<const std::uint64_t> y) {
    Poly h = f.last_variable_coefficients_mod(y, p);
    trim(h);
    if (!square.empty() && h.size() == 3) {
      const std::uint64_t disc = (mul_mod(h[1], h[1], p) + p - mul_mod(4 % p, mul_mod(h[2], h[0], p), p)) % p;
      total += disc == 0 ? 1 : (square[disc] ? 2 : 0);
    } else if (h.size() == 2) {
      total += 1;
    } else {
      total += count_roots(std::move(h), p);
    }
  });
  return total;
}

Rational tau_p(const Form& f, std::uint64_t p) {
  const int n = f.num_variables();
  return Rational(p - 1, p) * Rational(count_projective_fibered(f, p)) * rational_power(p, 2 - n);
}

SectionCount count_section(const Hypersurface& X, const CharacterVector& a, std::uint64_t p) {
  if (!is_prime(p)) fail(ErrorCode::InvalidArgument, "p must be prime");
  if (a.dimension() != X.n()) fail(ErrorCode::DimensionMismatch, "character vector has the wrong length");
  if (!X.is_good(p)) fail(ErrorCode::BadPrime, "p = " + std::to_string(p) + " is in the bad-prime set S");
  if (a.in_support(p)) fail(ErrorCode::BadPrime, "p = " + std::to_string(p) + " divides the character vector");
  const int n = X.n();
  check_budget(power_estimate(p, n - 1), kDefaultCountBudget, "count_section");
  const std::vector<std::uint64_t> ar = residues(a.a, p);
  SectionCount out;
  out.p = p;
  std::vector<std::uint64_t> grad(n);
  for_each_projective_point(n, p, [&](std::span<const std::uint64_t> y) {
    std::uint64_t dot = 0;
    for (int i = 0; i < n; ++i) dot = (dot + mul_mod(ar[i], y[i], p)) % p;
    if (dot != 0 || X.f.evaluate_mod(y, p) != 0) return;
    ++out.total;
    for (int i = 0; i < n; ++i) grad[i] = X.gradient[i].evaluate_mod(y, p);
    bool rank_two = false;
    for (int i = 0; i < n && !rank_two; ++i) {
      for (int j = i + 1; j < n && !rank_two; ++j) {
        rank_two = (mul_mod(grad[i], ar[j], p) + p - mul_mod(grad[j], ar[i], p)) % p != 0;
      }
    }
    if (rank_two) ++out.transverse;
    else ++out.nontransverse;
  });
  return out;
}

BigInt ValuationProfile::projective(int j) const {
  if (j < 1 || j >= static_cast<int>(affine.size())) fail(ErrorCode::InvalidArgument, "level out of profile range");
  const BigInt units = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(j - 1)) * (p - 1);
  if (affine[j] % units != 0) fail(ErrorCode::InvalidArgument, "affine count not divisible by the unit group");
  return affine[j] / units;
}

Rational ValuationProfile::volume(int j) const {
  if (j == 0) return 1 - rational_power(p, -n);
  if (j < 1 || j >= static_cast<int>(affine.size())) fail(ErrorCode::InvalidArgument, "level out of profile range");
  return Rational(affine[j]) * rational_power(p, -n * j);
}

ValuationProfile valuation_profile(const Form& g, std::uint64_t p, int levels, double budget) {
  if (!is_prime(p)) fail(ErrorCode::InvalidArgument, "p must be prime");
  if (levels < 1) fail(ErrorCode::InvalidArgument, "profile needs at least one level");
  const int n = g.num_variables();
  const std::vector<Form> grad = g.gradient();
  check_budget(power_estimate(p, n - 1), budget, "valuation_profile");

  ValuationProfile out;
  out.p = p;
  out.n = n;
  out.affine.assign(levels + 1, 0);
  out.stable = true;
  out.geometric_from = 1;
  double work = 0;

  const BigInt bp(p);
  auto ppow = [&](int e) { return boost::multiprecision::pow(bp, static_cast<unsigned>(e)); };

  // Closed-form descendants of a class y mod p^k with delta = v(grad g(y)), k >= 2 delta + 1.
  auto extend_stable = [&](int k, int delta, int vg) {
    for (int m = 1; k + m <= levels; ++m) {
      if (m <= delta) {
        if (vg >= k + m) out.affine[k + m] += ppow(n * m);
      } else if (vg >= k + delta) {
        out.affine[k + m] += ppow((n - 1) * m + delta);
      }
    }
    out.geometric_from = std::max(out.geometric_from, k + delta);
  };

  auto process = [&](auto&& self, const std::vector<BigInt>& y, int k) -> void {
    out.affine[k] += 1;
    const BigInt pk = ppow(k);
    int delta = k;  // "at least k" when every partial vanishes mod p^k
    for (const Form& gi : grad) {
      const BigInt v = gi.evaluate(std::span<const BigInt>(y));
      if (v % pk != 0) delta = std::min(delta, valuation(v, p));
    }
    if (delta < k && k >= 2 * delta + 1) {
      const BigInt gv = g.evaluate(std::span<const BigInt>(y));
      const int vg = gv == 0 ? levels + delta + 1 : valuation(gv, p);
      extend_stable(k, delta, vg);
      return;
    }
    if (k == levels) {
      out.stable = false;
      return;
    }
    work += power_estimate(p, n);
    check_budget(work, budget, "valuation_profile lifting");
    const BigInt pk1 = pk * p;
    std::vector<std::uint64_t> t(n, 0);
    std::vector<BigInt> z(n);
    do {
      for (int i = 0; i < n; ++i) z[i] = y[i] + pk * t[i];
      if (g.evaluate(std::span<const BigInt>(z)) % pk1 == 0) self(self, z, k + 1);
    } while (next_vector(t, p));
  };

  std::vector<std::uint64_t> gm(n);
  for_each_projective_point(n, p, [&](std::span<const std::uint64_t> y) {
    if (g.evaluate_mod(y, p) != 0) return;
    bool smooth = false;
    for (int i = 0; i < n && !smooth; ++i) smooth = grad[i].evaluate_mod(y, p) != 0;
    if (smooth) {
      out.affine[1] += 1;
      extend_stable(1, 0, 1);
      return;
    }
    std::vector<BigInt> yb(y.begin(), y.end());
    process(process, yb, 1);
  });
  for (auto& c : out.affine) c *= (p - 1);
  out.affine[0] = 0;
  return out;
}

Form section_form(const Form& f, const CharacterVector& a) {
  const int n = f.num_variables();
  if (a.dimension() != n) fail(ErrorCode::DimensionMismatch, "character vector has the wrong length");
  std::vector<std::int64_t> prim = a.a;
  const std::int64_t c = a.content();
  for (auto& x : prim) x /= c;
  const auto V = unimodular_completion(prim);
  // y_i = sum_{j >= 1} V[j][i] z_j, with z_j for j = 1..n-1 the new variables
  std::vector<SparsePoly> y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 1; j < n; ++j) {
      if (V[j][i] == 0) continue;
      std::vector<int> e(n - 1, 0);
      e[j - 1] = 1;
      y[i][e] += V[j][i];
    }
  }
  SparsePoly total;
  for (const Term& t : f.terms()) {
    SparsePoly prod{{std::vector<int>(n - 1, 0), BigInt(t.coefficient)}};
    for (int i = 0; i < n; ++i) {
      for (int e = 0; e < t.exponents[i]; ++e) prod = multiply(prod, y[i]);
    }
    for (auto& [e, coef] : prod) total[e] += coef;
  }
  std::vector<Term> terms;
  for (const auto& [e, coef] : total) {
    if (coef == 0) continue;
    if (abs(coef) > BigInt(INT64_MAX)) fail(ErrorCode::Overflow, "section form coefficient exceeds 64 bits");
    terms.push_back(Term{coef.convert_to<std::int64_t>(), e});
  }
  return Form(n - 1, f.degree(), std::move(terms));
}

BigInt count_mod_prime_power(const Hypersurface& X, const std::optional<CharacterVector>& a, std::uint64_t p,
                             int alpha, double budget) {
  if (alpha < 1) fail(ErrorCode::InvalidArgument, "alpha must be at least 1");
  if (!a) return valuation_profile(X.f, p, alpha, budget).projective(alpha);
  if (a->in_support(p)) fail(ErrorCode::BadPrime, "p = " + std::to_string(p) + " divides the character vector");
  return valuation_profile(section_form(X.f, *a), p, alpha, budget).projective(alpha);
}

BigInt count_mod_prime_power_exhaustive(const Form& f, const std::optional<CharacterVector>& a, std::uint64_t p,
                                        int alpha, double budget) {
  if (!is_prime(p)) fail(ErrorCode::InvalidArgument, "p must be prime");
  if (alpha < 1) fail(ErrorCode::InvalidArgument, "alpha must be at least 1");
  const int n = f.num_variables();
  const std::uint64_t m = checked_pow(p, static_cast<unsigned>(alpha));
  int solved = -1;
  std::vector<std::uint64_t> ar;
  if (a) {
    if (a->dimension() != n) fail(ErrorCode::DimensionMismatch, "character vector has the wrong length");
    if (a->in_support(p)) fail(ErrorCode::BadPrime, "p = " + std::to_string(p) + " divides the character vector");
    ar = residues(a->a, m);
    for (int i = 0; i < n && solved < 0; ++i) {
      if (ar[i] % p != 0) solved = i;
    }
  }
  const int free_vars = solved < 0 ? n : n - 1;
  check_budget(power_estimate(m, free_vars), budget, "count_mod_prime_power_exhaustive");
  const std::uint64_t neg_inv = solved < 0 ? 0 : (m - inv_mod(ar[solved], m)) % m;

  std::vector<std::uint64_t> free(free_vars, 0), y(n, 0);
  std::uint64_t hits = 0;
  do {
    for (int i = 0, k = 0; i < n; ++i) {
      if (i != solved) y[i] = free[k++];
    }
    if (solved >= 0) {
      std::uint64_t dot = 0;
      for (int i = 0; i < n; ++i) {
        if (i != solved) dot = (dot + mul_mod(ar[i], y[i], m)) % m;
      }
      y[solved] = mul_mod(neg_inv, dot, m);
    }
    if (std::all_of(y.begin(), y.end(), [p](std::uint64_t x) { return x % p == 0; })) continue;
    if (f.evaluate_mod(y, m) == 0) ++hits;
  } while (next_vector(free, m));
  const std::uint64_t units = m / p * (p - 1);
  if (hits % units != 0) fail(ErrorCode::InvalidArgument, "solution count not divisible by the unit group");
  return BigInt(hits / units);
}

BigInt projective_space_points(int d, std::uint64_t q) {
  if (d < 0) return 0;
  BigInt total = 0, power = 1;
  for (int i = 0; i <= d; ++i) {
    total += power;
    power *= q;
  }
  return total;
}

bool weil_bound_check(const BigInt& point_count, int dimension, const BigInt& degree, std::uint64_t q) {
  return point_count <= projective_space_points(dimension, q) * degree;
}

}  // namespace maninlab
