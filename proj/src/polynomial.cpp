#include "maninlab/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "maninlab/errors.hpp"

namespace maninlab {

Form::Form(int num_variables, int degree, std::vector<Term> terms)
    : num_variables_(num_variables), degree_(degree) {
  if (num_variables <= 0) fail(ErrorCode::InvalidArgument, "form needs at least one variable");
  std::map<std::vector<int>, std::int64_t> merged;
  for (Term& t : terms) {
    if (static_cast<int>(t.exponents.size()) != num_variables) {
      fail(ErrorCode::DimensionMismatch, "term has " + std::to_string(t.exponents.size()) +
                                             " exponents, expected " + std::to_string(num_variables));
    }
    int total = 0;
    for (int e : t.exponents) {
      if (e < 0) fail(ErrorCode::InvalidArgument, "negative exponent");
      total += e;
    }
    if (total != degree) {
      fail(ErrorCode::NonHomogeneous, "term of degree " + std::to_string(total) + " in a form of degree " +
                                          std::to_string(degree));
    }
    std::int64_t& slot = merged[t.exponents];
    if (__builtin_add_overflow(slot, t.coefficient, &slot)) {
      fail(ErrorCode::Overflow, "coefficient overflow while merging terms");
    }
  }
  for (auto it = merged.rbegin(); it != merged.rend(); ++it) {
    if (it->second != 0) terms_.push_back(Term{it->second, it->first});
  }
}

void Form::check_dimension(std::size_t size) const {
  if (size != static_cast<std::size_t>(num_variables_)) {
    fail(ErrorCode::DimensionMismatch, "point has " + std::to_string(size) + " coordinates, form has " +
                                           std::to_string(num_variables_) + " variables");
  }
}

__int128 Form::evaluate(std::span<const std::int64_t> x) const {
  check_dimension(x.size());
  __int128 sum = 0;
  for (const Term& t : terms_) {
    __int128 prod = t.coefficient;
    for (int i = 0; i < num_variables_; ++i) {
      for (int e = 0; e < t.exponents[i]; ++e) {
        if (__builtin_mul_overflow(prod, static_cast<__int128>(x[i]), &prod)) {
          fail(ErrorCode::Overflow, "integer evaluation exceeds 127 bits");
        }
      }
    }
    if (__builtin_add_overflow(sum, prod, &sum)) {
      fail(ErrorCode::Overflow, "integer evaluation exceeds 127 bits");
    }
  }
  return sum;
}

namespace {

template <class T>
struct ExactRing {
  using value_type = T;
  value_type zero() const { return T(0); }
  value_type from_int(std::int64_t c) const { return T(c); }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
};

}  // namespace

BigInt Form::evaluate(std::span<const BigInt> x) const { return evaluate_in(ExactRing<BigInt>{}, x); }

Rational Form::evaluate(std::span<const Rational> x) const {
  return evaluate_in(ExactRing<Rational>{}, x);
}

std::uint64_t Form::evaluate_mod(std::span<const std::uint64_t> x, std::uint64_t m) const {
  return evaluate_in(ModRing{m}, x);
}

Form Form::derivative(int i) const {
  if (i < 0 || i >= num_variables_) fail(ErrorCode::InvalidArgument, "derivative index out of range");
  std::vector<Term> out;
  for (const Term& t : terms_) {
    if (t.exponents[i] == 0) continue;
    Term d = t;
    if (__builtin_mul_overflow(d.coefficient, static_cast<std::int64_t>(t.exponents[i]), &d.coefficient)) {
      fail(ErrorCode::Overflow, "coefficient overflow in derivative");
    }
    d.exponents[i] -= 1;
    out.push_back(std::move(d));
  }
  return Form(num_variables_, degree_ > 0 ? degree_ - 1 : 0, std::move(out));
}

std::vector<Form> Form::gradient() const {
  std::vector<Form> g;
  g.reserve(num_variables_);
  for (int i = 0; i < num_variables_; ++i) g.push_back(derivative(i));
  return g;
}

std::vector<std::uint64_t> Form::last_variable_coefficients_mod(std::span<const std::uint64_t> head,
                                                                std::uint64_t m) const {
  if (head.size() + 1 != static_cast<std::size_t>(num_variables_)) {
    fail(ErrorCode::DimensionMismatch, "last_variable_coefficients_mod: wrong head length");
  }
  std::vector<std::uint64_t> coeffs(degree_ + 1, 0);
  const int last = num_variables_ - 1;
  for (const Term& t : terms_) {
    std::uint64_t prod = reduce_mod(t.coefficient, m);
    for (int i = 0; i < last; ++i) {
      for (int e = 0; e < t.exponents[i]; ++e) prod = mul_mod(prod, head[i], m);
    }
    std::uint64_t& c = coeffs[t.exponents[last]];
    c = (c + prod) % m;
  }
  return coeffs;
}

std::string Form::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const Term& t : terms_) {
    std::int64_t c = t.coefficient;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    const std::uint64_t mag = c < 0 ? static_cast<std::uint64_t>(-(c + 1)) + 1 : static_cast<std::uint64_t>(c);
    bool any_var = false;
    for (int e : t.exponents) any_var = any_var || e > 0;
    if (mag != 1 || !any_var) os << mag;
    for (int i = 0; i < num_variables_; ++i) {
      if (t.exponents[i] == 0) continue;
      os << "x" << (i + 1);
      if (t.exponents[i] > 1) os << "^" << t.exponents[i];
    }
    first = false;
  }
  return os.str();
}

namespace {

struct ParsedTerm {
  std::int64_t coefficient = 1;
  std::map<int, int> powers;  // 1-based variable index -> exponent
};

class TermParser {
 public:
  explicit TermParser(std::string_view text) {
    for (char c : text) {
      if (!std::isspace(static_cast<unsigned char>(c))) s_.push_back(c);
    }
  }

  std::vector<ParsedTerm> parse() {
    if (s_.empty()) fail(ErrorCode::ZeroPolynomial, "empty polynomial text");
    std::vector<ParsedTerm> out;
    bool first = true;
    while (pos_ < s_.size()) {
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
      } else if (!first) {
        error("expected '+' or '-'");
      }
      ParsedTerm t = term();
      if (__builtin_mul_overflow(t.coefficient, static_cast<std::int64_t>(sign), &t.coefficient)) {
        error("coefficient overflow");
      }
      out.push_back(std::move(t));
      first = false;
    }
    return out;
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::Parse, "polynomial parse error at offset " + std::to_string(pos_) + ": " + what +
                               " in \"" + s_ + "\"");
  }

  std::int64_t number() {
    if (!std::isdigit(static_cast<unsigned char>(peek()))) error("expected a number");
    std::int64_t v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      if (__builtin_mul_overflow(v, 10, &v) || __builtin_add_overflow(v, s_[pos_] - '0', &v)) {
        error("number too large");
      }
      ++pos_;
    }
    return v;
  }

  ParsedTerm term() {
    ParsedTerm t;
    bool any = false;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      t.coefficient = number();
      any = true;
      if (peek() == '*') ++pos_;
    }
    while (peek() == 'x' || peek() == 'X') {
      ++pos_;
      const std::int64_t index = number();
      if (index < 1 || index > 64) error("variable index must be in 1..64");
      int exponent = 1;
      if (peek() == '^') {
        ++pos_;
        const std::int64_t e = number();
        if (e > 1000) error("exponent too large");
        exponent = static_cast<int>(e);
      }
      t.powers[static_cast<int>(index)] += exponent;
      any = true;
      if (peek() == '*') {
        ++pos_;
        if (peek() != 'x' && peek() != 'X') error("expected a variable after '*'");
      }
    }
    if (!any) error("expected a term");
    return t;
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

HomogeneousPolynomial HomogeneousPolynomial::parse(std::string_view text, int num_variables) {
  std::vector<ParsedTerm> parsed = TermParser(text).parse();
  int max_index = 0;
  for (const ParsedTerm& t : parsed) {
    for (const auto& [index, e] : t.powers) max_index = std::max(max_index, index);
  }
  if (num_variables == 0) num_variables = max_index;
  if (max_index > num_variables) {
    fail(ErrorCode::DimensionMismatch, "polynomial uses x" + std::to_string(max_index) + " but n = " +
                                           std::to_string(num_variables));
  }
  if (num_variables <= 0) num_variables = 1;
  std::vector<Term> terms;
  for (const ParsedTerm& t : parsed) {
    Term term{t.coefficient, std::vector<int>(num_variables, 0)};
    for (const auto& [index, e] : t.powers) term.exponents[index - 1] = e;
    terms.push_back(std::move(term));
  }
  return from_terms(num_variables, std::move(terms));
}

HomogeneousPolynomial HomogeneousPolynomial::from_terms(int num_variables, std::vector<Term> terms) {
  std::vector<Term> nonzero;
  for (Term& t : terms) {
    if (t.coefficient != 0) nonzero.push_back(std::move(t));
  }
  if (num_variables <= 0) fail(ErrorCode::TooFewVariables, "need at least 3 variables");
  for (const Term& t : nonzero) {
    if (static_cast<int>(t.exponents.size()) != num_variables) {
      fail(ErrorCode::DimensionMismatch, "term exponent vector has wrong length");
    }
  }
  if (nonzero.empty()) fail(ErrorCode::ZeroPolynomial, "polynomial is zero");
  int degree = -1;
  for (const Term& t : nonzero) {
    const int total = std::accumulate(t.exponents.begin(), t.exponents.end(), 0);
    if (degree < 0) degree = total;
    if (total != degree) {
      fail(ErrorCode::NonHomogeneous, "terms of degrees " + std::to_string(degree) + " and " +
                                          std::to_string(total) + " are mixed");
    }
  }
  Form form(num_variables, degree, std::move(nonzero));
  if (form.is_zero()) fail(ErrorCode::ZeroPolynomial, "polynomial is zero after combining terms");
  if (degree < 2) fail(ErrorCode::DegreeTooSmall, "degree " + std::to_string(degree) + " < 2");
  if (num_variables < 3) {
    fail(ErrorCode::TooFewVariables, std::to_string(num_variables) + " variables < 3");
  }
  std::int64_t g = 0;
  for (const Term& t : form.terms()) g = std::gcd(g, t.coefficient);
  if (form.terms().front().coefficient < 0) g = -g;
  std::vector<Term> normalized(form.terms().begin(), form.terms().end());
  for (Term& t : normalized) t.coefficient /= g;
  return HomogeneousPolynomial(Form(num_variables, degree, std::move(normalized)));
}

std::int64_t HomogeneousPolynomial::content() const {
  std::int64_t g = 0;
  for (const Term& t : terms_) g = std::gcd(g, t.coefficient);
  return g;
}

QuadraticExtensionField QuadraticExtensionField::for_prime(std::uint64_t p) {
  if (p == 2) return {2, 1, 1};  // t^2 = t + 1
  for (std::uint64_t r = 2; r < p; ++r) {
    if (pow_mod(r, (p - 1) / 2, p) == p - 1) return {p, r, 0};  // t^2 = r, r a non-residue
  }
  fail(ErrorCode::InvalidArgument, "no quadratic non-residue modulo " + std::to_string(p));
}

QuadraticExtensionField::value_type QuadraticExtensionField::mul(value_type a, value_type b) const {
  const std::uint64_t hi = mul_mod(a.im, b.im, p);
  const std::uint64_t re = (mul_mod(a.re, b.re, p) + mul_mod(hi, c0, p)) % p;
  const std::uint64_t im = (mul_mod(a.re, b.im, p) + mul_mod(a.im, b.re, p) + mul_mod(hi, c1, p)) % p;
  return {re, im};
}

void BadPrimeSet::insert(std::uint64_t p, PrimeProvenance provenance) {
  auto [it, inserted] = entries_.emplace(p, provenance);
  if (!inserted && it->second != provenance) it->second = PrimeProvenance::Both;
}

std::vector<std::uint64_t> BadPrimeSet::primes() const {
  std::vector<std::uint64_t> out;
  for (const auto& [p, prov] : entries_) out.push_back(p);
  return out;
}

std::optional<PrimeProvenance> BadPrimeSet::provenance(std::uint64_t p) const {
  auto it = entries_.find(p);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

namespace {

// Visits every normalized projective point (first nonzero coordinate = 1) of
// P^{n-1} over a field whose elements are enumerated by `elements`. Stops
// early when the visitor returns true.
template <class Field, class Visitor>
bool any_projective_point(int n, const Field& field, const std::vector<typename Field::value_type>& elements,
                          Visitor&& visit) {
  using E = typename Field::value_type;
  std::vector<E> x(n, field.zero());
  std::vector<std::size_t> idx(n, 0);
  for (int lead = 0; lead < n; ++lead) {
    std::fill(x.begin(), x.end(), field.zero());
    x[lead] = field.from_int(1);
    const int free = n - lead - 1;
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      for (int k = 0; k < free; ++k) x[lead + 1 + k] = elements[idx[k]];
      if (visit(std::span<const E>(x))) return true;
      int k = 0;
      while (k < free && ++idx[k] == elements.size()) idx[k++] = 0;
      if (k == free) break;
    }
  }
  return false;
}

template <class Field>
bool singular_over(const Form& f, const std::vector<Form>& grad, const Field& field,
                   const std::vector<typename Field::value_type>& elements) {
  using E = typename Field::value_type;
  const E zero = field.zero();
  return any_projective_point(f.num_variables(), field, elements, [&](std::span<const E> x) {
    if (!(f.evaluate_in(field, x) == zero)) return false;
    for (const Form& g : grad) {
      if (!(g.evaluate_in(field, x) == zero)) return false;
    }
    return true;
  });
}

using Fq = QuadraticExtensionField;
using Eq = Fq::value_type;
using PolyQ = std::vector<Eq>;

Eq sub(const Fq& F, Eq a, Eq b) { return {(a.re + F.p - b.re) % F.p, (a.im + F.p - b.im) % F.p}; }

// (a + b t)^-1 = (a + b c1 - b t) / (a^2 + a b c1 - b^2 c0)
Eq inv(const Fq& F, Eq x) {
  const std::uint64_t p = F.p;
  const std::uint64_t norm =
      (mul_mod(x.re, x.re, p) + mul_mod(mul_mod(x.re, x.im, p), F.c1, p) + p - mul_mod(mul_mod(x.im, x.im, p), F.c0, p)) % p;
  const std::uint64_t ni = inv_mod(norm, p);
  return {mul_mod((x.re + mul_mod(x.im, F.c1, p)) % p, ni, p), mul_mod((p - x.im) % p, ni, p)};
}

void trim(PolyQ& a) {
  while (!a.empty() && a.back() == Eq{}) a.pop_back();
}

// Remainder of a modulo b (b nonzero).
PolyQ poly_mod(const Fq& F, PolyQ a, const PolyQ& b) {
  trim(a);
  const Eq lead_inv = inv(F, b.back());
  while (a.size() >= b.size()) {
    const Eq q = F.mul(a.back(), lead_inv);
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = sub(F, a[shift + i], F.mul(q, b[i]));
    trim(a);
  }
  return a;
}

PolyQ poly_gcd(const Fq& F, PolyQ a, PolyQ b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    PolyQ r = poly_mod(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

PolyQ poly_mulmod(const Fq& F, const PolyQ& a, const PolyQ& b, const PolyQ& m) {
  if (a.empty() || b.empty()) return {};
  PolyQ out(a.size() + b.size() - 1, Eq{});
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = F.add(out[i + j], F.mul(a[i], b[j]));
  }
  return poly_mod(F, std::move(out), m);
}

// Whether g (nonzero, degree >= 1) has a root in F_{p^2}: gcd(g, t^(p^2) - t) != 1.
bool has_root(const Fq& F, const PolyQ& g) {
  PolyQ result{F.from_int(1)}, base = poly_mod(F, PolyQ{Eq{}, F.from_int(1)}, g);
  for (std::uint64_t e = F.p * F.p; e > 0; e >>= 1) {
    if (e & 1) result = poly_mulmod(F, result, base, g);
    base = poly_mulmod(F, base, base, g);
  }
  result.resize(std::max<std::size_t>(result.size(), 2), Eq{});
  result[1] = sub(F, result[1], F.from_int(1));
  return poly_gcd(F, g, result).size() >= 2;
}

// Singular points over F_{p^2} fibered over the first n-1 coordinates: on each
// fiber, f and its partials are polynomials in the last coordinate and a
// common zero is a root of their gcd.
bool singular_over_fibered(const Form& f, const std::vector<Form>& grad, const Fq& F) {
  // partials first: lower degree, and they usually settle the fiber alone
  std::vector<const Form*> forms;
  for (auto it = grad.rbegin(); it != grad.rend(); ++it) forms.push_back(&*it);
  forms.push_back(&f);
  const int n = f.num_variables();
  const int last = n - 1;
  std::vector<Eq> elements;
  for (std::uint64_t a = 0; a < F.p; ++a) {
    for (std::uint64_t b = 0; b < F.p; ++b) elements.push_back({a, b});
  }
  auto fiber_poly = [&](const Form& g, std::span<const Eq> head) {
    PolyQ c(g.degree() + 1, Eq{});
    for (const Term& t : g.terms()) {
      Eq prod = F.from_int(t.coefficient);
      for (int i = 0; i < last; ++i) {
        for (int e = 0; e < t.exponents[i]; ++e) prod = F.mul(prod, head[i]);
      }
      c[t.exponents[last]] = F.add(c[t.exponents[last]], prod);
    }
    return c;
  };
  // the point (0 : ... : 0 : 1)
  {
    std::vector<Eq> x(n, Eq{});
    x[last] = F.from_int(1);
    bool all = true;
    for (const Form* g : forms) all = all && g->evaluate_in(F, std::span<const Eq>(x)) == Eq{};
    if (all) return true;
  }
  return any_projective_point(n - 1, F, elements, [&](std::span<const Eq> head) {
    PolyQ g;
    for (const Form* form : forms) {
      g = poly_gcd(F, std::move(g), fiber_poly(*form, head));
      if (g.size() == 1) return false;
    }
    return g.empty() || has_root(F, g);
  });
}

}  // namespace

bool has_singular_point(const Form& f, std::uint64_t p, int extension_degree) {
  const std::vector<Form> grad = f.gradient();
  if (extension_degree == 1) {
    ModRing field{p};
    std::vector<std::uint64_t> elements(p);
    std::iota(elements.begin(), elements.end(), 0);
    return singular_over(f, grad, field, elements);
  }
  if (extension_degree == 2) {
    return singular_over_fibered(f, grad, QuadraticExtensionField::for_prime(p));
  }
  fail(ErrorCode::InvalidArgument, "extension degree must be 1 or 2");
}

BadPrimeSet bad_primes(const HomogeneousPolynomial& f, std::uint64_t search_bound,
                       std::span<const std::uint64_t> extra) {
  if (search_bound < 2) fail(ErrorCode::InvalidArgument, "search_bound must be >= 2");
  BadPrimeSet out;
  out.set_search_bound(search_bound);
  const int n = f.num_variables();
  for (std::uint64_t p : primes_up_to(search_bound)) {
    if (has_singular_point(f, p, 1)) {
      out.insert(p, PrimeProvenance::Detected);
      continue;
    }
    // F_{p^2} pass visits ~p^(2(n-2)) fibers; skip it where that is out of reach.
    double work = 1.0;
    for (int i = 0; i < n - 2; ++i) work *= static_cast<double>(p * p);
    if (work <= 5e7 && has_singular_point(f, p, 2)) out.insert(p, PrimeProvenance::Detected);
  }
  for (std::uint64_t p : extra) {
    if (!is_prime(p)) fail(ErrorCode::InvalidArgument, "declared bad prime " + std::to_string(p) + " is not prime");
    out.insert(p, PrimeProvenance::UserDeclared);
  }
  return out;
}

Hypersurface::Hypersurface(HomogeneousPolynomial poly, BadPrimeSet bad_set)
    : f(std::move(poly)), bad(std::move(bad_set)), gradient(f.gradient()) {}

Hypersurface Hypersurface::with_detected_primes(HomogeneousPolynomial poly, std::uint64_t search_bound,
                                                std::span<const std::uint64_t> extra) {
  BadPrimeSet s = bad_primes(poly, search_bound, extra);
  return Hypersurface(std::move(poly), std::move(s));
}

}  // namespace maninlab
