#include "maninlab/padic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "maninlab/errors.hpp"

namespace maninlab {

using cd = std::complex<double>;

StratumDescriptor StratumDescriptor::u1(int alpha, int beta) {
  if (!(1 <= beta && beta < alpha)) fail(ErrorCode::InvalidArgument, "U1(alpha, beta) needs 1 <= beta < alpha");
  return {StratumKind::U1_ab, alpha, beta};
}

StratumDescriptor StratumDescriptor::u1(int alpha) {
  if (alpha < 1) fail(ErrorCode::InvalidArgument, "U1(alpha) needs alpha >= 1");
  return {StratumKind::U1_a, alpha, 0};
}

StratumDescriptor StratumDescriptor::u(int alpha) {
  if (alpha < 1) fail(ErrorCode::InvalidArgument, "U(alpha) needs alpha >= 1");
  return {StratumKind::U_a, alpha, 0};
}

std::pair<int, int> StratumDescriptor::height_exponents() const {
  switch (kind) {
    case StratumKind::U0: return {0, 0};
    case StratumKind::U1_ab: return {alpha - beta, beta};
    case StratumKind::U1_a: return {0, alpha};
    case StratumKind::U_a: return {alpha, 0};
  }
  return {0, 0};
}

std::string StratumDescriptor::label() const {
  switch (kind) {
    case StratumKind::U0: return "U0";
    case StratumKind::U1_ab: return "U1(" + std::to_string(alpha) + "," + std::to_string(beta) + ")";
    case StratumKind::U1_a: return "U1(" + std::to_string(alpha) + ")";
    case StratumKind::U_a: return "U(" + std::to_string(alpha) + ")";
  }
  return "?";
}

namespace {

bool next_vector(std::vector<std::uint64_t>& v, std::uint64_t m) {
  for (auto& x : v) {
    if (++x < m) return true;
    x = 0;
  }
  return false;
}

bool primitive_mod(std::span<const std::uint64_t> y, std::uint64_t p) {
  return std::any_of(y.begin(), y.end(), [p](std::uint64_t x) { return x % p != 0; });
}

// v_p of x mod p^k, capped at k.
int capped_valuation(std::uint64_t x, std::uint64_t p, int k) {
  int v = 0;
  while (v < k && x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

void check_budget(double cost, double budget, const char* what) {
  if (cost > budget) {
    fail(ErrorCode::BudgetExceeded, std::string(what) + ": about " + format_real(cost) +
                                        " evaluations exceed the budget of " + format_real(budget) +
                                        "; raise the count budget");
  }
}

cd ppow(std::uint64_t p, cd e) { return std::exp(e * std::log(static_cast<double>(p))); }

void require_good(const Hypersurface& X, std::uint64_t p) {
  if (!is_prime(p)) fail(ErrorCode::InvalidArgument, "p must be prime");
  if (!X.is_good(p)) fail(ErrorCode::BadPrime, "p = " + std::to_string(p) + " is in the bad-prime set S");
}

// w_j = vol{||y|| = 1, v(f(y)) >= j} as logs, extended past the profile by
// the geometric law when the profile is stable, else by monotonicity.
struct LogVolumes {
  ValuationProfile profile;
  double log_p;
  std::vector<double> logs;  // log w_j for j within the profile

  double operator()(int j) const {
    const int last = static_cast<int>(logs.size()) - 1;
    if (j <= last) return logs[j];
    if (profile.stable && last >= profile.geometric_from) return logs[last] - (j - last) * log_p;
    return logs[last];
  }
};

LogVolumes log_volumes(const Form& f, std::uint64_t p, int levels) {
  LogVolumes w{valuation_profile(f, p, std::max(levels, 1)), std::log(static_cast<double>(p)), {}};
  const int n = w.profile.n;
  for (int j = 0; j < static_cast<int>(w.profile.affine.size()); ++j) {
    if (j == 0) {
      w.logs.push_back(std::log1p(-std::pow(static_cast<double>(p), -n)));
      continue;
    }
    const BigInt& c = w.profile.affine[j];
    w.logs.push_back(c == 0 ? -INFINITY : std::log(c.convert_to<double>()) - n * j * w.log_p);
  }
  return w;
}

// sum over alpha > A of p^(n alpha) [ |p^(-alpha s0)| w_0 + |p^(s1-s0) - 1| sum_{beta=1..alpha} |p^(-alpha s0 - beta(s1-s0))| w_beta ]
// bounds the tail of both stratified sums, since |I(alpha, beta)| <= p^(n alpha) w_beta.
double stratified_tail(const LogVolumes& w, int n, const ComplexPicard& s, int A) {
  const double lp = w.log_p;
  const double s0 = s.s0.real(), s1 = s.s1.real();
  if (!(s0 > n) || !(s1 > n - 1)) return INFINITY;
  const double jump = std::abs(ppow(w.profile.p, s.s1 - s.s0) - 1.0);
  double total = 0.0;
  double lw0 = std::log1p(-std::exp(-n * lp));
  for (int alpha = A + 1; alpha <= A + 4000; ++alpha) {
    double term = std::exp(n * alpha * lp - alpha * s0 * lp + lw0);
    for (int beta = 1; beta <= alpha; ++beta) {
      const double lwb = w(beta);
      if (lwb == -INFINITY) break;
      term += jump * std::exp(n * alpha * lp - alpha * s0 * lp - beta * (s1 - s0) * lp + lwb);
    }
    total += term;
    if (term < 1e-30 * std::max(total, 1e-300) || term < 1e-300) break;
  }
  return total;
}

// Tail over alpha > A of the stratified sum itself (all terms positive for real s).
double trivial_tail(const LogVolumes& w, int n, const ComplexPicard& s, int A) {
  const double lp = w.log_p;
  const double s0 = s.s0.real(), s1 = s.s1.real();
  if (!(s0 > n) || !(s1 > n - 1)) return INFINITY;
  auto diff = [&](int j) {  // w_j - w_(j+1)
    const double a = w(j), b = w(j + 1);
    if (a == -INFINITY) return 0.0;
    return std::exp(a) * (b == -INFINITY ? 1.0 : -std::expm1(b - a));
  };
  double total = 0.0;
  for (int alpha = A + 1; alpha <= A + 4000; ++alpha) {
    const double scale = n * alpha * lp;
    double term = diff(0) * std::exp(scale - alpha * s0 * lp);
    for (int beta = 1; beta < alpha; ++beta) {
      const double d = diff(beta);
      if (d == 0.0 && w(beta) == -INFINITY) break;
      term += d * std::exp(scale - (alpha - beta) * s0 * lp - beta * s1 * lp);
    }
    if (w(alpha) != -INFINITY) term += std::exp(scale + w(alpha) - alpha * s1 * lp);
    total += term;
    if (term < 1e-30 * std::max(total, 1e-300) || term < 1e-300) break;
  }
  return total;
}

std::complex<double> to_complex(const Rational& q) { return {to_double(q), 0.0}; }

}  // namespace

Rational stratum_volume_direct(const Form& f, std::uint64_t p, const StratumDescriptor& stratum, int precision,
                               double budget) {
  if (!is_prime(p)) fail(ErrorCode::InvalidArgument, "p must be prime");
  if (stratum.kind == StratumKind::U0) return 1;
  int needed = 1;
  if (stratum.kind == StratumKind::U1_a) needed = stratum.alpha;
  if (stratum.kind == StratumKind::U1_ab) needed = stratum.beta + 1;
  const int k = precision == 0 ? needed : precision;
  if (k < needed) {
    fail(ErrorCode::InvalidArgument, "precision " + std::to_string(k) + " too small for " + stratum.label());
  }
  const int n = f.num_variables();
  const std::uint64_t m = checked_pow(p, static_cast<unsigned>(k));
  check_budget(std::pow(static_cast<double>(m), n), budget, "stratum_volume_direct");
  std::vector<std::uint64_t> y(n, 0);
  std::uint64_t hits = 0;
  while (next_vector(y, m)) {
    if (!primitive_mod(y, p)) continue;
    const int v = capped_valuation(f.evaluate_mod(y, m), p, k);
    bool in = false;
    switch (stratum.kind) {
      case StratumKind::U_a: in = v == 0; break;
      case StratumKind::U1_a: in = v >= stratum.alpha; break;
      case StratumKind::U1_ab: in = v == stratum.beta; break;
      case StratumKind::U0: break;
    }
    if (in) ++hits;
  }
  // x = p^-alpha y scales volumes by p^(n alpha)
  return Rational(hits) * rational_power(p, n * (stratum.alpha - k));
}

Rational stratum_volume_closed(const Hypersurface& X, std::uint64_t p, const StratumDescriptor& stratum) {
  require_good(X, p);
  const int n = X.n();
  const int a = stratum.alpha;
  const Rational tau = tau_p(X.f, p);
  switch (stratum.kind) {
    case StratumKind::U0: return 1;
    case StratumKind::U1_ab: return Rational(p - 1, p) * tau * rational_power(p, n * a - stratum.beta);
    case StratumKind::U1_a: return tau * rational_power(p, (n - 1) * a);
    case StratumKind::U_a: return (1 - rational_power(p, -n) - tau / p) * rational_power(p, n * a);
  }
  return 0;
}

Rational mean_value_psi(const Rational& t, std::uint64_t p) {
  if (t == 0) return 1;
  const int v = valuation(boost::multiprecision::numerator(t), p) -
                valuation(boost::multiprecision::denominator(t), p);
  if (v >= 0) return 1;
  if (v == -1) return Rational(-1, p - 1);
  return 0;
}

Rational incidence_volume(const Hypersurface& X, const CharacterVector& a, std::uint64_t p, int alpha, int beta) {
  if (!(1 <= beta && beta <= alpha)) fail(ErrorCode::InvalidArgument, "incidence volume needs 1 <= beta <= alpha");
  if (a.in_support(p)) fail(ErrorCode::BadPrime, "p = " + std::to_string(p) + " divides the character vector");
  const BigInt z = count_mod_prime_power(X, a, p, beta);
  return rational_power(p, -alpha) * rational_power(p, (2 - X.n()) * beta) * Rational(p - 1, p) * Rational(z);
}

Rational incidence_volume_direct(const Form& f, const CharacterVector& a, std::uint64_t p, int alpha, int beta,
                                 double budget) {
  if (!(1 <= beta && beta <= alpha)) fail(ErrorCode::InvalidArgument, "incidence volume needs 1 <= beta <= alpha");
  const int n = f.num_variables();
  const std::uint64_t m = checked_pow(p, static_cast<unsigned>(alpha));
  const std::uint64_t mb = checked_pow(p, static_cast<unsigned>(beta));
  check_budget(std::pow(static_cast<double>(m), n), budget, "incidence_volume_direct");
  std::vector<std::uint64_t> ar;
  for (std::int64_t x : a.a) ar.push_back(reduce_mod(x, m));
  std::vector<std::uint64_t> y(n, 0);
  std::uint64_t hits = 0;
  while (next_vector(y, m)) {
    if (!primitive_mod(y, p)) continue;
    std::uint64_t dot = 0;
    for (int i = 0; i < n; ++i) dot = (dot + mul_mod(ar[i], y[i], m)) % m;
    if (dot != 0 || f.evaluate_mod(y, mb) != 0) continue;
    ++hits;
  }
  return Rational(hits) * rational_power(p, -n * alpha);
}

std::vector<BigInt> cyclotomic_reduce(std::span<const std::int64_t> hist, std::uint64_t p, int alpha) {
  const std::uint64_t N = checked_pow(p, static_cast<unsigned>(alpha));
  if (hist.size() != N) fail(ErrorCode::DimensionMismatch, "histogram length must be p^alpha");
  const std::uint64_t m = N / p, phi = N - m;
  std::vector<BigInt> c(hist.begin(), hist.end());
  // zeta^phi = -(1 + zeta^m + ... + zeta^((p-2) m))
  for (std::uint64_t r = N - 1; r >= phi && r < N; --r) {
    if (c[r] == 0) continue;
    const BigInt cr = c[r];
    c[r] = 0;
    for (std::uint64_t k = 0; k + 1 < p; ++k) c[r - phi + k * m] -= cr;
  }
  c.resize(phi);
  return c;
}

std::optional<Rational> cyclotomic_rational(std::span<const std::int64_t> hist, std::uint64_t p, int alpha) {
  const std::vector<BigInt> c = cyclotomic_reduce(hist, p, alpha);
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (c[i] != 0) return std::nullopt;
  }
  return Rational(c.empty() ? BigInt(0) : c[0]);
}

namespace {

CharacterSum evaluate_histogram(std::span<const std::int64_t> hist, std::uint64_t p, int alpha,
                                const Rational& scale) {
  const std::size_t N = hist.size();
  long double re = 0, im = 0, mass = 0;
  for (std::size_t r = 0; r < N; ++r) {
    if (hist[r] == 0) continue;
    const long double angle = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(r) / N;
    re += hist[r] * std::cos(angle);
    im += hist[r] * std::sin(angle);
    mass += std::fabs(static_cast<long double>(hist[r]));
  }
  CharacterSum out;
  const double sc = to_double(scale);
  out.value = {static_cast<double>(re) * sc, static_cast<double>(im) * sc};
  out.error_bound = static_cast<double>(mass) * sc * 1e-15;
  if (auto q = cyclotomic_rational(hist, p, alpha)) {
    out.exact = *q * scale;
    out.value = to_complex(*out.exact);
    out.error_bound = 0.0;
  }
  return out;
}

// hist[v][r]: primitive y mod p^K with min(v_p f(y), K) = v and <a, y> = r mod p^alpha.
std::vector<std::vector<std::int64_t>> valuation_histogram(const Form& f, const std::optional<CharacterVector>& a,
                                                           std::uint64_t p, int alpha, int K, double budget) {
  const int n = f.num_variables();
  if (a && a->dimension() != n) fail(ErrorCode::DimensionMismatch, "character vector has the wrong length");
  const std::uint64_t mK = checked_pow(p, static_cast<unsigned>(K));
  const std::uint64_t ma = checked_pow(p, static_cast<unsigned>(alpha));
  check_budget(std::pow(static_cast<double>(mK), n), budget, "character sum");
  std::vector<std::uint64_t> ar(n, 0);
  if (a) {
    for (int i = 0; i < n; ++i) ar[i] = reduce_mod(a->a[i], ma);
  }
  std::vector<std::vector<std::int64_t>> hist(K + 1, std::vector<std::int64_t>(ma, 0));
  std::vector<std::uint64_t> y(n, 0);
  while (next_vector(y, mK)) {
    if (!primitive_mod(y, p)) continue;
    const int v = capped_valuation(f.evaluate_mod(y, mK), p, K);
    std::uint64_t dot = 0;
    for (int i = 0; i < n; ++i) dot = (dot + mul_mod(ar[i], y[i] % ma, ma)) % ma;
    ++hist[v][dot];
  }
  return hist;
}

}  // namespace

CharacterSumTable character_sum_table(const Form& f, const std::optional<CharacterVector>& a, std::uint64_t p,
                                      int max_alpha, double budget) {
  if (!is_prime(p)) fail(ErrorCode::InvalidArgument, "p must be prime");
  if (max_alpha < 1) fail(ErrorCode::InvalidArgument, "character sum table needs alpha >= 1");
  if (a && a->in_support(p)) fail(ErrorCode::BadPrime, "p = " + std::to_string(p) + " divides the character vector");
  CharacterSumTable out;
  out.p = p;
  out.n = f.num_variables();
  out.max_alpha = max_alpha;
  out.a = a;
  out.I.resize(max_alpha + 1);
  for (int alpha = 1; alpha <= max_alpha; ++alpha) {
    const auto hist = valuation_histogram(f, a, p, alpha, alpha, budget);
    std::vector<std::int64_t> cumulative(hist[0].size(), 0);
    std::vector<CharacterSum> row(alpha + 1);
    for (int beta = alpha; beta >= 0; --beta) {
      for (std::size_t r = 0; r < cumulative.size(); ++r) cumulative[r] += hist[beta][r];
      row[beta] = evaluate_histogram(cumulative, p, alpha, Rational(1));
    }
    out.I[alpha] = std::move(row);
  }
  return out;
}

CharacterSum character_sum_I(const Form& f, const std::optional<CharacterVector>& a, std::uint64_t p, int alpha,
                             int beta, double budget) {
  if (!is_prime(p)) fail(ErrorCode::InvalidArgument, "p must be prime");
  if (alpha < 1 || beta < 0) fail(ErrorCode::InvalidArgument, "I(alpha, beta) needs alpha >= 1 and beta >= 0");
  if (a && a->in_support(p)) fail(ErrorCode::BadPrime, "p = " + std::to_string(p) + " divides the character vector");
  const int K = std::max(alpha, beta);
  const auto hist = valuation_histogram(f, a, p, alpha, K, budget);
  std::vector<std::int64_t> cumulative(hist[0].size(), 0);
  for (int v = beta; v <= K; ++v) {
    for (std::size_t r = 0; r < cumulative.size(); ++r) cumulative[r] += hist[v][r];
  }
  const int n = f.num_variables();
  return evaluate_histogram(cumulative, p, alpha, rational_power(p, n * (alpha - K)));
}

bool ComplexPicard::is_integral() const {
  auto integral = [](cd z) {
    return z.imag() == 0.0 && std::floor(z.real()) == z.real() && std::fabs(z.real()) < 1e6;
  };
  return integral(s0) && integral(s1);
}

LocalFourierValue fourier_trivial_closed(const Hypersurface& X, std::uint64_t p, const ComplexPicard& s) {
  require_good(X, p);
  const int n = X.n();
  const Rational tau = tau_p(X.f, p);
  LocalFourierValue out;
  out.p = p;
  out.s = s;

  const cd a0 = ppow(p, s.s0 - static_cast<double>(n));
  const cd a1 = ppow(p, s.s1 - static_cast<double>(n - 1));
  if (std::abs(a0 - 1.0) < 1e-13 || std::abs(a1 - 1.0) < 1e-13) {
    fail(ErrorCode::PoleAt, "local Fourier transform has a pole: p^(s0-n) = 1 or p^(s1-n+1) = 1");
  }
  const double tau_d = to_double(tau);
  const cd projective = (1.0 - ppow(p, -s.s0)) / (1.0 - ppow(p, static_cast<double>(n) - s.s0));
  out.value = projective + tau_d * (a0 - ppow(p, s.s1 - static_cast<double>(n))) / ((a0 - 1.0) * (a1 - 1.0));
  out.alternate_form = projective + tau_d * std::pow(static_cast<double>(p), n - 1) *
                                        (ppow(p, -s.s1) - ppow(p, -s.s0)) /
                                        ((1.0 - ppow(p, static_cast<double>(n) - s.s0)) *
                                         (1.0 - ppow(p, static_cast<double>(n - 1) - s.s1)));
  if (s.is_integral()) {
    const int s0 = static_cast<int>(s.s0.real()), s1 = static_cast<int>(s.s1.real());
    const Rational proj = (1 - rational_power(p, -s0)) / (1 - rational_power(p, n - s0));
    const Rational e0 = rational_power(p, s0 - n), e1 = rational_power(p, s1 - n + 1);
    out.exact = proj + tau * (e0 - rational_power(p, s1 - n)) / ((e0 - 1) * (e1 - 1));
    out.value = to_complex(*out.exact);
  }
  out.error_bound = 1e-14 * std::max(1.0, std::abs(out.value));
  return out;
}

LocalFourierValue fourier_trivial_direct(const Hypersurface& X, std::uint64_t p, const ComplexPicard& s, int A) {
  if (!is_prime(p)) fail(ErrorCode::InvalidArgument, "p must be prime");
  if (A < 0) fail(ErrorCode::InvalidArgument, "truncation must be >= 0");
  const int n = X.n();
  if (!(s.s0.real() > n) || !(s.s1.real() > n - 1)) {
    fail(ErrorCode::InvalidArgument, "direct sum needs Re s0 > n and Re s1 > n - 1");
  }
  const LogVolumes w = log_volumes(X.f, p, A);
  const ValuationProfile& prof = w.profile;
  LocalFourierValue out;
  out.p = p;
  out.s = s;
  out.truncation = A;

  auto vol = [&](int j) { return prof.volume(j); };
  if (s.is_integral()) {
    const int s0 = static_cast<int>(s.s0.real()), s1 = static_cast<int>(s.s1.real());
    Rational total = 1;
    for (int alpha = 1; alpha <= A; ++alpha) {
      const Rational scale = rational_power(p, n * alpha);
      total += scale * (vol(0) - vol(1)) * rational_power(p, -alpha * s0);
      for (int beta = 1; beta < alpha; ++beta) {
        total += scale * (vol(beta) - vol(beta + 1)) * rational_power(p, -(alpha - beta) * s0 - beta * s1);
      }
      total += scale * vol(alpha) * rational_power(p, -alpha * s1);
    }
    out.exact = total;
    out.value = to_complex(total);
  } else {
    cd total = 1.0;
    for (int alpha = 1; alpha <= A; ++alpha) {
      const double scale = std::pow(static_cast<double>(p), n * alpha);
      total += scale * to_double(vol(0) - vol(1)) * ppow(p, -static_cast<double>(alpha) * s.s0);
      for (int beta = 1; beta < alpha; ++beta) {
        total += scale * to_double(vol(beta) - vol(beta + 1)) *
                 ppow(p, -static_cast<double>(alpha - beta) * s.s0 - static_cast<double>(beta) * s.s1);
      }
      total += scale * to_double(vol(alpha)) * ppow(p, -static_cast<double>(alpha) * s.s1);
    }
    out.value = total;
  }
  out.error_bound = trivial_tail(w, n, s, A) + 1e-14 * std::abs(out.value);
  return out;
}

LocalFourierValue fourier_char_closed(const Hypersurface& X, const CharacterVector& a, std::uint64_t p,
                                      const ComplexPicard& s, int A) {
  require_good(X, p);
  if (a.in_support(p)) fail(ErrorCode::BadPrime, "p = " + std::to_string(p) + " divides the character vector");
  if (A < 1) fail(ErrorCode::InvalidArgument, "series cutoff must be >= 1");
  const int n = X.n();
  const double sigma1 = s.s1.real();
  if (!(sigma1 > n - 1)) fail(ErrorCode::InvalidArgument, "series needs Re s1 > n - 1");

  const double zf = static_cast<double>(count_projective_fibered(X.f, p));
  const SectionCount sec = count_section(X, a, p);
  const double dp = static_cast<double>(p);

  LocalFourierValue out;
  out.p = p;
  out.s = s;
  out.character = a;

  cd series = 0.0;
  double series_tail = 0.0;
  std::optional<Rational> series_exact;
  if (sec.nontransverse == 0) {
    // #Z_{f,a}(Z/p^alpha) = p^((alpha-1)(n-3)) #Z_{f,a}(F_p)
    const cd ratio = ppow(p, static_cast<double>(n - 2) - s.s1);
    if (std::abs(1.0 - ratio) < 1e-13) fail(ErrorCode::PoleAt, "geometric series pole at p^(n-2-s1) = 1");
    series = static_cast<double>(sec.total) * ppow(p, 1.0 - s.s1) / (1.0 - ratio);
    if (s.is_integral()) {
      const int s1 = static_cast<int>(sigma1);
      series_exact = Rational(sec.total) * rational_power(p, 1 - s1) / (1 - rational_power(p, n - 2 - s1));
    }
  } else {
    const ValuationProfile prof = valuation_profile(section_form(X.f, a), p, A);
    for (int alpha = 1; alpha <= A; ++alpha) {
      series += to_double(Rational(prof.projective(alpha))) * ppow(p, -static_cast<double>(alpha) * (s.s1 - 1.0));
    }
    out.truncation = A;
    // lifting bound: #Z_{f,a}(Z/p^alpha) <= t p^((n-3)(alpha-1)) + nt p^((n-2)(alpha-1))
    const double r1 = std::pow(dp, n - 2 - sigma1), r2 = std::pow(dp, n - 1 - sigma1);
    series_tail = static_cast<double>(sec.transverse) * std::pow(dp, -(n - 3)) * std::pow(r1, A + 1) / (1 - r1) +
                  static_cast<double>(sec.nontransverse) * std::pow(dp, -(n - 2)) * std::pow(r2, A + 1) / (1 - r2);
  }

  const cd jump = ppow(p, s.s1 - s.s0) - 1.0;
  const cd damp = 1.0 - ppow(p, static_cast<double>(n - 2) - s.s1);
  const cd head = 1.0 - ppow(p, -s.s0);
  const cd count_term = jump * ppow(p, -s.s1) * zf;
  const cd series_term = jump * damp * series;
  out.value = head + count_term - series_term;
  out.printed_value = head + count_term / (dp - 1.0) - series_term / (dp - 1.0);
  out.error_bound = std::abs(jump) * std::abs(damp) * series_tail + 1e-13 * std::max(1.0, std::abs(out.value));

  if (series_exact) {
    const int s0 = static_cast<int>(s.s0.real()), s1 = static_cast<int>(sigma1);
    const Rational j = rational_power(p, s1 - s0) - 1;
    out.exact = 1 - rational_power(p, -s0) + j * rational_power(p, -s1) * Rational(static_cast<std::int64_t>(zf)) -
                j * (1 - rational_power(p, n - 2 - s1)) * *series_exact;
    out.value = to_complex(*out.exact);
  }
  out.printed_discrepancy = std::abs(out.value - *out.printed_value) > out.error_bound;
  return out;
}

LocalFourierValue fourier_char_direct(const Hypersurface& X, const CharacterSumTable& table, const ComplexPicard& s) {
  const std::uint64_t p = table.p;
  const int n = table.n;
  const int A = table.max_alpha;
  if (n != X.n()) fail(ErrorCode::DimensionMismatch, "character table was built for another n");
  LocalFourierValue out;
  out.p = p;
  out.s = s;
  out.character = table.a;
  out.truncation = A;

  bool exact = s.is_integral();
  for (int alpha = 1; alpha <= A && exact; ++alpha) {
    for (int beta = 0; beta <= alpha && exact; ++beta) exact = table.I[alpha][beta].exact.has_value();
  }
  double rounding = 0.0;
  const cd jump = ppow(p, s.s1 - s.s0) - 1.0;
  cd total = 1.0;
  for (int alpha = 1; alpha <= A; ++alpha) {
    const cd w0 = ppow(p, -static_cast<double>(alpha) * s.s0);
    total += w0 * table.I[alpha][0].value;
    rounding += std::abs(w0) * table.I[alpha][0].error_bound;
    for (int beta = 1; beta <= alpha; ++beta) {
      const cd wb = jump * ppow(p, -static_cast<double>(alpha) * s.s0 - static_cast<double>(beta) * (s.s1 - s.s0));
      total -= wb * table.I[alpha][beta].value;
      rounding += std::abs(wb) * table.I[alpha][beta].error_bound;
    }
  }
  out.value = total;
  if (exact) {
    const int s0 = static_cast<int>(s.s0.real()), s1 = static_cast<int>(s.s1.real());
    const Rational j = rational_power(p, s1 - s0) - 1;
    Rational q = 1;
    for (int alpha = 1; alpha <= A; ++alpha) {
      q += rational_power(p, -alpha * s0) * *table.I[alpha][0].exact;
      for (int beta = 1; beta <= alpha; ++beta) {
        q -= j * rational_power(p, -alpha * s0 - beta * (s1 - s0)) * *table.I[alpha][beta].exact;
      }
    }
    out.value = to_complex(q);
    out.exact = q;
  }
  const LogVolumes w = log_volumes(X.f, p, A);
  out.error_bound = stratified_tail(w, n, s, A) + rounding + 1e-14 * std::abs(out.value);
  return out;
}

LocalFourierValue fourier_char_direct(const Hypersurface& X, const std::optional<CharacterVector>& a,
                                      std::uint64_t p, const ComplexPicard& s, int A, double budget) {
  if (A < 1) {
    LocalFourierValue out;
    out.value = 1.0;
    out.exact = Rational(1);
    out.p = p;
    out.s = s;
    out.character = a;
    out.truncation = 0;
    out.error_bound = stratified_tail(log_volumes(X.f, p, 1), X.n(), s, 0);
    return out;
  }
  return fourier_char_direct(X, character_sum_table(X.f, a, p, A, budget), s);
}

}  // namespace maninlab
