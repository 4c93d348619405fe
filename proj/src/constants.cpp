#include "maninlab/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/random/sobol.hpp>

#include "maninlab/errors.hpp"
#include "maninlab/finite_field.hpp"
#include "maninlab/padic.hpp"
#include "parallel.hpp"

namespace maninlab {

namespace {

constexpr double kBadPrimeTail = 1e-9;

double form_value(const Form& f, std::span<const double> x) {
  double sum = 0.0;
  for (const Term& t : f.terms()) {
    double prod = static_cast<double>(t.coefficient);
    for (int i = 0; i < f.num_variables(); ++i) prod *= std::pow(x[i], t.exponents[i]);
    sum += prod;
  }
  return sum;
}

// r^(n-1) H_inf(r u)^-1 for |u| = 1 and fu = f(u), rewritten with t = r^2/q
// as t^((n-1)/2) / sqrt(q + q^2 fu^2 t^d) so that large r neither overflows nor cancels.
double radial_integrand(int n, int d, double fu, double r) {
  const double q = 1.0 + r * r;
  if (!std::isfinite(q)) return 0.0;
  const double t = r * r / q;
  return std::pow(t, 0.5 * (n - 1)) / std::sqrt(q + q * q * fu * fu * std::pow(t, d));
}

double sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / boost::math::tgamma(0.5 * n);
}

}  // namespace

LocalDensity local_density(const Hypersurface& X, std::uint64_t p) {
  if (!is_prime(p)) fail(ErrorCode::InvalidArgument, "p must be prime");
  const int n = X.n();
  LocalDensity out;
  out.p = p;
  out.convergence_factor = std::pow(1.0 - 1.0 / static_cast<double>(p), 2);
  if (X.is_good(p)) {
    const Rational projective = (1 - rational_power(p, -(n + 1))) / (1 - rational_power(p, -1));
    out.exact = projective + tau_p(X.f, p) / Rational(p - 1);
    out.value = to_double(*out.exact);
    return out;
  }
  const ComplexPicard s{{static_cast<double>(n + 1), 0.0}, {static_cast<double>(n), 0.0}};
  for (int A = 16;; A *= 2) {
    const LocalFourierValue v = fourier_trivial_direct(X, p, s, A);
    out.value = v.value.real();
    out.error = v.error_bound;
    if (out.error <= kBadPrimeTail || A >= 256) break;
  }
  return out;
}

double archimedean_integrand(const Form& f, std::span<const double> x) {
  if (static_cast<int>(x.size()) != f.num_variables()) fail(ErrorCode::DimensionMismatch, "point has the wrong length");
  double norm2 = 0.0;
  for (double xi : x) norm2 += xi * xi;
  const double q = 1.0 + norm2;
  const double fx = form_value(f, x);
  const double inv_d1 = std::sqrt(1.0 / q + fx * fx / std::pow(q, f.degree()));
  return std::pow(q, -0.5 * (f.num_variables() + 1)) / inv_d1;
}

ArchimedeanDensity archimedean_density(const Form& f, const ArchimedeanOptions& options) {
  if (options.samples == 0 || options.shifts < 2) {
    fail(ErrorCode::InvalidArgument, "archimedean density needs samples >= 1 and shifts >= 2");
  }
  const int n = f.num_variables();
  const int d = f.degree();

  // Sobol directions are shared; each replica adds its own uniform shift mod 1.
  std::vector<double> points(options.samples * n);
  {
    boost::random::sobol sobol(n);
    constexpr double scale = 0x1p-64;
    for (double& v : points) v = static_cast<double>(sobol()) * scale;
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> shifts(static_cast<std::size_t>(options.shifts) * n);
  for (double& v : shifts) v = uniform(rng);

  const boost::math::normal_distribution<double> normal;
  const double area = sphere_area(n);
  std::vector<double> means(options.shifts, 0.0);
  parallel_for(static_cast<std::size_t>(options.shifts), options.threads, [&](std::size_t k) {
    boost::math::quadrature::exp_sinh<double> radial;
    std::vector<double> u(n);
    double sum = 0.0;
    for (std::uint64_t i = 0; i < options.samples; ++i) {
      double norm2 = 0.0;
      for (int j = 0; j < n; ++j) {
        double v = points[i * n + j] + shifts[k * n + j];
        if (v >= 1.0) v -= 1.0;
        v = std::clamp(v, 1e-16, 1.0 - 1e-16);
        u[j] = boost::math::quantile(normal, v);
        norm2 += u[j] * u[j];
      }
      const double norm = std::sqrt(norm2);
      for (double& x : u) x /= norm;
      const double fu = form_value(f, u);
      sum += radial.integrate([&](double r) { return radial_integrand(n, d, fu, r); }, 1e-10);
    }
    means[k] = area * sum / static_cast<double>(options.samples);
  });

  ArchimedeanDensity out;
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= options.shifts;
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= options.shifts - 1;
  out.estimate = mean;
  out.std_error = std::sqrt(var / options.shifts);
  out.evaluations = options.samples * static_cast<std::uint64_t>(options.shifts);
  out.converged = out.std_error <= options.target_relative_error * std::abs(mean);
  return out;
}

TamagawaBreakdown tamagawa_number(const Hypersurface& X, std::uint64_t P_max, const ArchimedeanOptions& options) {
  if (P_max < 100) fail(ErrorCode::InvalidArgument, "P_max must be at least 100");
  const int n = X.n();
  TamagawaBreakdown t;
  t.n = n;
  t.P_max = P_max;
  t.alpha_cone = Rational(1, n * (n + 1));

  const ArchimedeanDensity inf = archimedean_density(X.f, options);
  t.tau_infinity = inf.estimate;
  t.tau_infinity_error = inf.std_error;
  t.archimedean_converged = inf.converged;

  const std::vector<std::uint64_t> primes = primes_up_to(P_max);
  t.local.resize(primes.size());
  parallel_for(primes.size(), options.threads, [&](std::size_t i) { t.local[i] = local_density(X, primes[i]); });

  // Running sums of logs in prime order; checkpoints at P = 100 * 2^k and P_max.
  double log_reg = 0.0, log_raw = 0.0, bad_rel_error = 0.0;
  std::uint64_t next_checkpoint = 100;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const LocalDensity& ld = t.local[i];
    log_reg += std::log(ld.convergence_factor * ld.value);
    log_raw += std::log(ld.value);
    bad_rel_error += ld.error / ld.value;
    const bool last = i + 1 == primes.size();
    if (last || primes[i + 1] > next_checkpoint) {
      const std::uint64_t P = last ? P_max : next_checkpoint;
      if (t.partial_products.empty() || t.partial_products.back().P != P) {
        t.partial_products.push_back({P, std::exp(log_reg), std::exp(log_raw)});
      }
      while (next_checkpoint <= (last ? P_max : primes[i + 1])) next_checkpoint *= 2;
    }
  }
  t.euler_product = std::exp(log_reg);

  // |log((1-1/p)^2 H_p)| <= K / p^2 on the top half of the range; the omitted
  // primes then move the log of the product by at most K sum_{p > P} p^-2 <= K / P.
  double K = 0.0;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (2 * primes[i] <= P_max) continue;
    const double p = static_cast<double>(primes[i]);
    K = std::max(K, std::abs(std::log(t.local[i].convergence_factor * t.local[i].value)) * p * p);
  }
  t.tau = t.tau_infinity * t.euler_product;
  const double tail_rel = std::expm1(K / static_cast<double>(P_max));
  t.tail_estimate = t.tau * tail_rel;
  t.tau_error = t.tau * (t.tau_infinity_error / t.tau_infinity + bad_rel_error) + t.tail_estimate;
  t.theta = to_double(t.alpha_cone) * t.brauer * t.tau;
  return t;
}

double expected_leading_constant(const TamagawaBreakdown& t) {
  if (t.n <= 0) fail(ErrorCode::InvalidArgument, "breakdown has no dimension");
  return t.tau / (static_cast<double>(t.n) * (t.n + 1));
}

}  // namespace maninlab
