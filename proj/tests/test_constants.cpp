#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "maninlab/constants.hpp"
#include "maninlab/errors.hpp"

using namespace maninlab;

namespace {

const Hypersurface X = Hypersurface::with_detected_primes(HomogeneousPolynomial::parse("x1^2+x2^2+x3^2"));

}  // namespace

TEST_CASE("local densities at good primes are exact") {
  const LocalDensity d3 = local_density(X, 3);
  REQUIRE(d3.exact.has_value());
  CHECK(*d3.exact == Rational(52, 27));
  const LocalDensity d5 = local_density(X, 5);
  REQUIRE(d5.exact.has_value());
  CHECK(*d5.exact == Rational(186, 125));
  CHECK(d5.error == 0.0);
  CHECK(d5.convergence_factor == doctest::Approx(0.64));
}

TEST_CASE("local density at the bad prime carries a small tail") {
  const LocalDensity d2 = local_density(X, 2);
  CHECK_FALSE(d2.exact.has_value());
  CHECK(d2.error <= 1e-6);
  CHECK(d2.value > 1.0);
}

TEST_CASE("archimedean integrand") {
  const std::vector<double> origin(3, 0.0);
  CHECK(archimedean_integrand(X.f, origin) == doctest::Approx(1.0));
  std::mt19937_64 rng(1);
  std::cauchy_distribution<double> dist(0.0, 3.0);
  double smallest = INFINITY;
  for (int i = 0; i < 1000000; ++i) {
    const std::vector<double> x{dist(rng), dist(rng), dist(rng)};
    smallest = std::min(smallest, archimedean_integrand(X.f, x));
  }
  CHECK(smallest > 0.0);
}

TEST_CASE("archimedean density is stable under refinement") {
  ArchimedeanOptions coarse;
  coarse.samples = 1024;
  coarse.shifts = 8;
  ArchimedeanOptions fine = coarse;
  fine.samples = 4096;
  const ArchimedeanDensity a = archimedean_density(X.f, coarse);
  const ArchimedeanDensity b = archimedean_density(X.f, fine);
  CHECK(std::abs(a.estimate - b.estimate) / b.estimate < 5e-4);
  CHECK(b.estimate == doctest::Approx(10.5918818609).epsilon(1e-6));
}

TEST_CASE("archimedean density of a non-radial form is stable to three digits") {
  const auto g = HomogeneousPolynomial::parse("x1^2+2x2^2+x3^2-x1*x3");
  ArchimedeanOptions o;
  const ArchimedeanDensity a = archimedean_density(g, o);
  o.samples *= 4;
  const ArchimedeanDensity b = archimedean_density(g, o);
  CHECK(std::abs(a.estimate - b.estimate) / b.estimate < 5e-4);
  CHECK(a.std_error > 0.0);
  CHECK(std::abs(a.estimate - b.estimate) < 4 * a.std_error);
}

TEST_CASE("archimedean density is deterministic across thread counts") {
  ArchimedeanOptions o;
  o.samples = 512;
  o.shifts = 6;
  o.threads = 1;
  const auto g = HomogeneousPolynomial::parse("x1^2+2x2^2+x3^2-x1*x3");
  const ArchimedeanDensity a = archimedean_density(g, o);
  o.threads = 8;
  const ArchimedeanDensity b = archimedean_density(g, o);
  CHECK(a.estimate == b.estimate);
  CHECK(a.std_error == b.std_error);
}

TEST_CASE("tamagawa number assembly") {
  const TamagawaBreakdown t = tamagawa_number(X, 1000);
  CHECK(t.tau > 0.0);
  CHECK(t.theta > 0.0);
  CHECK(t.alpha_cone == Rational(1, 12));
  CHECK(t.brauer == 1);
  CHECK(t.theta == doctest::Approx(t.tau / 12.0));
  CHECK(expected_leading_constant(t) == doctest::Approx(t.tau / 12.0));
  CHECK(t.local.size() == primes_up_to(1000).size());
  REQUIRE(t.partial_products.size() >= 2);
  CHECK(t.partial_products.back().P == 1000);

  const TamagawaBreakdown u = tamagawa_number(X, 2000);
  CHECK(u.tail_estimate < t.tail_estimate);
  CHECK(std::abs(u.tau - t.tau) <= t.tail_estimate);
}

TEST_CASE("regularized local factors are 1 + O(p^-2)") {
  double worst = 0.0;
  for (std::uint64_t p : primes_up_to(2000)) {
    if (p <= 100) continue;
    const LocalDensity d = local_density(X, p);
    worst = std::max(worst, std::abs(d.convergence_factor * d.value - 1.0) * double(p) * double(p));
  }
  CHECK(worst < 10.0);
}

TEST_CASE("tamagawa rejects tiny truncations") { CHECK_THROWS_AS(tamagawa_number(X, 50), Error); }

TEST_CASE("expected leading constant") {
  TamagawaBreakdown t;
  t.n = 3;
  t.tau = 12.0;
  CHECK(expected_leading_constant(t) == doctest::Approx(1.0));
  t.n = 4;
  t.tau = 20.0;
  CHECK(expected_leading_constant(t) == doctest::Approx(1.0));
}
