#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "maninlab/errors.hpp"
#include "maninlab/padic.hpp"

using namespace maninlab;

namespace {

const Hypersurface X = Hypersurface::with_detected_primes(HomogeneousPolynomial::parse("x1^2+x2^2+x3^2"));
const CharacterVector e1 = CharacterVector::unit(3, 0);

ComplexPicard real_s(double s0, double s1) { return {{s0, 0.0}, {s1, 0.0}}; }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("stratum labels and height exponents") {
  CHECK(StratumDescriptor::u0().height_exponents() == std::pair{0, 0});
  CHECK(StratumDescriptor::u(2).height_exponents() == std::pair{2, 0});
  CHECK(StratumDescriptor::u1(2).height_exponents() == std::pair{0, 2});
  CHECK(StratumDescriptor::u1(3, 1).height_exponents() == std::pair{2, 1});
  CHECK_THROWS_AS(StratumDescriptor::u1(2, 2), Error);
  CHECK_THROWS_AS(StratumDescriptor::u(0), Error);
}

TEST_CASE("stratum volumes at p = 3") {
  CHECK(stratum_volume_direct(X.f, 3, StratumDescriptor::u0()) == 1);
  CHECK(stratum_volume_direct(X.f, 3, StratumDescriptor::u1(1)) == 8);
  CHECK(stratum_volume_direct(X.f, 3, StratumDescriptor::u(1)) == 18);
  CHECK(stratum_volume_closed(X, 3, StratumDescriptor::u1(1)) == 8);
  CHECK(stratum_volume_closed(X, 3, StratumDescriptor::u(1)) == 18);
  CHECK(stratum_volume_closed(X, 3, StratumDescriptor::u1(2, 1)) == 144);
  CHECK(stratum_volume_direct(X.f, 3, StratumDescriptor::u1(2, 1)) == 144);
}

TEST_CASE("closed volumes need a good prime") {
  CHECK(code_of([] { stratum_volume_closed(X, 2, StratumDescriptor::u(1)); }) == ErrorCode::BadPrime);
}

TEST_CASE("direct volumes respect the budget") {
  CHECK(code_of([] { stratum_volume_direct(X.f, 101, StratumDescriptor::u(3), 0, 1e6); }) ==
        ErrorCode::BudgetExceeded);
}

TEST_CASE("mean value lemma") {
  CHECK(mean_value_psi(2, 5) == 1);
  CHECK(mean_value_psi(Rational(1, 5), 5) == Rational(-1, 4));
  CHECK(mean_value_psi(Rational(1, 25), 5) == 0);
  CHECK(mean_value_psi(0, 7) == 1);
}

TEST_CASE("cyclotomic reduction") {
  // 1 + zeta + zeta^2 = 0 for a primitive cube root of unity.
  const std::vector<std::int64_t> hist{1, 1, 1};
  const auto r = cyclotomic_rational(hist, 3, 1);
  REQUIRE(r.has_value());
  CHECK(*r == 0);
  const std::vector<std::int64_t> single{0, 1, 0};
  CHECK_FALSE(cyclotomic_rational(single, 3, 1).has_value());
  // zeta + zeta^2 = -1.
  const std::vector<std::int64_t> pair{0, 1, 1};
  CHECK(*cyclotomic_rational(pair, 3, 1) == -1);
}

TEST_CASE("incidence volumes") {
  CHECK(incidence_volume(X, e1, 5, 1, 1) == Rational(8, 125));
  CHECK(incidence_volume(X, e1, 5, 2, 1) == Rational(8, 625));
  CHECK(incidence_volume_direct(X.f, e1, 5, 1, 1) == Rational(8, 125));
  CHECK(incidence_volume_direct(X.f, e1, 5, 2, 1) == Rational(8, 625));
  CHECK(incidence_volume(X, e1, 3, 1, 1) == 0);
}

TEST_CASE("character sums") {
  CHECK(std::abs(character_sum_I(X.f, e1, 3, 1, 0).value - std::complex<double>(-1.0)) < 1e-9);
  CHECK(std::abs(character_sum_I(X.f, e1, 3, 2, 0).value) < 1e-9);
  CHECK(std::abs(character_sum_I(X.f, e1, 5, 2, 1).value) < 1e-9);
  const CharacterSumTable t = character_sum_table(X.f, CharacterVector({1, 2, 3}), 5, 3);
  for (int alpha = 1; alpha <= 3; ++alpha) {
    for (int beta = 1; beta < alpha; ++beta) CHECK(std::abs(t.I[alpha][beta].value) < 1e-9);
  }
}

TEST_CASE("trivial character closed form") {
  const LocalFourierValue v = fourier_trivial_closed(X, 3, real_s(4, 3));
  REQUIRE(v.exact.has_value());
  CHECK(*v.exact == Rational(52, 27));
  const LocalFourierValue w = fourier_trivial_closed(X, 3, real_s(4, 4));
  REQUIRE(w.exact.has_value());
  CHECK(*w.exact == Rational(40, 27));
  CHECK(code_of([] { fourier_trivial_closed(X, 3, real_s(3, 2)); }) == ErrorCode::PoleAt);
  CHECK(code_of([] { fourier_trivial_closed(X, 2, real_s(4, 3)); }) == ErrorCode::BadPrime);
}

TEST_CASE("trivial character forms agree at random complex s") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> re(0.2, 3.0), im(-5.0, 5.0);
  for (int i = 0; i < 20; ++i) {
    const ComplexPicard s{{3 + re(rng), im(rng)}, {2 + re(rng), im(rng)}};
    for (std::uint64_t p : {3, 5, 7}) {
      const LocalFourierValue v = fourier_trivial_closed(X, p, s);
      REQUIRE(v.alternate_form.has_value());
      CHECK(std::abs(v.value - *v.alternate_form) <= 1e-12 * std::max(1.0, std::abs(v.value)));
    }
  }
}

TEST_CASE("trivial character direct sum") {
  const LocalFourierValue d = fourier_trivial_direct(X, 3, real_s(4, 3), 12);
  CHECK(std::abs(d.value.real() - 52.0 / 27.0) <= d.error_bound);
  CHECK(d.error_bound < 1e-4);
  const LocalFourierValue zero = fourier_trivial_direct(X, 3, real_s(4, 3), 0);
  CHECK(zero.value.real() == 1.0);
  const LocalFourierValue a8 = fourier_trivial_direct(X, 5, real_s(4.5, 3.5), 8);
  const LocalFourierValue a10 = fourier_trivial_direct(X, 5, real_s(4.5, 3.5), 10);
  CHECK(a10.error_bound < a8.error_bound);
}

TEST_CASE("non-trivial character closed form") {
  const LocalFourierValue v = fourier_char_closed(X, e1, 5, real_s(4, 3));
  const double p = 5;
  // Corrected display: 1 - p^-s0 + (p^(s1-s0) - 1) p^-s1 #Z_f - (p^(s1-s0) - 1)(1 - p^(n-s1-2)) sum p^(-a(s1-1)) #Z_a.
  const double k = std::pow(p, -1) - 1;
  const double series = 2.0 / 24.0;
  const double corrected = 1 - std::pow(p, -4) + k * std::pow(p, -3) * 6 - k * (1 - std::pow(p, -2)) * series;
  CHECK(v.value.real() == doctest::Approx(corrected).epsilon(1e-12));
  REQUIRE(v.printed_value.has_value());
  const double printed = 1 - std::pow(p, -4) + k / 4 * std::pow(p, -3) * 6 - k / 4 * (1 - std::pow(p, -2)) * series;
  CHECK(v.printed_value->real() == doctest::Approx(printed).epsilon(1e-12));
  CHECK(v.printed_discrepancy);

  const LocalFourierValue empty = fourier_char_closed(X, e1, 3, real_s(4, 3));
  CHECK(empty.value.real() == doctest::Approx(1 - std::pow(3.0, -4) + (1.0 / 3 - 1) * std::pow(3.0, -3) * 4));

  const LocalFourierValue diagonal = fourier_char_closed(X, e1, 5, real_s(4, 4));
  CHECK(diagonal.value.real() == doctest::Approx(1 - std::pow(p, -4)));
}

TEST_CASE("non-trivial character direct sum") {
  const LocalFourierValue closed = fourier_char_closed(X, e1, 5, real_s(4, 3));
  const LocalFourierValue direct = fourier_char_direct(X, e1, 5, real_s(4, 3), 3);
  CHECK(std::abs(closed.value - direct.value) <= closed.error_bound + direct.error_bound);
  CHECK(direct.value.real() == doctest::Approx(1.024).epsilon(1e-3));

  // A trivial character reduces the direct sum to the trivial transform.
  const LocalFourierValue psi0 = fourier_char_direct(X, std::nullopt, 3, real_s(4, 3), 5);
  const LocalFourierValue triv = fourier_trivial_direct(X, 3, real_s(4, 3), 5);
  CHECK(std::abs(psi0.value - triv.value) < 1e-9);
}

TEST_CASE("positivity domination") {
  const ComplexPicard s{{4.5, 2.0}, {3.5, -1.0}};
  const LocalFourierValue v = fourier_char_closed(X, CharacterVector({1, 2, 3}), 7, s);
  const LocalFourierValue dom = fourier_trivial_closed(X, 7, real_s(4.5, 3.5));
  CHECK(std::abs(v.value) <= dom.value.real() + 1e-12);
}
