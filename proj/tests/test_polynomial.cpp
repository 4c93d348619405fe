#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "maninlab/errors.hpp"
#include "maninlab/polynomial.hpp"

using namespace maninlab;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

const HomogeneousPolynomial conic = HomogeneousPolynomial::parse("x1^2+x2^2+x3^2");

}  // namespace

TEST_CASE("parse the reference conic") {
  CHECK(conic.num_variables() == 3);
  CHECK(conic.degree() == 2);
  CHECK(conic.terms().size() == 3);
  CHECK(conic.content() == 1);
}

TEST_CASE("parse divides out the content") {
  const auto f = HomogeneousPolynomial::parse("2x1^2+2x2^2", 3);
  REQUIRE(f.terms().size() == 2);
  CHECK(f.terms()[0].coefficient == 1);
  CHECK(f.terms()[1].coefficient == 1);
}

TEST_CASE("parse normalizes the leading sign") {
  const auto f = HomogeneousPolynomial::parse("-x1^2+3x2*x3-x3^2");
  CHECK(f.terms()[0].coefficient > 0);
}

TEST_CASE("parse errors") {
  CHECK(code_of([] { HomogeneousPolynomial::parse("x1^2+x2^3"); }) == ErrorCode::NonHomogeneous);
  CHECK(code_of([] { HomogeneousPolynomial::parse("x1+x2+x3"); }) == ErrorCode::DegreeTooSmall);
  CHECK(code_of([] { HomogeneousPolynomial::parse("x1^2+x2^2"); }) == ErrorCode::TooFewVariables);
  CHECK(code_of([] { HomogeneousPolynomial::parse("x1^2-x1^2+x2*x3-x3*x2"); }) == ErrorCode::ZeroPolynomial);
  CHECK(code_of([] { HomogeneousPolynomial::parse("x1^^2"); }) == ErrorCode::Parse);
}

TEST_CASE("structured terms equal the text form") {
  const auto g = HomogeneousPolynomial::from_terms(3, {{1, {0, 0, 2}}, {1, {2, 0, 0}}, {1, {0, 2, 0}}});
  CHECK(g == conic);
}

TEST_CASE("evaluation over Z, Z/m and Q") {
  const std::vector<std::int64_t> x{1, 2, 2};
  CHECK(conic.evaluate(std::span<const std::int64_t>(x)) == 9);
  const std::vector<std::uint64_t> r{1, 1, 1};
  CHECK(conic.evaluate_mod(r, 3) == 0);
  const std::vector<Rational> q{Rational(1, 3), 0, 0};
  CHECK(conic.evaluate(std::span<const Rational>(q)) == Rational(1, 9));
}

TEST_CASE("homogeneity holds exactly") {
  const auto f = HomogeneousPolynomial::parse("x1^3+2x1*x2*x3-5x3^3");
  const std::vector<Rational> x{Rational(2, 7), Rational(-3, 5), 4};
  std::vector<Rational> lx;
  const Rational lambda(-11, 3);
  for (const auto& xi : x) lx.push_back(lambda * xi);
  CHECK(f.evaluate(std::span<const Rational>(lx)) == rational_pow(lambda, 3) * f.evaluate(std::span<const Rational>(x)));
}

TEST_CASE("evaluation dimension mismatch") {
  const std::vector<std::int64_t> x{1, 2};
  CHECK(code_of([&] { conic.evaluate(std::span<const std::int64_t>(x)); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("gradients") {
  const auto g = conic.gradient();
  REQUIRE(g.size() == 3);
  CHECK(g[0] == Form(3, 1, {{2, {1, 0, 0}}}));
  const auto h = HomogeneousPolynomial::parse("x1*x2*x3").gradient();
  CHECK(h[0] == Form(3, 2, {{1, {0, 1, 1}}}));
  CHECK(h[1] == Form(3, 2, {{1, {1, 0, 1}}}));
  CHECK(h[2] == Form(3, 2, {{1, {1, 1, 0}}}));
}

TEST_CASE("bad primes") {
  CHECK(bad_primes(conic, 20).primes() == std::vector<std::uint64_t>{2});
  const std::vector<std::uint64_t> extra{5};
  const BadPrimeSet with_user = bad_primes(conic, 20, extra);
  CHECK(with_user.primes() == std::vector<std::uint64_t>{2, 5});
  CHECK(with_user.provenance(5) == PrimeProvenance::UserDeclared);
  CHECK(with_user.provenance(2) == PrimeProvenance::Detected);
  CHECK(bad_primes(HomogeneousPolynomial::parse("x1^3+x2^3+x3^3"), 10).primes() == std::vector<std::uint64_t>{3});
}

TEST_CASE("singular points over the quadratic extension") {
  // (x1^2 + x2^2)^2 + x3^4 is singular at (1, +-i, 0), which is rational only when -1 is a square.
  const auto f = HomogeneousPolynomial::parse("x1^4+2x1^2*x2^2+x2^4+x3^4");
  CHECK_FALSE(has_singular_point(f, 3, 1));
  CHECK(has_singular_point(f, 3, 2));
  CHECK(has_singular_point(f, 5, 1));
  CHECK(bad_primes(f, 7).contains(3));
  CHECK(bad_primes(HomogeneousPolynomial::parse("x1^2+2x2^2+x3^2-x1*x3"), 20).primes() ==
        std::vector<std::uint64_t>{2, 3});
  CHECK(has_singular_point(conic, 2, 1));
  CHECK_FALSE(has_singular_point(conic, 3, 2));
}

TEST_CASE("hypersurface context") {
  const Hypersurface X = Hypersurface::with_detected_primes(conic);
  CHECK(X.n() == 3);
  CHECK(X.d() == 2);
  CHECK_FALSE(X.is_good(2));
  CHECK(X.is_good(3));
}
