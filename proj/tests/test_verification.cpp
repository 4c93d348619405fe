#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "maninlab/verification.hpp"

using namespace maninlab;

namespace {

const Hypersurface X = Hypersurface::with_detected_primes(HomogeneousPolynomial::parse("x1^2+x2^2+x3^2"));

bool has_check(const VerificationReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return true;
  return false;
}

}  // namespace

TEST_CASE("volumes suite passes at p = 3") {
  VerificationOptions o;
  o.primes = {3};
  const VerificationReport r = verify_volumes(X, o);
  CHECK(r.passed());
  CHECK(r.checks.size() >= 6);
  CHECK(has_check(r, "mean value lemma"));
}

TEST_CASE("bad primes are skipped, not failed") {
  VerificationOptions o;
  o.primes = {2};
  const VerificationReport r = verify_volumes(X, o);
  CHECK(r.passed());
  bool skipped = false;
  for (const auto& c : r.checks) skipped = skipped || (!c.gating && c.note.rfind("skipped", 0) == 0);
  CHECK(skipped);
}

TEST_CASE("trivial Fourier suite") {
  VerificationOptions o;
  o.primes = {3, 5};
  CHECK(verify_fourier_trivial(X, o).passed());
}

TEST_CASE("character suite flags the printed display without failing") {
  VerificationOptions o;
  o.primes = {3};
  o.budget = 1e6;
  const VerificationReport r = verify_fourier_char(X, o);
  CHECK(r.passed());
  bool printed_failed = false;
  for (const auto& c : r.checks) {
    if (c.name == "printed display vs direct") {
      CHECK_FALSE(c.gating);
      printed_failed = printed_failed || !c.passed;
    }
  }
  CHECK(printed_failed);
}

TEST_CASE("hensel suite") {
  VerificationOptions o;
  o.primes = {3, 5};
  CHECK(verify_hensel(X, o).passed());
}

TEST_CASE("bounds suite on a small box") {
  VerificationOptions o;
  o.character_norm = 2;
  o.bounds_max_prime = 7;
  const VerificationReport r = verify_bounds(X, o);
  CHECK(r.passed());
  CHECK(has_check(r, "weil bound on Z_f"));
}

TEST_CASE("default characters") {
  const auto chars = default_characters(3);
  CHECK(chars.size() == 8);
  CHECK(chars.back().a == std::vector<std::int64_t>{1, 2, 3});
  const auto four = default_characters(4);
  CHECK(four.back().a == std::vector<std::int64_t>{1, 2, 3, 0});
}
