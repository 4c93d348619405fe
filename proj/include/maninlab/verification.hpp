#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "maninlab/finite_field.hpp"
#include "maninlab/padic.hpp"
#include "maninlab/polynomial.hpp"

namespace maninlab {

struct VerificationCheck {
  std::string suite;
  std::string name;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::string expected;
  std::string actual;
  double tolerance = 0.0;  // 0 means exact equality or an exact inequality
  bool passed = false;
  bool gating = true;  // informational checks never fail the report
  std::string note;
};

struct VerificationReport {
  std::vector<VerificationCheck> checks;

  std::size_t passed_count() const;
  std::size_t failed_count() const;  // gating failures only
  bool passed() const { return failed_count() == 0; }
  void append(const VerificationReport& other);
};

struct VerificationOptions {
  std::vector<std::uint64_t> primes;  // empty: 3, 5, 7
  std::vector<ComplexPicard> s;       // empty: per-suite default grid
  int trivial_truncation = 12;
  std::int64_t character_norm = 5;   // A_0: sup norm of the character vectors in the bounds suite
  std::uint64_t bounds_max_prime = 13;
  double budget = kDefaultCountBudget;
};

/// Exact closed = direct stratum volumes, sphere partitions, mean-value lemma.
VerificationReport verify_volumes(const Hypersurface& X, const VerificationOptions& options = {});
/// Trivial character: |closed - direct| <= direct tail bound.
VerificationReport verify_fourier_trivial(const Hypersurface& X, const VerificationOptions& options = {});
/// Character sums I(alpha, beta) and the non-trivial Fourier identity; the
/// printed constant is reported as an informational check.
VerificationReport verify_fourier_char(const Hypersurface& X, const VerificationOptions& options = {});
/// Hensel multiplicativity mod p^2 and the lifting fast path against exhaustive counts.
VerificationReport verify_hensel(const Hypersurface& X, const VerificationOptions& options = {});
/// Lifting, transversality and Weil-type bounds over all primitive a with |a| <= A_0.
VerificationReport verify_bounds(const Hypersurface& X, const VerificationOptions& options = {});
VerificationReport verify_all(const Hypersurface& X, const VerificationOptions& options = {});

/// Characters of the identity grid: +-e_i, (1,1,0,...), (1,2,3,...) truncated to n.
std::vector<CharacterVector> default_characters(int n);

}  // namespace maninlab
