#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maninlab/constants.hpp"
#include "maninlab/enumeration.hpp"
#include "maninlab/verification.hpp"

namespace maninlab {

// Field names here are the stable interface of the JSON and CSV artifacts.
// Reals carry 12 significant digits.

struct FiniteFieldRow {
  std::uint64_t p = 0;
  bool good = true;
  std::uint64_t points = 0;    // #Z_f(F_p)
  Rational tau;                // tau_p(f)
  std::string points_mod_p2;   // #Z_f(Z/p^2), empty at bad primes
  std::string projective_space;  // #P^(n-2)(F_p)
  bool weil = true;
};

std::vector<FiniteFieldRow> finite_field_table(const Hypersurface& X, const std::vector<std::uint64_t>& primes,
                                               double budget);

std::string count_json(const CountRecord& record);
std::string fit_json(const FitResult& fit);
/// Breakdown with the per-prime table cut to the first `table_primes` primes.
std::string theta_json(const TamagawaBreakdown& t, std::size_t table_primes = 20);
std::string verification_json(const VerificationReport& report);
std::string finite_field_json(const std::vector<FiniteFieldRow>& rows);
std::string finite_field_csv(const std::vector<FiniteFieldRow>& rows);

}  // namespace maninlab
