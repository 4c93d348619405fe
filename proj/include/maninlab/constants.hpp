#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "maninlab/arith.hpp"
#include "maninlab/polynomial.hpp"

namespace maninlab {

struct LocalDensity {
  std::uint64_t p = 0;
  std::optional<Rational> exact;  // good primes
  double value = 0.0;
  double error = 0.0;  // tail of the stratified sum at bad primes
  double convergence_factor = 0.0;  // (1 - 1/p)^2
};

/// H_hat_p((n+1, n); psi_0): closed form at good p, stratified sum at bad p.
LocalDensity local_density(const Hypersurface& X, std::uint64_t p);

struct ArchimedeanOptions {
  std::uint64_t samples = 4096;  // Sobol points per shift
  int shifts = 16;               // Cranley-Patterson replicas
  std::uint64_t seed = 20240607;
  double target_relative_error = 1e-4;
  int threads = 0;
};

struct ArchimedeanDensity {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t evaluations = 0;
  bool converged = false;  // relative std_error <= target
};

/// H_infinity((n+1, n); x)^-1 at x in R^n.
double archimedean_integrand(const Form& f, std::span<const double> x);

/// Integral of H_infinity((n+1, n); x)^-1 over R^n, in polar form: randomized
/// Sobol directions on the sphere times an exp-sinh radial quadrature.
ArchimedeanDensity archimedean_density(const Form& f, const ArchimedeanOptions& options = {});

struct PartialProduct {
  std::uint64_t P = 0;
  double regularized = 0.0;  // prod (1 - 1/p)^2 H_hat_p
  double raw = 0.0;          // prod H_hat_p
};

struct TamagawaBreakdown {
  int n = 0;
  double tau_infinity = 0.0;
  double tau_infinity_error = 0.0;
  std::vector<LocalDensity> local;  // every p <= P_max
  std::uint64_t P_max = 0;
  double euler_product = 0.0;
  double tail_estimate = 0.0;  // relative size of the omitted primes
  std::vector<PartialProduct> partial_products;
  double tau = 0.0;
  double tau_error = 0.0;
  Rational alpha_cone;
  int brauer = 1;
  double theta = 0.0;
  bool archimedean_converged = false;
};

TamagawaBreakdown tamagawa_number(const Hypersurface& X, std::uint64_t P_max, const ArchimedeanOptions& options = {});

/// tau / (n (n + 1)).
double expected_leading_constant(const TamagawaBreakdown& t);

}  // namespace maninlab
