#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maninlab/polynomial.hpp"

namespace maninlab {

enum class OutputFormat { Csv, Json };

// Everything an experiment depends on. Serialized as YAML; every field has a
// default so a config may be as short as `polynomial: x1^2+x2^2+x3^2`.
struct ExperimentConfig {
  // Exactly one of the two polynomial forms is set; the form is preserved on save.
  std::string polynomial_text;
  std::vector<Term> polynomial_terms;
  int n = 0;  // 0: inferred from the polynomial

  std::vector<std::uint64_t> bad_primes;  // user-declared, added to the detected ones
  std::uint64_t bad_prime_search_bound = 50;

  std::optional<double> s0;  // default anticanonical (n + 1, n)
  std::optional<double> s1;

  std::string grid = "100:100000:25";  // start:stop:steps, geometric
  std::optional<double> B;             // single bound for `count`
  std::vector<std::uint64_t> primes = {3, 5, 7};

  int trivial_truncation = 12;
  int series_cutoff = 8;
  std::int64_t character_norm = 5;
  std::uint64_t bounds_max_prime = 13;
  double count_budget = 1e8;
  double candidate_budget = 2e10;

  std::uint64_t P_max = 10000;
  std::uint64_t qmc_samples = 4096;
  int qmc_shifts = 16;
  std::uint64_t seed = 20240607;

  int threads = 0;
  std::string cache_dir;  // empty: $MANINLAB_CACHE, then ~/.cache/maninlab
  bool cache_enabled = true;
  std::uint64_t cache_quota_bytes = 256ull << 20;
  OutputFormat format = OutputFormat::Json;
  bool timings = false;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

  HomogeneousPolynomial polynomial() const;
  int dimension() const;
  double height_s0() const;
  double height_s1() const;
};

ExperimentConfig parse_config(const std::string& yaml_text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& config);

OutputFormat parse_format(const std::string& text);
std::string format_name(OutputFormat format);

}  // namespace maninlab
