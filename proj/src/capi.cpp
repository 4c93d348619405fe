#include "maninlab/maninlab.h"

#include <cmath>
#include <cstring>
#include <memory>
#include <sstream>
#include <string>

#include <yaml-cpp/yaml.h>

#include "maninlab/cache.hpp"
#include "maninlab/config.hpp"
#include "maninlab/constants.hpp"
#include "maninlab/enumeration.hpp"
#include "maninlab/errors.hpp"
#include "maninlab/heights.hpp"
#include "maninlab/padic.hpp"
#include "maninlab/report.hpp"
#include "maninlab/verification.hpp"

using namespace maninlab;

struct ml_experiment {
  ExperimentConfig config;

  // Bad-prime detection costs seconds, and a cache hit never needs it.
  const Hypersurface& X() {
    if (!surface) {
      surface = std::make_unique<Hypersurface>(Hypersurface::with_detected_primes(
          config.polynomial(), config.bad_prime_search_bound, config.bad_primes));
    }
    return *surface;
  }
  const HomogeneousPolynomial& f() {
    if (!poly) poly = std::make_unique<HomogeneousPolynomial>(config.polynomial());
    return *poly;
  }
  std::unique_ptr<Hypersurface> surface;
  std::unique_ptr<HomogeneousPolynomial> poly;

  PicardParameter s() const { return {config.height_s0(), config.height_s1()}; }
  EnumerationOptions enumeration() const {
    EnumerationOptions o;
    o.threads = config.threads;
    o.candidate_budget = config.candidate_budget;
    o.timings = config.timings;
    return o;
  }
};

namespace {

thread_local std::string g_last_error;

ml_status record(ErrorCode code, const std::string& message) {
  g_last_error = message;
  return static_cast<ml_status>(static_cast<int>(code));
}

template <class F>
ml_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return ML_OK;
  } catch (const Error& e) {
    return record(e.code(), e.what());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ML_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return ML_ERR_INTERNAL;
  }
}

char* copy_out(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (!p) fail(ErrorCode::InvalidArgument, std::string(what) + " must not be null");
}

// The config with the knobs that cannot change an artifact cleared.
std::string cache_material(const ExperimentConfig& c, const std::string& command) {
  ExperimentConfig k = c;
  k.threads = 0;
  k.cache_dir.clear();
  k.cache_enabled = true;
  k.cache_quota_bytes = 0;
  return command + "\n" + serialize_config(k);
}

// Serves `compute` through the artifact cache unless caching is off or
// timings make the artifact run-dependent.
template <class F>
std::string cached(const ml_experiment& exp, const std::string& command, int* hit, F&& compute) {
  if (hit) *hit = 0;
  if (!exp.config.cache_enabled || exp.config.timings) return compute();
  const ArtifactCache cache(ArtifactCache::resolve_dir(exp.config.cache_dir), exp.config.cache_quota_bytes);
  const std::string key = ArtifactCache::key(cache_material(exp.config, command));
  if (auto value = cache.lookup(key)) {
    if (hit) *hit = 1;
    return *value;
  }
  std::string value = compute();
  cache.store(key, value);
  return value;
}

ml_status make_experiment(ExperimentConfig config, ml_experiment** out) {
  return guarded([&] {
    require(out, "out");
    auto exp = std::make_unique<ml_experiment>();
    exp->config = std::move(config);
    exp->config.polynomial();
    *out = exp.release();
  });
}

VerificationOptions verification_options(const ExperimentConfig& c) {
  VerificationOptions o;
  o.primes = c.primes;
  o.trivial_truncation = c.trivial_truncation;
  o.character_norm = c.character_norm;
  o.bounds_max_prime = c.bounds_max_prime;
  o.budget = c.count_budget;
  if (c.s0 || c.s1) o.s = {ComplexPicard{{c.height_s0(), 0.0}, {c.height_s1(), 0.0}}};
  return o;
}

}  // namespace

extern "C" {

const char* ml_version(void) { return kCodeVersion; }

const char* ml_last_error(void) { return g_last_error.c_str(); }

const char* ml_status_name(ml_status status) {
  if (status == ML_OK) return "Ok";
  if (status == ML_ERR_INTERNAL) return "Internal";
  return error_code_name(static_cast<ErrorCode>(status));
}

void ml_string_free(char* s) { std::free(s); }

ml_status ml_experiment_load(const char* path, ml_experiment** out) {
  ExperimentConfig c;
  const ml_status st = guarded([&] {
    require(path, "path");
    c = load_config(path);
  });
  return st != ML_OK ? st : make_experiment(std::move(c), out);
}

ml_status ml_experiment_parse(const char* yaml, ml_experiment** out) {
  ExperimentConfig c;
  const ml_status st = guarded([&] {
    require(yaml, "yaml");
    c = parse_config(yaml);
  });
  return st != ML_OK ? st : make_experiment(std::move(c), out);
}

ml_status ml_experiment_from_polynomial(const char* polynomial, ml_experiment** out) {
  ExperimentConfig c;
  const ml_status st = guarded([&] {
    require(polynomial, "polynomial");
    c.polynomial_text = polynomial;
    c.polynomial();
  });
  return st != ML_OK ? st : make_experiment(std::move(c), out);
}

void ml_experiment_free(ml_experiment* exp) { delete exp; }

ml_status ml_experiment_set(ml_experiment* exp, const char* key, const char* value) {
  return guarded([&] {
    require(exp, "experiment");
    require(key, "key");
    require(value, "value");
    YAML::Node root = YAML::Load(serialize_config(exp->config));
    YAML::Node parsed;
    try {
      parsed = YAML::Load(value);
    } catch (const YAML::Exception& e) {
      fail(ErrorCode::Parse, std::string("invalid value for ") + key + ": " + e.what());
    }
    const std::string k = key;
    if (const auto dot = k.find('.'); dot != std::string::npos) {
      root[k.substr(0, dot)][k.substr(dot + 1)] = parsed;
    } else {
      root[k] = parsed;
    }
    YAML::Emitter em;
    em << root;
    ExperimentConfig next = parse_config(em.c_str());
    if (next.polynomial_text != exp->config.polynomial_text ||
        next.polynomial_terms != exp->config.polynomial_terms || next.n != exp->config.n ||
        next.bad_primes != exp->config.bad_primes ||
        next.bad_prime_search_bound != exp->config.bad_prime_search_bound) {
      exp->surface.reset();
      exp->poly.reset();
    }
    exp->config = std::move(next);
  });
}

ml_status ml_experiment_serialize(const ml_experiment* exp, char** yaml_out) {
  return guarded([&] {
    require(exp, "experiment");
    require(yaml_out, "out");
    *yaml_out = copy_out(serialize_config(exp->config));
  });
}

int ml_experiment_dimension(const ml_experiment* exp) {
  try {
    return exp ? exp->config.dimension() : 0;
  } catch (...) {
    return 0;
  }
}

size_t ml_experiment_bad_primes(ml_experiment* exp, uint64_t* out, size_t cap) {
  if (!exp) return 0;
  const auto primes = exp->X().bad.primes();
  for (size_t i = 0; i < primes.size() && i < cap && out; ++i) out[i] = primes[i];
  return primes.size();
}

ml_status ml_height(ml_experiment* exp, const int64_t* a, size_t n, int64_t b, double* out) {
  return guarded([&] {
    require(exp, "experiment");
    require(a, "a");
    require(out, "out");
    if (static_cast<int>(n) != exp->f().num_variables()) fail(ErrorCode::DimensionMismatch, "point has the wrong length");
    const RationalPoint x(std::vector<std::int64_t>(a, a + n), b);
    *out = static_cast<double>(global_height(exp->f(), exp->s(), x).value);
  });
}

ml_status ml_count(ml_experiment* exp, double B, uint64_t* out) {
  return guarded([&] {
    require(exp, "experiment");
    require(out, "out");
    *out = count_bounded(exp->f(), exp->s(), B, exp->enumeration()).N;
  });
}

ml_status ml_count_report(ml_experiment* exp, double B, char** out, int* cache_hit) {
  return guarded([&] {
    require(exp, "experiment");
    require(out, "out");
    if (std::isnan(B)) {
      if (!exp->config.B) fail(ErrorCode::InvalidArgument, "count needs a bound: pass --B or set B in the config");
      B = *exp->config.B;
    }
    const std::string text = cached(*exp, "count " + format_real(B), cache_hit, [&] {
      const CountRecord r = count_bounded(exp->f(), exp->s(), B, exp->enumeration());
      if (exp->config.format == OutputFormat::Json) return count_json(r);
      std::ostringstream csv;
      write_counts_csv(csv, std::span<const CountRecord>(&r, 1));
      return csv.str();
    });
    *out = copy_out(text);
  });
}

ml_status ml_scan(ml_experiment* exp, char** csv_out, int* cache_hit) {
  return guarded([&] {
    require(exp, "experiment");
    require(csv_out, "out");
    const std::string text = cached(*exp, "scan", cache_hit, [&] {
      const auto records = scan(exp->f(), exp->s(), parse_geometric_grid(exp->config.grid), exp->enumeration());
      std::ostringstream csv;
      write_counts_csv(csv, records);
      return csv.str();
    });
    *csv_out = copy_out(text);
  });
}

ml_status ml_points(ml_experiment* exp, double B, char** csv_out) {
  return guarded([&] {
    require(exp, "experiment");
    require(csv_out, "out");
    const auto points = bounded_points(exp->f(), exp->s(), B, exp->enumeration());
    std::ostringstream csv;
    write_points_csv(csv, points, exp->f().num_variables());
    *csv_out = copy_out(csv.str());
  });
}

ml_status ml_fit(const char* counts_csv, char** json_out) {
  return guarded([&] {
    require(counts_csv, "counts");
    require(json_out, "out");
    std::istringstream in(counts_csv);
    const auto records = read_counts_csv(in);
    *json_out = copy_out(fit_json(fit_manin(records)));
  });
}

ml_status ml_theta(ml_experiment* exp, char** json_out, int* cache_hit) {
  return guarded([&] {
    require(exp, "experiment");
    require(json_out, "out");
    const std::string text = cached(*exp, "theta", cache_hit, [&] {
      ArchimedeanOptions o;
      o.samples = exp->config.qmc_samples;
      o.shifts = exp->config.qmc_shifts;
      o.seed = exp->config.seed;
      o.threads = exp->config.threads;
      return theta_json(tamagawa_number(exp->X(), exp->config.P_max, o));
    });
    *json_out = copy_out(text);
  });
}

ml_status ml_verify(ml_experiment* exp, const char* suite, int* passed, char** json_out, int* cache_hit) {
  return guarded([&] {
    require(exp, "experiment");
    require(suite, "suite");
    require(json_out, "out");
    const std::string name = suite;
    VerificationReport (*run)(const Hypersurface&, const VerificationOptions&) = nullptr;
    if (name == "volumes") run = verify_volumes;
    else if (name == "fourier-trivial") run = verify_fourier_trivial;
    else if (name == "fourier-char") run = verify_fourier_char;
    else if (name == "hensel") run = verify_hensel;
    else if (name == "bounds") run = verify_bounds;
    else if (name == "all") run = verify_all;
    else fail(ErrorCode::InvalidArgument, "unknown verification suite '" + name + "'");
    bool ok = false;
    const std::string text = cached(*exp, "verify " + name, cache_hit, [&] {
      const VerificationReport r = run(exp->X(), verification_options(exp->config));
      ok = r.passed();
      return verification_json(r);
    });
    if (cache_hit && *cache_hit) ok = text.find("\"pass\": true") != std::string::npos;
    if (passed) *passed = ok ? 1 : 0;
    *json_out = copy_out(text);
  });
}

ml_status ml_ff_count(ml_experiment* exp, char** out) {
  return guarded([&] {
    require(exp, "experiment");
    require(out, "out");
    const auto rows = finite_field_table(exp->X(), exp->config.primes, exp->config.count_budget);
    *out = copy_out(exp->config.format == OutputFormat::Json ? finite_field_json(rows) : finite_field_csv(rows));
  });
}

ml_status ml_local_density(ml_experiment* exp, uint64_t p, double* value, double* error) {
  return guarded([&] {
    require(exp, "experiment");
    require(value, "value");
    const LocalDensity d = local_density(exp->X(), p);
    *value = d.value;
    if (error) *error = d.error;
  });
}

ml_status ml_fourier_trivial(ml_experiment* exp, uint64_t p, int closed, double* re, double* im,
                             double* error_bound) {
  return guarded([&] {
    require(exp, "experiment");
    require(re, "re");
    const ComplexPicard s{{exp->config.height_s0(), 0.0}, {exp->config.height_s1(), 0.0}};
    const LocalFourierValue v = closed ? fourier_trivial_closed(exp->X(), p, s)
                                       : fourier_trivial_direct(exp->X(), p, s, exp->config.trivial_truncation);
    *re = v.value.real();
    if (im) *im = v.value.imag();
    if (error_bound) *error_bound = v.error_bound;
  });
}

}  // extern "C"
