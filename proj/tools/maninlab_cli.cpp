// Command-line front end; talks to the library only through maninlab.h.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "maninlab/maninlab.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(ml_status st, const char* what) {
  if (st == ML_OK) return;
  std::string msg = std::string(what) + ": " + ml_status_name(st) + ": " + ml_last_error();
  if (st == ML_ERR_BUDGET_EXCEEDED) msg += " (raise count_budget or candidate_budget in the config)";
  throw UsageError(msg);
}

struct Text {
  char* p = nullptr;
  ~Text() { ml_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct Experiment {
  ml_experiment* e = nullptr;
  ~Experiment() { ml_experiment_free(e); }
};

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Common {
  std::string config;
  std::string polynomial;
  std::optional<double> s0, s1;
  std::optional<int> threads;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool timings = false;
  bool no_cache = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "experiment config (YAML)");
  cmd->add_option("--polynomial", c.polynomial, "defining form, e.g. x1^2+x2^2+x3^2 (instead of --config)");
  cmd->add_option("--s0", c.s0, "height parameter s0 (default n+1)");
  cmd->add_option("--s1", c.s1, "height parameter s1 (default n)");
  cmd->add_option("--threads", c.threads, "worker threads (0: all cores)");
  cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", c.seed, "seed of the randomized quadrature");
  cmd->add_option("--out", c.out, "write the artifact here instead of stdout");
  cmd->add_flag("--timings", c.timings, "record wall times (bypasses the cache)");
  cmd->add_flag("--no-cache", c.no_cache, "neither read nor write the artifact cache");
}

void set(Experiment& x, const char* key, const std::string& value) {
  check(ml_experiment_set(x.e, key, value.c_str()), key);
}

void open(Experiment& x, const Common& c) {
  if (!c.config.empty() && !c.polynomial.empty()) throw UsageError("give either --config or --polynomial, not both");
  if (!c.config.empty()) {
    check(ml_experiment_load(c.config.c_str(), &x.e), "loading config");
  } else if (!c.polynomial.empty()) {
    check(ml_experiment_from_polynomial(c.polynomial.c_str(), &x.e), "parsing polynomial");
  } else {
    throw UsageError("no experiment: pass --config PATH or --polynomial TEXT");
  }
  if (c.s0) set(x, "s0", format_double(*c.s0));
  if (c.s1) set(x, "s1", format_double(*c.s1));
  if (c.threads) set(x, "threads", std::to_string(*c.threads));
  if (c.format) set(x, "format", *c.format);
  if (c.seed) set(x, "seed", std::to_string(*c.seed));
  if (c.timings) set(x, "timings", "true");
  if (c.no_cache) set(x, "cache.enabled", "false");
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  const std::string tmp = c.out + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f || !(f << text) || !f.flush()) throw UsageError("cannot write " + c.out);
  }
  if (std::rename(tmp.c_str(), c.out.c_str()) != 0) throw UsageError("cannot write " + c.out);
}

std::string join(const std::vector<std::uint64_t>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "]";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counting points of bounded height on a blow-up of projective space, and the local and global "
               "constants of the predicted asymptotic."};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("maninlab ") + ml_version());

  Common common;
  std::optional<double> B;
  std::string grid, fit_input, suite;
  std::vector<std::uint64_t> primes;
  std::optional<std::uint64_t> p_max;

  auto* count = app.add_subcommand("count", "N(B) for one bound");
  add_common(count, common);
  count->add_option("--B", B, "height bound (default: B in the config)");

  auto* scan = app.add_subcommand("scan", "N(B) over a geometric grid (CSV)");
  add_common(scan, common);
  scan->add_option("--grid", grid, "start:stop:steps");

  auto* points = app.add_subcommand("points", "every point of height <= B (CSV)");
  add_common(points, common);
  points->add_option("--B", B, "height bound")->required();

  auto* fit = app.add_subcommand("fit", "fit N(B) = theta B log B + c B (JSON)");
  add_common(fit, common);
  fit->add_option("--in", fit_input, "counts CSV from `scan` (default: run the scan of the config)");
  fit->add_option("--grid", grid, "start:stop:steps when scanning");

  auto* theta = app.add_subcommand("theta", "predicted leading constant and its breakdown (JSON)");
  add_common(theta, common);
  theta->add_option("--P-max", p_max, "last prime of the Euler product");

  auto* verify = app.add_subcommand("verify", "identity and bound checks (JSON); exit 1 if any fails");
  add_common(verify, common);
  verify->add_option("suite", suite, "volumes | fourier-trivial | fourier-char | hensel | bounds | all")
      ->required()
      ->check(CLI::IsMember({"volumes", "fourier-trivial", "fourier-char", "hensel", "bounds", "all"}));
  verify->add_option("--p", primes, "primes to check (repeat or comma-separate)")->delimiter(',');

  auto* ff = app.add_subcommand("ff-count", "point counts over F_p and Z/p^2");
  add_common(ff, common);
  ff->add_option("--p", primes, "primes (repeat or comma-separate)")->delimiter(',');

  auto* config = app.add_subcommand("config", "print the effective config in canonical form");
  add_common(config, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (fit->parsed() && !fit_input.empty()) {
      std::ifstream in(fit_input, std::ios::binary);
      if (!in) throw UsageError("cannot read " + fit_input);
      std::stringstream ss;
      ss << in.rdbuf();
      Text out;
      check(ml_fit(ss.str().c_str(), &out.p), "fit");
      emit(common, out.str());
      return kExitOk;
    }

    Experiment x;
    open(x, common);
    if (!grid.empty()) set(x, "grid", "\"" + grid + "\"");
    if (!primes.empty()) set(x, "primes", join(primes));
    if (p_max) set(x, "P_max", std::to_string(*p_max));

    Text out;
    int hit = 0;
    if (count->parsed()) {
      check(ml_count_report(x.e, B ? *B : NAN, &out.p, &hit), "count");
    } else if (scan->parsed()) {
      check(ml_scan(x.e, &out.p, &hit), "scan");
    } else if (points->parsed()) {
      check(ml_points(x.e, *B, &out.p), "points");
    } else if (fit->parsed()) {
      Text csv;
      check(ml_scan(x.e, &csv.p, &hit), "scan");
      check(ml_fit(csv.p, &out.p), "fit");
    } else if (theta->parsed()) {
      check(ml_theta(x.e, &out.p, &hit), "theta");
    } else if (verify->parsed()) {
      int passed = 0;
      check(ml_verify(x.e, suite.c_str(), &passed, &out.p, &hit), "verify");
      emit(common, out.str());
      return passed ? kExitOk : kExitVerifyFailed;
    } else if (ff->parsed()) {
      check(ml_ff_count(x.e, &out.p), "ff-count");
    } else if (config->parsed()) {
      check(ml_experiment_serialize(x.e, &out.p), "config");
    }
    emit(common, out.str());
    if (hit) std::cerr << "(served from cache)\n";
    return kExitOk;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
