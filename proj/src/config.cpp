#include "maninlab/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "maninlab/errors.hpp"

namespace maninlab {

namespace {

// Shortest decimal that reads back to the same double.
std::string exact_decimal(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

template <class T>
T read(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(ErrorCode::Parse, "config key '" + key + "' has an invalid value");
  }
}

const std::set<std::string> kKeys = {
    "polynomial", "n",          "bad_primes", "bad_prime_search_bound", "s0",      "s1",      "grid",
    "B",          "primes",     "truncation", "series_cutoff",          "character_norm", "bounds_max_prime",
    "count_budget", "candidate_budget", "P_max", "qmc_samples", "qmc_shifts", "seed", "threads", "cache",
    "format",     "timings"};

}  // namespace

HomogeneousPolynomial ExperimentConfig::polynomial() const {
  if (!polynomial_text.empty()) return HomogeneousPolynomial::parse(polynomial_text, n);
  if (!polynomial_terms.empty()) {
    int vars = n;
    if (vars == 0) vars = static_cast<int>(polynomial_terms.front().exponents.size());
    return HomogeneousPolynomial::from_terms(vars, polynomial_terms);
  }
  fail(ErrorCode::InvalidArgument, "config has no polynomial");
}

int ExperimentConfig::dimension() const { return polynomial().num_variables(); }

double ExperimentConfig::height_s0() const { return s0 ? *s0 : dimension() + 1.0; }
double ExperimentConfig::height_s1() const { return s1 ? *s1 : static_cast<double>(dimension()); }

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  fail(ErrorCode::InvalidArgument, "format must be csv or json, got '" + text + "'");
}

std::string format_name(OutputFormat format) { return format == OutputFormat::Csv ? "csv" : "json"; }

ExperimentConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    fail(ErrorCode::Parse, std::string("config is not valid YAML: ") + e.what());
  }
  if (!root.IsMap()) fail(ErrorCode::Parse, "config must be a mapping");
  for (const auto& kv : root) {
    const std::string key = kv.first.as<std::string>();
    if (!kKeys.count(key)) fail(ErrorCode::Parse, "unknown config key '" + key + "'");
  }

  ExperimentConfig c;
  const YAML::Node poly = root["polynomial"];
  if (!poly) fail(ErrorCode::Parse, "config needs a 'polynomial'");
  if (poly.IsScalar()) {
    c.polynomial_text = read<std::string>(poly, "polynomial");
  } else if (poly.IsSequence()) {
    for (const YAML::Node& t : poly) {
      if (!t.IsMap() || !t["coefficient"] || !t["exponents"]) {
        fail(ErrorCode::Parse, "polynomial terms need 'coefficient' and 'exponents'");
      }
      c.polynomial_terms.push_back(
          {read<std::int64_t>(t["coefficient"], "coefficient"), read<std::vector<int>>(t["exponents"], "exponents")});
    }
    if (c.polynomial_terms.empty()) fail(ErrorCode::ZeroPolynomial, "polynomial has no terms");
  } else {
    fail(ErrorCode::Parse, "polynomial must be text or a list of terms");
  }
  if (root["n"]) c.n = read<int>(root["n"], "n");
  if (root["bad_primes"]) c.bad_primes = read<std::vector<std::uint64_t>>(root["bad_primes"], "bad_primes");
  if (root["bad_prime_search_bound"]) {
    c.bad_prime_search_bound = read<std::uint64_t>(root["bad_prime_search_bound"], "bad_prime_search_bound");
  }
  if (root["s0"]) c.s0 = read<double>(root["s0"], "s0");
  if (root["s1"]) c.s1 = read<double>(root["s1"], "s1");
  if (root["grid"]) c.grid = read<std::string>(root["grid"], "grid");
  if (root["B"]) c.B = read<double>(root["B"], "B");
  if (root["primes"]) c.primes = read<std::vector<std::uint64_t>>(root["primes"], "primes");
  if (root["truncation"]) c.trivial_truncation = read<int>(root["truncation"], "truncation");
  if (root["series_cutoff"]) c.series_cutoff = read<int>(root["series_cutoff"], "series_cutoff");
  if (root["character_norm"]) c.character_norm = read<std::int64_t>(root["character_norm"], "character_norm");
  if (root["bounds_max_prime"]) c.bounds_max_prime = read<std::uint64_t>(root["bounds_max_prime"], "bounds_max_prime");
  if (root["count_budget"]) c.count_budget = read<double>(root["count_budget"], "count_budget");
  if (root["candidate_budget"]) c.candidate_budget = read<double>(root["candidate_budget"], "candidate_budget");
  if (root["P_max"]) c.P_max = read<std::uint64_t>(root["P_max"], "P_max");
  if (root["qmc_samples"]) c.qmc_samples = read<std::uint64_t>(root["qmc_samples"], "qmc_samples");
  if (root["qmc_shifts"]) c.qmc_shifts = read<int>(root["qmc_shifts"], "qmc_shifts");
  if (root["seed"]) c.seed = read<std::uint64_t>(root["seed"], "seed");
  if (root["threads"]) c.threads = read<int>(root["threads"], "threads");
  if (const YAML::Node cache = root["cache"]) {
    if (!cache.IsMap()) fail(ErrorCode::Parse, "cache must be a mapping");
    if (cache["dir"]) c.cache_dir = read<std::string>(cache["dir"], "cache.dir");
    if (cache["enabled"]) c.cache_enabled = read<bool>(cache["enabled"], "cache.enabled");
    if (cache["quota_bytes"]) c.cache_quota_bytes = read<std::uint64_t>(cache["quota_bytes"], "cache.quota_bytes");
  }
  if (root["format"]) c.format = parse_format(read<std::string>(root["format"], "format"));
  if (root["timings"]) c.timings = read<bool>(root["timings"], "timings");
  c.polynomial();  // validates
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "polynomial";
  if (!c.polynomial_text.empty()) {
    out << YAML::Value << YAML::DoubleQuoted << c.polynomial_text;
  } else {
    out << YAML::Value << YAML::BeginSeq;
    for (const Term& t : c.polynomial_terms) {
      out << YAML::Flow << YAML::BeginMap << YAML::Key << "coefficient" << YAML::Value << t.coefficient
          << YAML::Key << "exponents" << YAML::Value << YAML::Flow << t.exponents << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }
  auto real = [&](const char* key, double x) { out << YAML::Key << key << YAML::Value << exact_decimal(x); };
  out << YAML::Key << "n" << YAML::Value << c.n;
  out << YAML::Key << "bad_primes" << YAML::Value << YAML::Flow << c.bad_primes;
  out << YAML::Key << "bad_prime_search_bound" << YAML::Value << c.bad_prime_search_bound;
  if (c.s0) real("s0", *c.s0);
  if (c.s1) real("s1", *c.s1);
  out << YAML::Key << "grid" << YAML::Value << YAML::DoubleQuoted << c.grid;
  if (c.B) real("B", *c.B);
  out << YAML::Key << "primes" << YAML::Value << YAML::Flow << c.primes;
  out << YAML::Key << "truncation" << YAML::Value << c.trivial_truncation;
  out << YAML::Key << "series_cutoff" << YAML::Value << c.series_cutoff;
  out << YAML::Key << "character_norm" << YAML::Value << c.character_norm;
  out << YAML::Key << "bounds_max_prime" << YAML::Value << c.bounds_max_prime;
  real("count_budget", c.count_budget);
  real("candidate_budget", c.candidate_budget);
  out << YAML::Key << "P_max" << YAML::Value << c.P_max;
  out << YAML::Key << "qmc_samples" << YAML::Value << c.qmc_samples;
  out << YAML::Key << "qmc_shifts" << YAML::Value << c.qmc_shifts;
  out << YAML::Key << "seed" << YAML::Value << c.seed;
  out << YAML::Key << "threads" << YAML::Value << c.threads;
  out << YAML::Key << "cache" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dir" << YAML::Value << YAML::DoubleQuoted << c.cache_dir;
  out << YAML::Key << "enabled" << YAML::Value << c.cache_enabled;
  out << YAML::Key << "quota_bytes" << YAML::Value << c.cache_quota_bytes;
  out << YAML::EndMap;
  out << YAML::Key << "format" << YAML::Value << format_name(c.format);
  out << YAML::Key << "timings" << YAML::Value << c.timings;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace maninlab
