#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include <unistd.h>

#include "maninlab/cache.hpp"
#include "maninlab/config.hpp"
#include "maninlab/errors.hpp"

using namespace maninlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("maninlab_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("minimal config gets documented defaults") {
  const ExperimentConfig c = parse_config("polynomial: x1^2+x2^2+x3^2\n");
  CHECK(c.dimension() == 3);
  CHECK(c.height_s0() == 4.0);
  CHECK(c.height_s1() == 3.0);
  CHECK(c.grid == "100:100000:25");
  CHECK(c.primes == std::vector<std::uint64_t>{3, 5, 7});
  CHECK(c.P_max == 10000);
  CHECK(c.seed == 20240607);
  CHECK(c.format == OutputFormat::Json);
  CHECK(c.cache_enabled);
}

TEST_CASE("text config round-trips losslessly") {
  const std::string yaml = R"(polynomial: x1^2+2*x2^2+x3^2-x1*x3
bad_primes: [11]
s0: 4.5
s1: 3.25
grid: "10:1000:5"
B: 3.5
primes: [3, 5]
truncation: 10
series_cutoff: 6
character_norm: 3
bounds_max_prime: 11
P_max: 2000
seed: 7
threads: 2
format: csv
cache:
  dir: /tmp/somewhere
  enabled: false
  quota_bytes: 1000
)";
  const ExperimentConfig c = parse_config(yaml);
  CHECK(c.bad_primes == std::vector<std::uint64_t>{11});
  CHECK(*c.s0 == 4.5);
  CHECK(*c.B == 3.5);
  CHECK(c.trivial_truncation == 10);
  CHECK(c.character_norm == 3);
  CHECK(c.format == OutputFormat::Csv);
  CHECK_FALSE(c.cache_enabled);
  CHECK(c.cache_quota_bytes == 1000);
  const ExperimentConfig back = parse_config(serialize_config(c));
  CHECK(back == c);
  CHECK(serialize_config(back) == serialize_config(c));
}

TEST_CASE("structured polynomial config round-trips") {
  const std::string yaml = R"(n: 4
polynomial:
  - {coefficient: 1, exponents: [2, 0, 0, 0]}
  - {coefficient: 1, exponents: [0, 2, 0, 0]}
  - {coefficient: 1, exponents: [0, 0, 2, 0]}
  - {coefficient: 1, exponents: [0, 0, 0, 2]}
)";
  const ExperimentConfig c = parse_config(yaml);
  CHECK(c.polynomial_text.empty());
  CHECK(c.dimension() == 4);
  CHECK(c.polynomial() == HomogeneousPolynomial::parse("x1^2+x2^2+x3^2+x4^2"));
  CHECK(parse_config(serialize_config(c)) == c);
}

TEST_CASE("doubles survive serialization exactly") {
  ExperimentConfig c = parse_config("polynomial: x1^2+x2^2+x3^2\n");
  c.s0 = 4.1;
  c.s1 = 1.0 / 3.0;
  c.B = 100.0;
  const std::string text = serialize_config(c);
  CHECK(text.find("1e+02") == std::string::npos);
  CHECK(parse_config(text) == c);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("polynomial: x1^2+x2^2+x3^2\nunknown_key: 1\n"), Error);
  CHECK_THROWS_AS(parse_config("grid: 1:2:3\n"), Error);
  CHECK_THROWS_AS(parse_config("polynomial: x1^2+x2^2+x3^2\ncache: 3\n"), Error);
  CHECK_THROWS_AS(parse_config("polynomial: x1^2+x2^2+x3^2\nseed: abc\n"), Error);
  CHECK_THROWS_AS(parse_config("polynomial: [\n"), Error);
  CHECK_THROWS_AS(parse_config("polynomial: x1^2+x2^2+x3^2\nformat: xml\n"), Error);
  CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), Error);
}

TEST_CASE("format names") {
  CHECK(parse_format("csv") == OutputFormat::Csv);
  CHECK(format_name(OutputFormat::Json) == "json");
}

TEST_CASE("sha256 known answer") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("cache keys depend on material") {
  CHECK(ArtifactCache::key("a") == ArtifactCache::key("a"));
  CHECK(ArtifactCache::key("a") != ArtifactCache::key("b"));
  CHECK(ArtifactCache::key("a") != sha256_hex("a"));
}

TEST_CASE("cache store, lookup and corruption") {
  const fs::path dir = scratch_dir("cache");
  const ArtifactCache cache(dir, 1 << 20);
  const std::string k = ArtifactCache::key("scan config");
  CHECK_FALSE(cache.lookup(k).has_value());
  cache.store(k, "B,N\n1,1\n");
  REQUIRE(cache.lookup(k).has_value());
  CHECK(*cache.lookup(k) == "B,N\n1,1\n");

  // A truncated entry reads as a miss and is removed.
  const fs::path entry = cache.entry_path(k);
  fs::resize_file(entry, fs::file_size(entry) - 3);
  CHECK_FALSE(cache.lookup(k).has_value());
  CHECK_FALSE(fs::exists(entry));

  // Garbage with a plausible header is rejected by the checksum.
  cache.store(k, "payload");
  {
    std::fstream f(entry, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(-1, std::ios::end);
    f.put('X');
  }
  CHECK_FALSE(cache.lookup(k).has_value());
  fs::remove_all(dir);
}

TEST_CASE("cache evicts the oldest entries past the quota") {
  const fs::path dir = scratch_dir("quota");
  const ArtifactCache cache(dir, 3000);
  const std::string big(1000, 'x');
  std::vector<std::string> keys;
  for (int i = 0; i < 5; ++i) {
    keys.push_back(ArtifactCache::key("entry " + std::to_string(i)));
    cache.store(keys.back(), big);
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  CHECK_FALSE(cache.lookup(keys.front()).has_value());
  CHECK(cache.lookup(keys.back()).has_value());
  std::uintmax_t total = 0;
  for (const auto& e : fs::directory_iterator(dir)) total += e.file_size();
  CHECK(total <= 3000);
  fs::remove_all(dir);
}

TEST_CASE("cache directory resolution") {
  ::setenv("MANINLAB_CACHE", "/tmp/from_env", 1);
  CHECK(ArtifactCache::resolve_dir("/tmp/configured") == fs::path("/tmp/from_env"));
  ::unsetenv("MANINLAB_CACHE");
  CHECK(ArtifactCache::resolve_dir("/tmp/configured") == fs::path("/tmp/configured"));
  ::setenv("HOME", "/tmp/home", 1);
  CHECK(ArtifactCache::resolve_dir("") == fs::path("/tmp/home/.cache/maninlab"));
}
