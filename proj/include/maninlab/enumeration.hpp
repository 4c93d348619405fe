#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "maninlab/heights.hpp"
#include "maninlab/polynomial.hpp"

namespace maninlab {

struct CountRecord {
  double B = 0.0;
  std::uint64_t N = 0;
  PicardParameter s;
  double wall_time = 0.0;  // seconds; 0 unless timings were requested
};

struct FitResult {
  double theta_hat = 0.0;
  double c_hat = 0.0;
  double residual = 0.0;  // RMS of N/B - (theta log B + c)
  std::vector<double> grid;
};

struct EnumerationOptions {
  int threads = 0;  // 0: hardware concurrency
  double candidate_budget = 2e10;
  bool allow_over_budget = false;
  bool timings = false;
};

// The search ball b^2 + |a|^2 <= radius_squared contains every point of height <= B.
struct CandidateBound {
  double radius_squared = 0.0;
  std::int64_t q_max = 0;  // integer cutoff actually enumerated (a superset of the real ball)
  double exponent = 0.0;   // H >= c * M^exponent with M = sqrt(b^2 + |a|^2)
  double constant = 1.0;   // the c above
  double estimated_candidates = 0.0;
  std::string justification;
};

CandidateBound candidate_bound(const HomogeneousPolynomial& f, const PicardParameter& s, double B);

/// Visits every primitive (a, b), b >= 1, with b^2 + |a|^2 <= q_max once, in
/// lexicographic order of (b, a). Single-threaded; the counting routines shard
/// the same stream.
void enumerate_candidates(const HomogeneousPolynomial& f, const PicardParameter& s, double B,
                          const std::function<void(std::span<const std::int64_t> a, std::int64_t b)>& visit,
                          const EnumerationOptions& options = {});

CountRecord count_bounded(const HomogeneousPolynomial& f, const PicardParameter& s, double B,
                          const EnumerationOptions& options = {});

/// One record per grid value from a single bucketed pass at max(grid).
std::vector<CountRecord> scan(const HomogeneousPolynomial& f, const PicardParameter& s, std::vector<double> grid,
                              const EnumerationOptions& options = {});

struct BoundedPoint {
  std::vector<std::int64_t> a;
  std::int64_t b = 1;
  long double height = 1.0L;
};

/// All points with H <= B in stream order.
std::vector<BoundedPoint> bounded_points(const HomogeneousPolynomial& f, const PicardParameter& s, double B,
                                         const EnumerationOptions& options = {});

FitResult fit_manin(std::span<const CountRecord> records);

/// "start:stop:steps", geometric and inclusive of both ends.
std::vector<double> parse_geometric_grid(std::string_view text);

void write_points_csv(std::ostream& out, std::span<const BoundedPoint> points, int n);
void write_counts_csv(std::ostream& out, std::span<const CountRecord> records);
std::vector<CountRecord> read_counts_csv(std::istream& in);

}  // namespace maninlab
