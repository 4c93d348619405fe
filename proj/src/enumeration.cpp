#include "maninlab/enumeration.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "maninlab/errors.hpp"
#include "parallel.hpp"

namespace maninlab {

namespace {

std::int64_t isqrt(std::int64_t x) {
  if (x <= 0) return 0;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(x)));
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

double coefficient_l1(const HomogeneousPolynomial& f) {
  double c = 0.0;
  for (const Term& t : f.terms()) c += std::fabs(static_cast<double>(t.coefficient));
  return c;
}

struct Shard {
  std::int64_t b;
  std::int64_t a1_lo;
  std::int64_t a1_hi;
};

constexpr std::int64_t kBlock = 8;

std::vector<Shard> make_shards(std::int64_t q_max) {
  std::vector<Shard> shards;
  for (std::int64_t b = 1; b * b <= q_max; ++b) {
    const std::int64_t r = isqrt(q_max - b * b);
    for (std::int64_t lo = -r; lo <= r; lo += kBlock) shards.push_back({b, lo, std::min(r, lo + kBlock - 1)});
  }
  return shards;
}

// Lexicographic walk over a in the shard with b^2 + |a|^2 <= q_max and gcd(a, b) = 1.
template <class Visit>
void walk_shard(const Shard& shard, int n, std::int64_t q_max, Visit&& visit) {
  std::vector<std::int64_t> a(n, 0);
  auto rec = [&](auto&& self, int level, std::int64_t remaining, std::int64_t g) -> void {
    if (level == n) {
      if (g == 1) visit(std::span<const std::int64_t>(a), shard.b);
      return;
    }
    const std::int64_t r = isqrt(remaining);
    for (std::int64_t x = -r; x <= r; ++x) {
      a[level] = x;
      self(self, level + 1, remaining - x * x, std::gcd(g, x));
    }
  };
  const std::int64_t rest = q_max - shard.b * shard.b;
  for (std::int64_t x = shard.a1_lo; x <= shard.a1_hi; ++x) {
    if (x * x > rest) continue;
    a[0] = x;
    rec(rec, 1, rest - x * x, std::gcd(shard.b, x));
  }
}

void check_budget(const CandidateBound& bound, const EnumerationOptions& options) {
  if (bound.estimated_candidates > options.candidate_budget && !options.allow_over_budget) {
    std::ostringstream msg;
    msg << "about " << format_real(bound.estimated_candidates) << " candidates exceed the budget of "
        << format_real(options.candidate_budget) << "; raise candidate_budget or allow_over_budget";
    fail(ErrorCode::BoundTooLarge, msg.str());
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

CandidateBound candidate_bound(const HomogeneousPolynomial& f, const PicardParameter& s, double B) {
  if (!(B > 0.0) || !std::isfinite(B)) fail(ErrorCode::InvalidArgument, "height bound must be positive and finite");
  if (!(s.s0 > 0.0) || !(s.s1 > 0.0)) {
    fail(ErrorCode::InvalidArgument, "candidate bound needs s0 > 0 and s1 > 0");
  }
  // H = M^s0 * H_D1^(s1 - s0) with 1/sqrt(1 + C_f^2) <= H_D1 <= M.
  CandidateBound out;
  const double cf = coefficient_l1(f);
  if (s.s1 <= s.s0) {
    out.exponent = s.s1;
    out.constant = 1.0;
    out.justification = "H >= M^s1 since H_D1 <= M and s1 <= s0";
  } else {
    out.exponent = s.s0;
    out.constant = std::pow(1.0 + cf * cf, -(s.s1 - s.s0) / 2.0);
    out.justification = "H >= (1 + C_f^2)^(-(s1-s0)/2) M^s0 since H_D1 >= (1 + C_f^2)^(-1/2) and s1 > s0";
  }
  const double m_max = std::pow(B / out.constant, 1.0 / out.exponent);
  out.radius_squared = m_max * m_max;
  if (out.radius_squared > 9e15) fail(ErrorCode::BoundTooLarge, "candidate ball exceeds 64-bit coordinates");
  out.q_max = static_cast<std::int64_t>(std::floor(out.radius_squared * (1.0 + 1e-12))) + 0;
  // volume of the half ball in R^(n+1)
  const int dim = f.num_variables() + 1;
  const double pi = boost::math::constants::pi<double>();
  const double unit_ball = std::pow(pi, dim / 2.0) / boost::math::tgamma(dim / 2.0 + 1.0);
  out.estimated_candidates = 0.5 * unit_ball * std::pow(m_max, dim);
  return out;
}

void enumerate_candidates(const HomogeneousPolynomial& f, const PicardParameter& s, double B,
                          const std::function<void(std::span<const std::int64_t>, std::int64_t)>& visit,
                          const EnumerationOptions& options) {
  const CandidateBound bound = candidate_bound(f, s, B);
  check_budget(bound, options);
  for (const Shard& shard : make_shards(bound.q_max)) walk_shard(shard, f.num_variables(), bound.q_max, visit);
}

std::vector<CountRecord> scan(const HomogeneousPolynomial& f, const PicardParameter& s, std::vector<double> grid,
                              const EnumerationOptions& options) {
  if (grid.empty()) fail(ErrorCode::InvalidArgument, "empty height grid");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) fail(ErrorCode::InvalidArgument, "height grid must be strictly increasing");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const CandidateBound bound = candidate_bound(f, s, grid.back());
  check_budget(bound, options);
  const HeightEvaluator heights(f, s);
  const std::vector<Shard> shards = make_shards(bound.q_max);
  const int n = f.num_variables();
  const std::size_t k = grid.size();

  std::vector<std::vector<std::uint64_t>> buckets(shards.size());
  parallel_for(shards.size(), options.threads, [&](std::size_t i) {
    std::vector<std::uint64_t> local(k, 0);
    walk_shard(shards[i], n, bound.q_max, [&](std::span<const std::int64_t> a, std::int64_t b) {
      const HeightEvaluator::Sample x = heights.sample(a, b);
      if (heights.compare(x, grid.back()) > 0) return;
      // first grid value that is >= H
      std::size_t lo = 0, hi = k - 1;
      while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (heights.compare(x, grid[mid]) <= 0) hi = mid;
        else lo = mid + 1;
      }
      ++local[lo];
    });
    buckets[i] = std::move(local);
  });

  std::vector<std::uint64_t> totals(k, 0);
  for (const auto& local : buckets) {
    for (std::size_t j = 0; j < k; ++j) totals[j] += local[j];
  }
  const double elapsed = options.timings ? seconds_since(t0) : 0.0;
  std::vector<CountRecord> out;
  std::uint64_t running = 0;
  for (std::size_t j = 0; j < k; ++j) {
    running += totals[j];
    out.push_back({grid[j], running, s, elapsed});
  }
  return out;
}

CountRecord count_bounded(const HomogeneousPolynomial& f, const PicardParameter& s, double B,
                          const EnumerationOptions& options) {
  return scan(f, s, {B}, options).front();
}

std::vector<BoundedPoint> bounded_points(const HomogeneousPolynomial& f, const PicardParameter& s, double B,
                                         const EnumerationOptions& options) {
  const CandidateBound bound = candidate_bound(f, s, B);
  check_budget(bound, options);
  const HeightEvaluator heights(f, s);
  const std::vector<Shard> shards = make_shards(bound.q_max);
  const int n = f.num_variables();
  std::vector<std::vector<BoundedPoint>> parts(shards.size());
  parallel_for(shards.size(), options.threads, [&](std::size_t i) {
    walk_shard(shards[i], n, bound.q_max, [&](std::span<const std::int64_t> a, std::int64_t b) {
      const HeightEvaluator::Sample x = heights.sample(a, b);
      if (heights.compare(x, B) > 0) return;
      parts[i].push_back({std::vector<std::int64_t>(a.begin(), a.end()), b, std::exp(x.log_height)});
    });
  });
  std::vector<BoundedPoint> out;
  for (auto& part : parts) std::move(part.begin(), part.end(), std::back_inserter(out));
  return out;
}

FitResult fit_manin(std::span<const CountRecord> records) {
  std::vector<double> bs;
  for (const CountRecord& r : records) bs.push_back(r.B);
  std::sort(bs.begin(), bs.end());
  const bool distinct = std::adjacent_find(bs.begin(), bs.end()) == bs.end();
  if (records.size() < 4 || !distinct || bs.back() < 1e3) {
    fail(ErrorCode::InsufficientData, "fit needs at least 4 records with distinct B and max B >= 1000");
  }
  // least squares of y = N/B against x = log B
  const double m = static_cast<double>(records.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const CountRecord& r : records) {
    const double x = std::log(r.B), y = static_cast<double>(r.N) / r.B;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double det = m * sxx - sx * sx;
  if (!(std::fabs(det) > 0.0)) fail(ErrorCode::InsufficientData, "degenerate fit design");
  FitResult out;
  out.theta_hat = (m * sxy - sx * sy) / det;
  out.c_hat = (sy - out.theta_hat * sx) / m;
  double ss = 0;
  for (const CountRecord& r : records) {
    const double e = static_cast<double>(r.N) / r.B - (out.theta_hat * std::log(r.B) + out.c_hat);
    ss += e * e;
  }
  out.residual = std::sqrt(ss / m);
  for (const CountRecord& r : records) out.grid.push_back(r.B);
  return out;
}

std::vector<double> parse_geometric_grid(std::string_view text) {
  double start = 0, stop = 0;
  long steps = 0;
  const std::string s(text);
  char c1 = 0, c2 = 0;
  std::istringstream in(s);
  if (!(in >> start >> c1 >> stop >> c2 >> steps) || c1 != ':' || c2 != ':' || !(in >> std::ws).eof()) {
    fail(ErrorCode::Parse, "grid must look like start:stop:steps, got '" + s + "'");
  }
  if (!(start > 0) || !(stop >= start) || steps < 1) {
    fail(ErrorCode::InvalidArgument, "grid needs 0 < start <= stop and steps >= 1");
  }
  if (steps == 1) return {stop};
  std::vector<double> grid;
  const double ratio = std::log(stop / start) / static_cast<double>(steps - 1);
  // Snapped to the 12 digits the CSV carries, so a grid read back from a file is the same grid.
  for (long i = 0; i < steps; ++i) {
    grid.push_back(i + 1 == steps ? stop : std::stod(format_real(start * std::exp(ratio * i))));
  }
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

void write_points_csv(std::ostream& out, std::span<const BoundedPoint> points, int n) {
  out << "b";
  for (int i = 1; i <= n; ++i) out << ",a" << i;
  out << ",H\r\n";
  for (const BoundedPoint& p : points) {
    out << p.b;
    for (std::int64_t x : p.a) out << ',' << x;
    out << ',' << format_real(static_cast<double>(p.height)) << "\r\n";
  }
}

void write_counts_csv(std::ostream& out, std::span<const CountRecord> records) {
  out << "B,N,seconds\r\n";
  for (const CountRecord& r : records) {
    out << format_real(r.B) << ',' << r.N << ',' << format_real(r.wall_time) << "\r\n";
  }
}

std::vector<CountRecord> read_counts_csv(std::istream& in) {
  std::vector<CountRecord> out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("B,N", 0) == 0) continue;
    }
    std::istringstream row(line);
    CountRecord r;
    char comma = 0;
    if (!(row >> r.B >> comma >> r.N) || comma != ',') fail(ErrorCode::Parse, "bad count CSV row: " + line);
    if (row >> comma >> r.wall_time) {}
    out.push_back(r);
  }
  return out;
}

}  // namespace maninlab
