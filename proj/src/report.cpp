#include "maninlab/report.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace maninlab {

namespace {

using nlohmann::ordered_json;

ordered_json real(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::stod(format_real(x));
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

ordered_json parameter(const PicardParameter& s) { return {{"s0", real(s.s0)}, {"s1", real(s.s1)}}; }

}  // namespace

std::vector<FiniteFieldRow> finite_field_table(const Hypersurface& X, const std::vector<std::uint64_t>& primes,
                                               double budget) {
  std::vector<FiniteFieldRow> rows;
  const int n = X.n();
  for (std::uint64_t p : primes) {
    FiniteFieldRow r;
    r.p = p;
    r.good = X.is_good(p);
    r.points = count_projective_fibered(X.f, p);
    r.tau = tau_p(X.f, p);
    if (r.good) r.points_mod_p2 = count_mod_prime_power(X, std::nullopt, p, 2, budget).str();
    const BigInt space = projective_space_points(n - 2, p);
    r.projective_space = space.str();
    r.weil = weil_bound_check(BigInt(r.points), n - 2, BigInt(X.d()), p);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string count_json(const CountRecord& r) {
  ordered_json j = {{"B", real(r.B)}, {"N", r.N}, {"s", parameter(r.s)}, {"seconds", real(r.wall_time)}};
  return dump(j);
}

std::string fit_json(const FitResult& fit) {
  ordered_json grid = ordered_json::array();
  for (double B : fit.grid) grid.push_back(real(B));
  ordered_json j = {{"theta_hat", real(fit.theta_hat)},
                    {"c_hat", real(fit.c_hat)},
                    {"residual", real(fit.residual)},
                    {"grid", grid}};
  return dump(j);
}

std::string theta_json(const TamagawaBreakdown& t, std::size_t table_primes) {
  ordered_json local = ordered_json::array();
  for (std::size_t i = 0; i < t.local.size() && i < table_primes; ++i) {
    const LocalDensity& ld = t.local[i];
    ordered_json row = {{"p", ld.p}, {"density", real(ld.value)}};
    row["exact"] = ld.exact ? ordered_json(to_string(*ld.exact)) : ordered_json(nullptr);
    row["error"] = real(ld.error);
    row["convergence_factor"] = real(ld.convergence_factor);
    row["regularized"] = real(ld.convergence_factor * ld.value);
    local.push_back(row);
  }
  ordered_json partial = ordered_json::array();
  for (const PartialProduct& pp : t.partial_products) {
    partial.push_back({{"P", pp.P}, {"regularized", real(pp.regularized)}, {"raw", real(pp.raw)}});
  }
  ordered_json j;
  j["n"] = t.n;
  j["tau_infinity"] = {{"value", real(t.tau_infinity)}, {"std_error", real(t.tau_infinity_error)},
                       {"converged", t.archimedean_converged}};
  j["P_max"] = t.P_max;
  j["primes"] = t.local.size();
  j["local"] = local;
  j["euler_product"] = real(t.euler_product);
  j["partial_products"] = partial;
  j["tail_estimate"] = real(t.tail_estimate);
  j["tau"] = real(t.tau);
  j["tau_error"] = real(t.tau_error);
  j["alpha_cone"] = to_string(t.alpha_cone);
  j["brauer"] = t.brauer;
  j["theta"] = real(t.theta);
  j["error_budget"] = {{"archimedean", real(t.tau_infinity_error / t.tau_infinity * t.tau)},
                       {"euler_tail", real(t.tail_estimate)},
                       {"total", real(t.tau_error)}};
  return dump(j);
}

std::string verification_json(const VerificationReport& report) {
  ordered_json checks = ordered_json::array();
  for (const VerificationCheck& c : report.checks) {
    ordered_json inputs = ordered_json::object();
    for (const auto& [k, v] : c.inputs) inputs[k] = v;
    ordered_json j = {{"suite", c.suite},   {"name", c.name},           {"inputs", inputs},
                      {"expected", c.expected}, {"actual", c.actual}, {"tolerance", real(c.tolerance)},
                      {"passed", c.passed}, {"gating", c.gating}};
    if (!c.note.empty()) j["note"] = c.note;
    checks.push_back(j);
  }
  std::size_t informational = 0;
  for (const auto& c : report.checks) informational += c.gating ? 0 : 1;
  ordered_json j;
  j["checks"] = checks;
  j["summary"] = {{"total", report.checks.size()},
                  {"passed", report.passed_count()},
                  {"failed", report.failed_count()},
                  {"informational", informational},
                  {"pass", report.passed()}};
  return dump(j);
}

std::string finite_field_json(const std::vector<FiniteFieldRow>& rows) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) {
    arr.push_back({{"p", r.p},
                   {"good", r.good},
                   {"points", r.points},
                   {"tau", to_string(r.tau)},
                   {"points_mod_p2", r.points_mod_p2.empty() ? ordered_json(nullptr) : ordered_json(r.points_mod_p2)},
                   {"projective_space", r.projective_space},
                   {"weil", r.weil}});
  }
  return dump({{"rows", arr}});
}

std::string finite_field_csv(const std::vector<FiniteFieldRow>& rows) {
  std::ostringstream out;
  out << "p,good,points,tau,points_mod_p2,projective_space,weil\r\n";
  for (const auto& r : rows) {
    out << r.p << ',' << (r.good ? 1 : 0) << ',' << r.points << ',' << to_string(r.tau) << ',' << r.points_mod_p2
        << ',' << r.projective_space << ',' << (r.weil ? 1 : 0) << "\r\n";
  }
  return out.str();
}

}  // namespace maninlab
