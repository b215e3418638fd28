#include "reform/metareason.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "reform/error.hpp"

namespace reform {

void ExecTimeFamily::check() const {
  if (grid.empty()) throw ValidationError("exec-time family: empty grid", {});
  if (grid.size() != dists.size()) throw ValidationError("exec-time family: grid and distributions differ in length", {});
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i - 1] < grid[i])) throw ValidationError("exec-time family: grid is not strictly increasing", {});
  }
  for (const auto& d : dists) {
    if (d.hist.empty()) throw ValidationError("exec-time family: empty distribution", {});
    for (const auto& b : d.hist.bins()) {
      if (b.lo < 0.0) throw ValidationError("exec-time family: negative execution time", {});
    }
  }
}

std::size_t TransitionModel::bin_for(double t_r) const {
  auto it = std::upper_bound(t_r_bin_edges.begin(), t_r_bin_edges.end(), t_r);
  if (it == t_r_bin_edges.begin()) return 0;
  return static_cast<std::size_t>(it - t_r_bin_edges.begin()) - 1;
}

void TransitionModel::check() const {
  if (!(delta > 0.0)) throw ValidationError("transition model: delta must be positive", {});
  if (t_r_bin_edges.empty() || t_r_bin_edges.size() != rho.size()) {
    throw ValidationError("transition model: need one rho histogram per t_r bin", {});
  }
  if (!inherited.empty() && inherited.size() != rho.size()) throw ValidationError("transition model: inherited flags size", {});
  for (std::size_t i = 1; i < t_r_bin_edges.size(); ++i) {
    if (!(t_r_bin_edges[i - 1] < t_r_bin_edges[i])) throw ValidationError("transition model: bin edges not increasing", {});
  }
  for (const auto& h : rho) {
    if (h.empty()) throw ValidationError("transition model: empty rho histogram", {});
    for (const auto& b : h.bins()) {
      if (!(b.lo > 0.0 || (b.lo == 0.0 && b.hi > 0.0 && b.value > 0.0)) || b.hi > 1.0) {
        throw ValidationError("transition model: rho support must lie in (0, 1]", {});
      }
    }
  }
}

void ExecPerUnitModel::check() const {
  if (tau.empty()) throw ValidationError("per-unit model: empty histogram", {});
  for (const auto& b : tau.bins()) {
    if (!(b.value > 0.0)) throw ValidationError("per-unit model: tau must be positive", {});
  }
}

bool values_tie(double x, double y) {
  if (x == y) return true;
  if (!std::isfinite(x) || !std::isfinite(y)) return false;
  return std::abs(x - y) <= 1e-12 * std::max(std::abs(x), std::abs(y));
}

std::vector<double> moments(const Histogram& d, int n) {
  if (n < 1) throw ConfigError("moments: order must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (const auto& b : d.bins()) {
    double power = 1.0;
    for (int i = 0; i < n; ++i) {
      power *= b.value;
      out[static_cast<std::size_t>(i)] += b.mass * power;
    }
  }
  return out;
}

double expected_value(const ValueFunction& vf, double t_r, const Histogram& d) {
  double ev = 0.0;
  for (const auto& b : d.bins()) ev += eval_value(vf, t_r + b.value) * b.mass;
  return ev;
}

namespace {

/// Index of the first maximum under the shared tie rule.
std::size_t argmax_first(const std::vector<double>& xs) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (xs[i] > xs[best] && !values_tie(xs[i], xs[best])) best = i;
  }
  return best;
}

}  // namespace

AprioriResult optimize_apriori(const ValueFunction& vf, const ExecTimeFamily& fam) {
  fam.check();
  AprioriResult r;
  for (std::size_t i = 0; i < fam.grid.size(); ++i) r.ev_curve.push_back(expected_value(vf, fam.grid[i], fam.dists[i].hist));
  auto best = argmax_first(r.ev_curve);
  r.t_r = fam.grid[best];
  r.ev = r.ev_curve[best];
  return r;
}

DeadlineResult deadline_optimum(const ExecTimeFamily& fam, double a, double k) {
  if (!(k > 0.0)) throw ConfigError("deadline_optimum: k must be positive");
  fam.check();
  std::vector<double> prob;
  for (std::size_t i = 0; i < fam.grid.size(); ++i) {
    double p = 0.0;
    for (const auto& b : fam.dists[i].hist.bins()) {
      if (fam.grid[i] + b.value <= a) p += b.mass;
    }
    prob.push_back(p);
  }
  auto best = argmax_first(prob);
  return {fam.grid[best], prob[best]};
}

namespace {

std::size_t interior_index(const ExecTimeFamily& fam, double t_r) {
  for (std::size_t i = 0; i < fam.grid.size(); ++i) {
    if (std::abs(fam.grid[i] - t_r) <= 1e-12 * std::max(1.0, std::abs(t_r))) {
      if (i == 0 || i + 1 == fam.grid.size()) {
        throw BoundaryError("polynomial_foc_residual: t_r is a grid endpoint; central differences need both neighbours");
      }
      return i;
    }
  }
  throw BoundaryError("polynomial_foc_residual: t_r is not a grid point");
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace

double polynomial_foc_residual(const Polynomial& poly, const ExecTimeFamily& fam, double t_r) {
  fam.check();
  const auto i = interior_index(fam, t_r);
  const int n = static_cast<int>(poly.coeffs.size());
  if (n == 0) throw ConfigError("polynomial_foc_residual: empty polynomial");
  // m[k] and dm[k] for k = 0..n; m^(0) = 1 with zero derivative.
  auto here = moments(fam.dists[i].hist, n);
  auto before = moments(fam.dists[i - 1].hist, n);
  auto after = moments(fam.dists[i + 1].hist, n);
  const double span = fam.grid[i + 1] - fam.grid[i - 1];
  std::vector<double> m(static_cast<std::size_t>(n) + 1, 1.0), dm(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 1; k <= n; ++k) {
    m[static_cast<std::size_t>(k)] = here[static_cast<std::size_t>(k - 1)];
    dm[static_cast<std::size_t>(k)] = (after[static_cast<std::size_t>(k - 1)] - before[static_cast<std::size_t>(k - 1)]) / span;
  }
  const double t = fam.grid[i];
  double residual = 0.0;
  for (int deg = 1; deg <= n; ++deg) {
    double inner = 0.0;
    for (int j = 0; j <= deg; ++j) {
      const auto rest = static_cast<std::size_t>(deg - j);
      const double d_power = j == 0 ? 0.0 : j * std::pow(t, j - 1);
      inner += binomial(deg, j) * (d_power * m[rest] + std::pow(t, j) * dm[rest]);
    }
    residual += poly.coeffs[static_cast<std::size_t>(deg - 1)] * inner;
  }
  return residual;
}

std::vector<std::pair<double, double>> polynomial_foc_curve(const Polynomial& poly, const ExecTimeFamily& fam) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 1; i + 1 < fam.grid.size(); ++i) {
    out.emplace_back(fam.grid[i], polynomial_foc_residual(poly, fam, fam.grid[i]));
  }
  return out;
}

TargetResult target_optimum(const ExecTimeFamily& fam, double a) {
  fam.check();
  std::vector<double> density;
  bool feasible = false;
  for (std::size_t i = 0; i < fam.grid.size(); ++i) {
    auto d = fam.dists[i].hist.density_at(a - fam.grid[i]);
    feasible = feasible || d.has_value();
    density.push_back(d.value_or(0.0));
  }
  if (!feasible) throw NoFeasibleTarget("target_optimum: a - t_r falls outside every bin at every grid point");
  std::size_t best = 0;
  for (std::size_t i = 1; i < density.size(); ++i) {
    const bool both_inf = std::isinf(density[i]) && std::isinf(density[best]);
    if (density[i] > density[best] && !both_inf && !values_tie(density[i], density[best])) best = i;
  }
  return {fam.grid[best], density[best]};
}

double ev_halt(const ValueFunction& vf, double t_r, double estimate, const ExecPerUnitModel& pu) {
  double ev = 0.0;
  for (const auto& b : pu.tau.bins()) ev += eval_value(vf, t_r + b.value * estimate) * b.mass;
  return ev;
}

double ev_continue(const ValueFunction& vf, double t_r, double estimate, const TransitionModel& tm,
                   const ExecPerUnitModel& pu) {
  const auto& rho = tm.rho.at(tm.bin_for(t_r));
  const double later = t_r + tm.delta;
  double ev = 0.0;
  for (const auto& r : rho.bins()) {
    ev += ev_halt(vf, later, r.value * estimate, pu) * r.mass;
  }
  return ev;
}

bool should_halt(double ev_halt_value, double ev_continue_value) {
  return ev_halt_value >= ev_continue_value || values_tie(ev_halt_value, ev_continue_value);
}

}  // namespace reform
