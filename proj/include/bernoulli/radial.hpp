#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "bernoulli/error.hpp"
#include "bernoulli/field.hpp"
#include "bernoulli/geometry.hpp"
#include "bernoulli/relaxation.hpp"

namespace bernoulli {

struct CriticalRadius {
  double value = 0.0;   // bisection root
  double newton = 0.0;  // independent Newton root
  int bisection_steps = 0;
  int newton_steps = 0;
  std::string scaling;  // how lambda != 1 was handled
};

namespace detail {

// |v'(R)| for the annulus profile with v(1) = 1, v(R) = 0.
inline double annulus_edge_slope(int d, double R) {
  if (d == 2) return 1.0 / (R * std::log(R));
  const double k = d - 2.0;
  return k * std::pow(R, 1.0 - d) / (1.0 - std::pow(R, -k));
}

// Root function with derivative, cleared of denominators.
inline std::pair<double, double> radius_equation(int d, double R, double s) {
  if (d == 2) return {R * std::log(R) - 1.0 / s, std::log(R) + 1.0};
  const double k = d - 2.0;
  const double f = k * std::pow(R, 1.0 - d) - s * (1.0 - std::pow(R, -k));
  const double df = -k * (d - 1.0) * std::pow(R, -static_cast<double>(d)) - s * k * std::pow(R, 1.0 - d);
  return {f, df};
}

}  // namespace detail

/// R(d, lambda): the outer radius at which the annulus profile with data 1
/// inside and 0 outside meets zero with slope sqrt(lambda). For lambda != 1
/// this is the lambda = 1 problem with data rescaled by 1/sqrt(lambda).
inline CriticalRadius critical_radius_details(int d, double lambda = 1.0) {
  if (d < 2) throw ArgumentError("critical_radius: dimension must be at least 2");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ArgumentError("critical_radius: lambda must be positive");
  const double s = std::sqrt(lambda);
  CriticalRadius out;
  out.scaling = lambda == 1.0 ? "none" : "data scaled by 1/sqrt(lambda); slope condition |v'(R)| = sqrt(lambda)";

  auto g = [&](double R) { return detail::annulus_edge_slope(d, R) - s; };  // decreasing in R
  double lo = 1.0, hi = 2.0;
  if (lambda == 1.0) {
    if (!(g(hi) < 0.0)) throw InternalError("critical_radius: root not bracketed in (1, 2)");
  } else {
    while (!(g(hi) < 0.0)) {
      hi *= 2.0;
      if (hi > 1e12) throw InternalError("critical_radius: root not bracketed");
    }
  }
  while (hi - lo > 1e-13 * hi && out.bisection_steps < 200) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
    ++out.bisection_steps;
  }
  out.value = 0.5 * (lo + hi);

  // Newton from outside the bracket so that it does not inherit the bisection result
  double R = lambda == 1.0 ? 2.0 : 1.0 + 1.5 * (out.value - 1.0);
  for (; out.newton_steps < 100; ++out.newton_steps) {
    const auto [f, df] = detail::radius_equation(d, R, s);
    const double step = f / df;
    R = std::max(R - step, 0.5 * (R + 1.0));
    if (std::abs(step) <= 1e-15 * R) break;
  }
  out.newton = R;
  if (!(std::abs(out.newton - out.value) <= 1e-10))
    throw InternalError("critical_radius: bisection and Newton disagree");
  if (lambda == 1.0 && !(out.value > 1.0 && out.value < 2.0))
    throw InternalError("critical_radius: root outside (1, 2)");
  return out;
}

inline double critical_radius(int d, double lambda = 1.0) { return critical_radius_details(d, lambda).value; }

/// v(r) on [1, R]: 1 - log r / log R for d = 2, (r^{2-d} - R^{2-d}) / (1 - R^{2-d}) for d >= 3.
inline double annulus_solution(int d, double r, double lambda = 1.0) {
  const double R = critical_radius(d, lambda);
  if (!(r >= 1.0 && r <= R)) throw ArgumentError("annulus_solution: r must lie in [1, R]");
  if (d == 2) return 1.0 - std::log(r) / std::log(R);
  const double k = 2.0 - d;
  return (std::pow(r, k) - std::pow(R, k)) / (1.0 - std::pow(R, k));
}

/// The annulus profile extended by 1 inside the unit circle and 0 beyond R,
/// sampled at every closure cell of a 2D grid centered at `center`.
inline ScalarField sample_annulus_solution(std::shared_ptr<const Grid> grid, Point center, double lambda = 1.0) {
  if (grid->dimension() != 2) throw ArgumentError("sample_annulus_solution: grid must be 2D");
  const double R = critical_radius(2, lambda);
  ScalarField f(grid, lambda);
  for (auto c : grid->closure_cells()) {
    const double r = distance(grid->center(c), center);
    f.values[c] = r <= 1.0 ? 1.0 : r >= R ? 0.0 : 1.0 - std::log(r) / std::log(R);
  }
  return f;
}

struct RadialProfile {
  int dimension = 2;
  double lambda = 1.0;
  std::vector<double> radii;
  std::vector<double> values;
  double energy = 0.0;
  bool converged = false;
  int sweeps = 0;
  int front_moves = 0;
  std::vector<double> energy_history;

  void write_csv(std::ostream& os) const {
    os << "r,value\n";
    char buf[96];
    for (std::size_t i = 0; i < radii.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", radii[i], values[i]);
      os << buf;
    }
  }

  /// Smallest radius after which the profile stays at zero (r_out if never).
  [[nodiscard]] double free_boundary_radius() const {
    std::size_t k = values.size();
    while (k > 0 && !(values[k - 1] > kValueTolerance)) --k;
    return k == values.size() ? radii.back() : radii[std::min(k, radii.size() - 1)];
  }
};

struct RadialOptions {
  double tolerance = 1e-12;
  int max_sweeps = 1000000;
  bool from_zero = false;  // default starts from max(a, b)
  bool refine_front = true;
};

/// Minimizes sum w_i (u_{i+1} - u_i)^2 + lambda sum_{u_i > 0} r_i^{d-1} h with
/// w_i = r_{i+1/2}^{d-1} / h over n radial cells, u(r_in) = a, u(r_out) = b.
inline RadialProfile radial_minimize(int d, double r_in, double r_out, double a, double b, double lambda,
                                     std::size_t n, const RadialOptions& opt = {}) {
  if (d < 2) throw ArgumentError("radial_minimize: dimension must be at least 2");
  if (!(r_in > 0.0 && r_out > r_in)) throw ArgumentError("radial_minimize: need 0 < r_in < r_out");
  if (!(a >= 0.0 && b >= 0.0)) throw ValidationError("radial_minimize: data must be nonnegative");
  if (!(lambda > 0.0)) throw ArgumentError("radial_minimize: lambda must be positive");
  if (n < 2) throw ArgumentError("radial_minimize: need at least 2 cells");
  const double h = (r_out - r_in) / static_cast<double>(n);
  RadialProfile prof;
  prof.dimension = d;
  prof.lambda = lambda;
  prof.radii.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) prof.radii[i] = r_in + h * static_cast<double>(i);
  prof.radii[n] = r_out;

  std::vector<relax::Edge> edges;
  std::vector<double> measure(n + 1, 0.0);
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i) {
    const double mid = r_in + h * (static_cast<double>(i) + 0.5);
    edges.push_back({i, i + 1, std::pow(mid, d - 1.0) / h});
  }
  for (std::size_t i = 1; i < n; ++i) {
    measure[i] = std::pow(prof.radii[i], d - 1.0) * h;
    order.push_back(i);
  }
  const relax::Problem p(n + 1, std::move(edges), std::move(measure), std::move(order), true);

  prof.values.assign(n + 1, opt.from_zero ? 0.0 : std::max(a, b));
  prof.values[0] = a;
  prof.values[n] = b;
  relax::Options ro;
  ro.tolerance = opt.tolerance;
  ro.max_sweeps = opt.max_sweeps;
  ro.refine_front = opt.refine_front;
  ro.max_front_moves = static_cast<int>(4 * n + 100);
  const auto rep = relax::minimize(p, prof.values, lambda, ro);
  prof.energy = rep.energy;
  prof.converged = rep.converged;
  prof.sweeps = rep.sweeps;
  prof.front_moves = rep.front_moves;
  prof.energy_history = rep.history;
  return prof;
}

}  // namespace bernoulli
