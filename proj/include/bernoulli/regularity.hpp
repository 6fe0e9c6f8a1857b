#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bernoulli/boundary_data.hpp"
#include "bernoulli/energy.hpp"
#include "bernoulli/error.hpp"
#include "bernoulli/field.hpp"
#include "bernoulli/geometry.hpp"

namespace bernoulli {

struct CheckReport {
  std::string name;
  bool pass = false;
  double violation = 0.0;  // pass iff violation <= tolerance
  double tolerance = 0.0;
  std::optional<std::size_t> cell;    // worst cell, or first cell of the worst pair
  std::optional<std::size_t> cell_b;  // second cell of the worst pair
  std::vector<std::pair<std::string, double>> params;

  [[nodiscard]] double param(const std::string& key) const {
    for (const auto& [k, v] : params)
      if (k == key) return v;
    throw ArgumentError("CheckReport: no parameter " + key);
  }
};

namespace detail {
inline void finish(CheckReport& r) { r.pass = r.violation <= r.tolerance; }
}  // namespace detail

/// Reports min over closure cells of (u_high - u_low); passes iff >= -tol.
inline CheckReport check_comparison(const ScalarField& u_low, const ScalarField& u_high, double tol = 1e-8) {
  if (!same_grid(u_low, u_high)) throw ArgumentError("check_comparison: fields are on different grids");
  CheckReport r{.name = "comparison", .tolerance = tol};
  double worst = std::numeric_limits<double>::infinity();
  for (auto c : u_low.grid->closure_cells()) {
    const double d = u_high.values[c] - u_low.values[c];
    if (d < worst) {
      worst = d;
      r.cell = c;
    }
  }
  r.violation = std::max(0.0, -worst);
  r.params = {{"min_difference", worst}, {"tol", tol}};
  detail::finish(r);
  return r;
}

namespace detail {
inline void require_common_boundary(const ScalarField& u, const ScalarField& v, const char* who) {
  if (!same_grid(u, v)) throw ArgumentError(std::string(who) + ": fields are on different grids");
  for (auto c : u.grid->boundary_cells())
    if (std::abs(u.values[c] - v.values[c]) > 1e-12)
      throw ArgumentError(std::string(who) + ": boundary values differ");
}
}  // namespace detail

/// Discrete submodularity: slack = E(u) + E(v) - E(max) - E(min) >= -1e-12.
inline CheckReport check_cut_paste(const ScalarField& u, const ScalarField& v, double lambda) {
  detail::require_common_boundary(u, v, "check_cut_paste");
  const double eu = total_energy(u, lambda), ev = total_energy(v, lambda);
  const double emax = total_energy(pointwise_max(u, v), lambda);
  const double emin = total_energy(pointwise_min(u, v), lambda);
  const double slack = (eu + ev) - (emax + emin);
  CheckReport r{.name = "cutpaste", .tolerance = 1e-12};
  r.violation = std::max(0.0, -slack);
  r.params = {{"slack", slack}, {"energy_u", eu}, {"energy_v", ev}, {"energy_max", emax},
              {"energy_min", emin}, {"lambda", lambda}};
  detail::finish(r);
  return r;
}

/// For two converged solves at one datum: |E(max(u, v)) - E(reference)| <= 10 tol.
inline CheckReport check_cut_paste_minimizers(const ScalarField& u, const ScalarField& v,
                                              const ScalarField& reference, double lambda,
                                              double solver_tolerance) {
  detail::require_common_boundary(u, v, "check_cut_paste_minimizers");
  detail::require_common_boundary(u, reference, "check_cut_paste_minimizers");
  const double emax = total_energy(pointwise_max(u, v), lambda);
  const double eref = total_energy(reference, lambda);
  CheckReport r{.name = "cutpaste-minimizers", .tolerance = 10.0 * solver_tolerance};
  r.violation = std::abs(emax - eref);
  r.params = {{"energy_max", emax}, {"energy_reference", eref}, {"solver_tolerance", solver_tolerance}};
  detail::finish(r);
  return r;
}

/// Per-edge slack for a single edge carrying u = (u0, u1) and v = (v0, v1).
inline double edge_cut_paste_slack(double u0, double u1, double v0, double v1) {
  const double hi = std::max(u0, v0) - std::max(u1, v1);
  const double lo = std::min(u0, v0) - std::min(u1, v1);
  return (u0 - u1) * (u0 - u1) + (v0 - v1) * (v0 - v1) - hi * hi - lo * lo;
}

/// Every interior cell within distance rho of the patch is strictly positive.
/// The violation is the number of cells that are not.
inline CheckReport check_barrier_positivity(const ScalarField& u, std::span<const std::size_t> patch,
                                            double level, double rho) {
  if (patch.empty()) throw ArgumentError("check_barrier_positivity: empty patch");
  if (!(rho > 0.0)) throw ArgumentError("check_barrier_positivity: rho must be positive");
  const Grid& g = *u.grid;
  double patch_min = std::numeric_limits<double>::infinity();
  for (auto c : patch) {
    if (c >= g.size() || !g.in_closure(c)) throw ArgumentError("check_barrier_positivity: patch cell outside closure");
    patch_min = std::min(patch_min, u.values[c]);
  }
  if (patch_min < level - 1e-12)
    throw ArgumentError("check_barrier_positivity: patch values fall below the stated level");
  CheckReport r{.name = "barrier", .tolerance = 0.0};
  std::size_t checked = 0, failing = 0;
  double nearest_fail = std::numeric_limits<double>::infinity();
  for (auto c : g.interior_cells()) {
    const Point p = g.center(c);
    double dist = std::numeric_limits<double>::infinity();
    for (auto b : patch) dist = std::min(dist, distance(p, g.center(b)));
    if (dist > rho * (1.0 + 1e-12)) continue;
    ++checked;
    if (!(u.values[c] > kValueTolerance)) {
      ++failing;
      if (dist < nearest_fail) {
        nearest_fail = dist;
        r.cell = c;
      }
    }
  }
  r.violation = static_cast<double>(failing);
  r.params = {{"level", level}, {"rho", rho}, {"patch_min", patch_min}, {"cells_checked", double(checked)}};
  detail::finish(r);
  return r;
}

/// Largest rho on the ladder rho_max / 2^k (down to rho_min) that passes, or 0.
inline double largest_passing_rho(const ScalarField& u, std::span<const std::size_t> patch, double level,
                                  double rho_max, double rho_min) {
  if (!(rho_min > 0.0 && rho_max >= rho_min)) throw ArgumentError("largest_passing_rho: need 0 < rho_min <= rho_max");
  for (double rho = rho_max; rho >= rho_min * (1.0 - 1e-12); rho *= 0.5)
    if (check_barrier_positivity(u, patch, level, rho).pass) return rho;
  return 0.0;
}

struct EquicontinuityReport {
  std::vector<ModulusCurve> curves;
  ModulusCurve envelope;
};

/// Moduli on the closed domain for each field and their pointwise maximum.
inline EquicontinuityReport equicontinuity_report(std::span<const ScalarField> fields, std::span<const double> deltas) {
  if (fields.empty()) throw ArgumentError("equicontinuity_report: no fields");
  EquicontinuityReport rep;
  for (const auto& f : fields) {
    if (!same_grid(f, fields.front())) throw ArgumentError("equicontinuity_report: fields on different grids");
    rep.curves.push_back(empirical_modulus(f, f.grid->closure_cells(), deltas));
  }
  rep.envelope = rep.curves.front();
  for (const auto& c : rep.curves)
    for (std::size_t k = 0; k < c.size(); ++k) rep.envelope.omega[k] = std::max(rep.envelope.omega[k], c.omega[k]);
  return rep;
}

/// Holder quotient over pairs with one end within `band` of the boundary
/// (boundary cells included) and the other anywhere in the closure.
inline HolderResult boundary_holder_quotient(const ScalarField& u, double gamma, double band) {
  const Grid& g = *u.grid;
  if (!(band >= 2.0 * g.spacing() * (1.0 - 1e-12))) throw ArgumentError("boundary_holder_quotient: band must be >= 2h");
  const auto dist = boundary_distance_map(g);
  std::vector<std::size_t> near;
  for (auto c : g.closure_cells())
    if (dist[c] <= band * (1.0 + 1e-12)) near.push_back(c);
  return holder_quotient(g, u.values, near, g.closure_cells(), gamma, g.spacing());
}

}  // namespace bernoulli
