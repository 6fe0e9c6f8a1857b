#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "bernoulli/boundary_data.hpp"
#include "bernoulli/energy.hpp"
#include "bernoulli/error.hpp"
#include "bernoulli/field.hpp"
#include "bernoulli/geometry.hpp"
#include "bernoulli/relaxation.hpp"

namespace bernoulli {

enum class Initialization { zero, datum_sup, harmonic, given };
enum class SolveMode { single, lower, upper };

inline std::string_view to_string(Initialization i) {
  switch (i) {
    case Initialization::zero: return "zero";
    case Initialization::datum_sup: return "datum-sup";
    case Initialization::harmonic: return "harmonic";
    case Initialization::given: return "given";
  }
  return "?";
}

inline std::string_view to_string(SolveMode m) {
  switch (m) {
    case SolveMode::single: return "single";
    case SolveMode::lower: return "lower";
    case SolveMode::upper: return "upper";
  }
  return "?";
}

inline std::string_view to_string(Traversal t) {
  return t == Traversal::lexicographic ? "lexicographic" : "red-black";
}

struct SolveOptions {
  double lambda = 1.0;
  int max_sweeps = 100000;
  double tolerance = 1e-10;
  Initialization init = Initialization::datum_sup;
  Traversal traversal = Traversal::red_black;
  std::optional<ScalarField> initial;  // used with Initialization::given

  /// Harmonic solve on the current positive set after each sweep.
  bool accelerate = true;
  /// Collective front moves accepted on strict energy decrease.
  bool refine_front = false;
  /// solve_extremes: when one extreme's energy exceeds the other's by more
  /// than this, it is replaced by the lower-energy field. Negative disables.
  double select_tol = -1.0;

  void validate() const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ValidationError("solver: lambda must be positive");
    if (!(tolerance > 0.0)) throw ValidationError("solver: tolerance must be positive");
    if (max_sweeps < 1) throw ValidationError("solver: max_sweeps must be at least 1");
    if (init == Initialization::given && !initial) throw ValidationError("solver: given initialization needs a field");
  }
};

struct SolveReport {
  double initial_energy = 0.0;
  double energy = 0.0;
  int sweeps = 0;
  double residual = 0.0;
  double positivity_measure = 0.0;
  bool converged = false;
  SolveMode mode = SolveMode::single;
  int harmonic_solves = 0;
  int front_moves = 0;
  std::vector<double> energy_history;
};

struct Solution {
  ScalarField field;
  SolveReport report;
};

namespace detail {

inline relax::Options relax_options(const SolveOptions& o) {
  relax::Options r;
  r.tolerance = o.tolerance;
  r.max_sweeps = o.max_sweeps;
  r.accelerate = o.accelerate;
  r.refine_front = o.refine_front;
  r.zero_clamp = kValueTolerance;
  return r;
}

inline void fill_report(const relax::Problem& p, const ScalarField& u, const SolveOptions& o, SolveReport& rep) {
  rep.energy = relax::energy(p, u.values, o.lambda);
  rep.residual = relax::fixed_point_residual(p, u.values, o.lambda);
  rep.positivity_measure = positivity_measure(u, 0.0);
}

}  // namespace detail

/// Thresholded Gauss-Seidel relaxation with boundary cells fixed to g.
inline Solution solve(std::shared_ptr<const Grid> grid, const BoundaryDatum& g, const SolveOptions& opts,
                      SolveMode mode = SolveMode::single) {
  opts.validate();
  g.validate();
  ScalarField u(grid, opts.lambda);
  const auto bdata = sample_boundary(*grid, g);
  for (auto c : grid->boundary_cells()) u.values[c] = bdata[c];
  const relax::Problem p = lattice_problem(*grid, opts.traversal);
  const auto ropt = detail::relax_options(opts);

  switch (opts.init) {
    case Initialization::zero: break;
    case Initialization::datum_sup: {
      const double s = datum_sup(*grid, g);
      for (auto c : grid->interior_cells()) u.values[c] = s;
      break;
    }
    case Initialization::harmonic: {
      std::vector<std::uint8_t> all(grid->size(), 0);
      for (auto c : grid->interior_cells()) all[c] = 1;
      relax::harmonic_solve(p, u.values, all, 0.01 * opts.tolerance, kValueTolerance);
      break;
    }
    case Initialization::given: {
      const ScalarField& init = *opts.initial;
      if (!init.grid || !same_grid(init, u)) throw ArgumentError("solver: initial field is on a different grid");
      for (auto c : grid->interior_cells()) {
        const double v = init.values[c];
        if (!std::isfinite(v) || v < 0.0) throw ValidationError("solver: initial field must be finite and >= 0");
        u.values[c] = v;
      }
      break;
    }
  }

  const relax::Report rr = relax::minimize(p, u.values, opts.lambda, ropt);
  Solution out{std::move(u), {}};
  SolveReport& rep = out.report;
  rep.initial_energy = rr.initial_energy;
  rep.energy = rr.energy;
  rep.sweeps = rr.sweeps;
  rep.residual = rr.residual;
  rep.converged = rr.converged && rr.residual <= opts.tolerance;
  rep.mode = mode;
  rep.harmonic_solves = rr.harmonic_solves;
  rep.front_moves = rr.front_moves;
  rep.energy_history = rr.history;
  rep.positivity_measure = positivity_measure(out.field, 0.0);
  return out;
}

struct Extremes {
  ScalarField lower, upper;
  SolveReport lower_report, upper_report;
};

/// Lower solve from zero and upper solve from the constant sup g. Without
/// front refinement these are the smallest and largest fixed points of the
/// local update, hence ordered. Otherwise order is restored by pointwise
/// min/max, which cannot raise the summed energy.
inline Extremes solve_extremes(std::shared_ptr<const Grid> grid, const BoundaryDatum& g, SolveOptions opts) {
  opts.validate();
  SolveOptions lo = opts, hi = opts;
  lo.init = Initialization::zero;
  hi.init = Initialization::datum_sup;
  lo.initial.reset();
  hi.initial.reset();
  Solution a = solve(grid, g, lo, SolveMode::lower);
  Solution b = solve(grid, g, hi, SolveMode::upper);

  const relax::Problem p = lattice_problem(*grid, opts.traversal);
  if (opts.select_tol >= 0.0) {
    if (b.report.energy > a.report.energy + opts.select_tol) {
      b.field = a.field;
      detail::fill_report(p, b.field, opts, b.report);
    } else if (a.report.energy > b.report.energy + opts.select_tol) {
      a.field = b.field;
      detail::fill_report(p, a.field, opts, a.report);
    }
  }
  bool crossed = false;
  for (auto c : grid->interior_cells())
    if (a.field.values[c] > b.field.values[c]) crossed = true;
  if (crossed) {
    ScalarField mn = pointwise_min(a.field, b.field), mx = pointwise_max(a.field, b.field);
    a.field = std::move(mn);
    b.field = std::move(mx);
    detail::fill_report(p, a.field, opts, a.report);
    detail::fill_report(p, b.field, opts, b.report);
  }
  return {std::move(a.field), std::move(b.field), std::move(a.report), std::move(b.report)};
}

/// Positive interior cells with a stencil neighbor at zero.
inline std::vector<std::size_t> free_boundary_cells(const ScalarField& u) {
  const Grid& g = *u.grid;
  std::vector<std::size_t> out;
  const int n = g.stencil_size();
  for (auto c : g.interior_cells()) {
    if (!(u.values[c] > kValueTolerance)) continue;
    const auto nb = g.neighbors(c);
    for (int k = 0; k < n; ++k) {
      if (!(u.values[nb[k]] > kValueTolerance)) {
        out.push_back(c);
        break;
      }
    }
  }
  return out;
}

struct GradientStats {
  std::size_t count = 0;
  double median = std::numeric_limits<double>::quiet_NaN();
  double q1 = std::numeric_limits<double>::quiet_NaN();
  double q3 = std::numeric_limits<double>::quiet_NaN();
  [[nodiscard]] bool empty() const { return count == 0; }
  [[nodiscard]] double iqr() const { return q3 - q1; }
};

namespace detail {
inline double quantile_sorted(const std::vector<double>& v, double q) {
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto k = static_cast<std::size_t>(std::floor(pos));
  if (k + 1 >= v.size()) return v.back();
  const double f = pos - static_cast<double>(k);
  return v[k] * (1.0 - f) + v[k + 1] * f;
}
}  // namespace detail

/// |grad u| at free-boundary cells. Per axis the difference is taken toward
/// the positive neighbor; central if both are positive, omitted if neither is.
inline std::vector<double> free_boundary_gradients(const ScalarField& u) {
  const Grid& g = *u.grid;
  const double h = g.spacing();
  std::vector<double> out;
  for (auto c : free_boundary_cells(u)) {
    const auto nb = g.neighbors(c);
    double sum2 = 0.0;
    for (int axis = 0; axis < g.dimension(); ++axis) {
      const double um = u.values[nb[2 * axis]], up = u.values[nb[2 * axis + 1]];
      const bool pm = um > kValueTolerance, pp = up > kValueTolerance;
      double d = 0.0;
      if (pm && pp) d = (up - um) / (2.0 * h);
      else if (pp) d = (up - u.values[c]) / h;
      else if (pm) d = (u.values[c] - um) / h;
      sum2 += d * d;
    }
    out.push_back(std::sqrt(sum2));
  }
  return out;
}

inline GradientStats gradient_on_free_boundary(const ScalarField& u) {
  auto v = free_boundary_gradients(u);
  GradientStats st;
  st.count = v.size();
  if (v.empty()) return st;
  std::sort(v.begin(), v.end());
  st.median = detail::quantile_sorted(v, 0.5);
  st.q1 = detail::quantile_sorted(v, 0.25);
  st.q3 = detail::quantile_sorted(v, 0.75);
  return st;
}

/// Desk-scale stand-in for the H^1 size of a datum: sup over boundary cells
/// plus the root Dirichlet energy of its discrete harmonic extension.
inline double datum_h1_proxy(std::shared_ptr<const Grid> grid, const BoundaryDatum& g) {
  ScalarField u(grid);
  for (auto c : grid->boundary_cells()) u.values[c] = eval_datum(g, grid->center(c));
  const relax::Problem p = lattice_problem(*grid);
  std::vector<std::uint8_t> all(grid->size(), 0);
  for (auto c : grid->interior_cells()) all[c] = 1;
  relax::harmonic_solve(p, u.values, all, 1e-12, 0.0);
  return datum_sup(*grid, g) + std::sqrt(relax::dirichlet(p, u.values));
}

}  // namespace bernoulli
