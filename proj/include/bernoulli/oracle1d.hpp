#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <string_view>
#include <vector>

#include "bernoulli/error.hpp"
#include "bernoulli/field.hpp"
#include "bernoulli/geometry.hpp"

namespace bernoulli {

enum class Structure { linear_through, left_detached, right_detached, double_detached, identically_zero };

inline std::string_view to_string(Structure s) {
  switch (s) {
    case Structure::linear_through: return "linear-through";
    case Structure::left_detached: return "left-detached";
    case Structure::right_detached: return "right-detached";
    case Structure::double_detached: return "double-detached";
    case Structure::identically_zero: return "identically-zero";
  }
  return "?";
}

/// A candidate minimizer on [0, L]: affine on each positive segment, zero elsewhere.
struct PiecewiseLinear1D {
  Structure structure = Structure::identically_zero;
  double length = 1.0;
  double a = 0.0, b = 0.0;
  double lambda = 1.0;
  double left_support = 0.0;   // positive on [0, left_support) for detached-from-left shapes
  double right_support = 0.0;  // positive on (L - right_support, L] for detached-from-right shapes
  double energy = 0.0;

  /// Free-boundary points inside (0, L).
  [[nodiscard]] std::vector<double> breakpoints() const {
    switch (structure) {
      case Structure::left_detached: return {left_support};
      case Structure::right_detached: return {length - right_support};
      case Structure::double_detached: return {left_support, length - right_support};
      default: return {};
    }
  }

  [[nodiscard]] double eval(double x) const {
    x = std::clamp(x, 0.0, length);
    switch (structure) {
      case Structure::identically_zero: return 0.0;
      case Structure::linear_through: return a + (b - a) * x / length;
      case Structure::left_detached: return x < left_support ? a * (1.0 - x / left_support) : 0.0;
      case Structure::right_detached: {
        const double y = length - x;
        return y < right_support ? b * (1.0 - y / right_support) : 0.0;
      }
      case Structure::double_detached: {
        const double y = length - x;
        if (x < left_support) return a * (1.0 - x / left_support);
        if (y < right_support) return b * (1.0 - y / right_support);
        return 0.0;
      }
    }
    return 0.0;
  }

  /// Magnitudes of the slopes with which the function meets zero.
  [[nodiscard]] std::vector<double> detachment_slopes() const {
    std::vector<double> s;
    if (structure == Structure::left_detached || structure == Structure::double_detached)
      s.push_back(a / left_support);
    if (structure == Structure::right_detached || structure == Structure::double_detached)
      s.push_back(b / right_support);
    return s;
  }
};

/// Relative tolerance for declaring two candidate energies tied.
inline constexpr double kEnergyTieTolerance = 1e-12;

/// All global minimizers of int |u'|^2 + lambda |{u > 0}| on [0, L] with u(0) = a, u(L) = b.
inline std::vector<PiecewiseLinear1D> solve_1d_exact(double L, double a, double b, double lambda = 1.0) {
  if (!(L > 0.0) || !std::isfinite(L)) throw ArgumentError("solve_1d_exact: L must be positive");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ArgumentError("solve_1d_exact: lambda must be positive");
  if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw ValidationError("solve_1d_exact: boundary values must be finite and nonnegative");
  const double s = std::sqrt(lambda);
  std::vector<PiecewiseLinear1D> cand;
  auto base = [&](Structure st) {
    PiecewiseLinear1D p;
    p.structure = st;
    p.length = L;
    p.a = a;
    p.b = b;
    p.lambda = lambda;
    return p;
  };

  if (a == 0.0 && b == 0.0) {
    cand.push_back(base(Structure::identically_zero));
  } else {
    auto lin = base(Structure::linear_through);
    lin.energy = (a - b) * (a - b) / L + lambda * L;
    cand.push_back(lin);
  }
  const double la = a / s, lb = b / s;
  if (a > 0.0 && b == 0.0 && la < L) {
    auto p = base(Structure::left_detached);
    p.left_support = la;
    p.energy = 2.0 * a * s;
    cand.push_back(p);
  }
  if (b > 0.0 && a == 0.0 && lb < L) {
    auto p = base(Structure::right_detached);
    p.right_support = lb;
    p.energy = 2.0 * b * s;
    cand.push_back(p);
  }
  if (a > 0.0 && b > 0.0 && la + lb <= L) {
    auto p = base(Structure::double_detached);
    p.left_support = la;
    p.right_support = lb;
    p.energy = 2.0 * (a + b) * s;
    cand.push_back(p);
  }

  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : cand) best = std::min(best, c.energy);
  std::vector<PiecewiseLinear1D> out;
  for (const auto& c : cand)
    if (c.energy - best <= kEnergyTieTolerance * std::max(1.0, std::abs(best))) out.push_back(c);
  return out;
}

/// Symmetric datum level a = b at which the constant and the double triangle tie.
inline double tie_locus_symmetric(double L, double lambda = 1.0) {
  if (!(L > 0.0)) throw ArgumentError("tie_locus_symmetric: L must be positive");
  if (!(lambda > 0.0)) throw ArgumentError("tie_locus_symmetric: lambda must be positive");
  return std::sqrt(lambda) * L / 4.0;
}

struct Sweep1DRow {
  double t = 0.0;
  std::size_t count = 0;
  double gap_mid = 0.0;  // spread of minimizer values at L/2
  double energy = 0.0;
};

/// Exact minimizer sets for the symmetric data a = b = t over a t-grid.
inline std::vector<Sweep1DRow> sweep_1d(double L, double lambda, const std::vector<double>& ts) {
  std::vector<Sweep1DRow> rows;
  rows.reserve(ts.size());
  for (double t : ts) {
    if (!(t > 0.0 && t < 1.0)) throw ArgumentError("sweep_1d: t must lie in (0, 1)");
    const auto mins = solve_1d_exact(L, t, t, lambda);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& m : mins) {
      lo = std::min(lo, m.eval(0.5 * L));
      hi = std::max(hi, m.eval(0.5 * L));
    }
    rows.push_back({t, mins.size(), hi - lo, mins.front().energy});
  }
  return rows;
}

/// Samples a candidate at the closure cells of a 1D grid whose interval starts at x = 0.
inline ScalarField sample_on_grid(const PiecewiseLinear1D& p, std::shared_ptr<const Grid> grid) {
  if (grid->dimension() != 1) throw ArgumentError("sample_on_grid: grid must be 1D");
  const auto& iv = std::get<Interval>(grid->domain().shape());
  ScalarField f(grid, p.lambda);
  for (auto c : grid->closure_cells()) f.values[c] = p.eval(grid->center(c).x - iv.a);
  return f;
}

}  // namespace bernoulli
