#pragma once

#include <cstddef>
#include <vector>

#include "bernoulli/error.hpp"
#include "bernoulli/field.hpp"
#include "bernoulli/geometry.hpp"
#include "bernoulli/relaxation.hpp"

namespace bernoulli {

enum class Traversal { lexicographic, red_black };

/// The lattice functional as a weighted graph: one edge per stencil pair
/// with an interior endpoint, weight h^{d-2}, node measure h^d.
inline relax::Problem lattice_problem(const Grid& grid, Traversal traversal = Traversal::red_black) {
  const double h = grid.spacing();
  const int d = grid.dimension();
  const double w = d == 1 ? 1.0 / h : 1.0;
  std::vector<relax::Edge> edges;
  edges.reserve(grid.interior_cells().size() * static_cast<std::size_t>(d));
  std::vector<double> measure(grid.size(), 0.0);
  for (auto c : grid.interior_cells()) {
    measure[c] = grid.cell_volume();
    const auto nb = grid.neighbors(c);
    for (int k = 0; k < 2 * d; ++k) {
      const auto n = nb[k];
      if (grid.is_boundary(n) || (grid.is_interior(n) && n > c)) edges.push_back({c, n, w});
    }
  }
  std::vector<std::size_t> order;
  order.reserve(grid.interior_cells().size());
  if (traversal == Traversal::lexicographic) {
    order.assign(grid.interior_cells().begin(), grid.interior_cells().end());
  } else {
    for (int color = 0; color < 2; ++color)
      for (auto c : grid.interior_cells())
        if (((grid.ix(c) + grid.iy(c)) & 1) == color) order.push_back(c);
  }
  return relax::Problem(grid.size(), std::move(edges), std::move(measure), std::move(order), d == 1);
}

/// Sum over stencil edges of ((u_i - u_j)/h)^2 h^d.
inline double dirichlet_energy(const ScalarField& u) {
  return relax::dirichlet(lattice_problem(*u.grid, Traversal::lexicographic), u.values);
}

/// (number of interior cells with value > threshold) * h^d.
inline double positivity_measure(const ScalarField& u, double threshold = 0.0) {
  if (!(threshold >= 0.0)) throw ArgumentError("positivity_measure: threshold must be >= 0");
  std::size_t count = 0;
  for (auto c : u.grid->interior_cells())
    if (u.values[c] > threshold) ++count;
  return static_cast<double>(count) * u.grid->cell_volume();
}

inline double total_energy(const ScalarField& u, double lambda) {
  if (!(lambda > 0.0)) throw ArgumentError("total_energy: lambda must be positive");
  return dirichlet_energy(u) + lambda * positivity_measure(u, 0.0);
}

/// Best of {0, neighbor mean} for one interior cell, ties to 0.
inline double local_update(const ScalarField& u, std::size_t cell, double lambda) {
  const Grid& g = *u.grid;
  if (cell >= g.size() || !g.is_interior(cell)) throw ArgumentError("local_update: cell is not interior");
  if (!(lambda > 0.0)) throw ArgumentError("local_update: lambda must be positive");
  const auto nb = g.neighbors(cell);
  const int n = g.stencil_size();
  double mean = 0.0;
  for (int k = 0; k < n; ++k) mean += u.values[nb[k]];
  mean /= n;
  if (!(mean > 0.0)) return 0.0;
  const double h = g.spacing(), scale = g.dimension() == 1 ? 1.0 / h : 1.0;
  double at_mean = 0.0, at_zero = 0.0;
  for (int k = 0; k < n; ++k) {
    const double v = u.values[nb[k]];
    at_mean += scale * (mean - v) * (mean - v);
    at_zero += scale * v * v;
  }
  at_mean += lambda * g.cell_volume();
  return at_mean < at_zero ? mean : 0.0;
}

}  // namespace bernoulli
