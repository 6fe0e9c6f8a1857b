#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bernoulli/geometry.hpp"

namespace bernoulli {

/// Values of a candidate or computed u on every cell of a grid. Exterior
/// cells carry 0 and are never read; boundary cells carry the datum.
struct ScalarField {
  std::shared_ptr<const Grid> grid;
  std::vector<double> values;
  double lambda = 1.0;

  ScalarField() = default;
  ScalarField(std::shared_ptr<const Grid> g, double lam = 1.0)
      : grid(std::move(g)), values(grid->size(), 0.0), lambda(lam) {}

  [[nodiscard]] double operator[](std::size_t c) const { return values[c]; }
  double& operator[](std::size_t c) { return values[c]; }
  [[nodiscard]] std::size_t size() const { return values.size(); }

  void write_csv(std::ostream& os) const;
};

/// Stored values at or below this are treated as zero in masks.
inline constexpr double kValueTolerance = 1e-12;

/// Fields on the same lattice (same object or identical construction).
inline bool same_grid(const ScalarField& a, const ScalarField& b) {
  if (a.grid == b.grid) return true;
  if (!a.grid || !b.grid) return false;
  const Grid& g = *a.grid;
  const Grid& k = *b.grid;
  if (g.size() != k.size() || g.nx() != k.nx() || g.spacing() != k.spacing()) return false;
  for (std::size_t c = 0; c < g.size(); ++c)
    if (g.label(c) != k.label(c) || g.ix(c) != k.ix(c) || g.iy(c) != k.iy(c)) return false;
  return true;
}

inline ScalarField pointwise_max(const ScalarField& a, const ScalarField& b) {
  ScalarField out = a;
  for (std::size_t c = 0; c < out.size(); ++c) out.values[c] = std::max(a.values[c], b.values[c]);
  return out;
}

inline ScalarField pointwise_min(const ScalarField& a, const ScalarField& b) {
  ScalarField out = a;
  for (std::size_t c = 0; c < out.size(); ++c) out.values[c] = std::min(a.values[c], b.values[c]);
  return out;
}

/// max over closure cells of |a - b|.
inline double max_norm_distance(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (auto c : a.grid->closure_cells()) m = std::max(m, std::abs(a.values[c] - b.values[c]));
  return m;
}

inline void ScalarField::write_csv(std::ostream& os) const {
  os << "ix,iy,x,y,value\n";
  char buf[160];
  for (auto c : grid->closure_cells()) {
    const Point p = grid->center(c);
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g\n", grid->ix(c), grid->iy(c), p.x, p.y,
                  values[c]);
    os << buf;
  }
}

/// Reads a field written by ScalarField::write_csv back onto `grid`.
inline ScalarField read_field_csv(std::shared_ptr<const Grid> grid, std::istream& is, double lambda = 1.0) {
  ScalarField f(grid, lambda);
  std::string line;
  if (!std::getline(is, line) || line.rfind("ix,iy,x,y,value", 0) != 0)
    throw ValidationError("field csv: missing header ix,iy,x,y,value");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok[5];
    for (auto& t : tok)
      if (!std::getline(ls, t, ',')) throw ValidationError("field csv: short row: " + line);
    const int ix = std::stoi(tok[0]);
    const int iy = std::stoi(tok[1]);
    const auto c = grid->index(ix, iy);
    if (!c) throw ValidationError("field csv: cell outside grid: " + line);
    f.values[*c] = std::strtod(tok[4].c_str(), nullptr);
  }
  return f;
}

}  // namespace bernoulli
