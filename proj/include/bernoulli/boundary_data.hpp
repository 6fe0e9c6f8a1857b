#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bernoulli/error.hpp"
#include "bernoulli/field.hpp"
#include "bernoulli/geometry.hpp"

namespace bernoulli {

enum class DatumKind { constant, linear, power, table, step, radial_step };

inline std::string_view to_string(DatumKind k) {
  switch (k) {
    case DatumKind::constant: return "constant";
    case DatumKind::linear: return "linear";
    case DatumKind::power: return "power";
    case DatumKind::table: return "table";
    case DatumKind::step: return "step";
    case DatumKind::radial_step: return "radial-step";
  }
  return "?";
}

enum class TableAxis { x, y, angle };

/// Closed-form or tabulated boundary datum g, evaluated pointwise and then
/// mapped through `multiplier * g + shift` (how family members are built).
struct BoundaryDatum {
  DatumKind kind = DatumKind::constant;

  // constant / linear: value + gradient . x
  double value = 0.0;
  Point gradient{};

  // power: scale * |x - anchor|^exponent
  Point anchor{};
  double exponent = 1.0;
  double scale = 1.0;

  // table: piecewise-linear in the chosen coordinate over [lo, hi], clamped
  TableAxis axis = TableAxis::x;
  Point center{};  // also the radial-step center and the angle origin
  double lo = 0.0, hi = 1.0;
  std::vector<double> samples;

  // step: inside where normal . x <= offset; radial-step: inside where |x - center| <= radius
  Point normal{1.0, 0.0};
  double offset = 0.0;
  double radius = 1.0;
  double inside = 1.0, outside = 0.0;

  double multiplier = 1.0;
  double shift = 0.0;

  static BoundaryDatum constant(double c) {
    BoundaryDatum g;
    g.value = c;
    return g;
  }
  static BoundaryDatum linear(double c0, Point grad) {
    BoundaryDatum g;
    g.kind = DatumKind::linear;
    g.value = c0;
    g.gradient = grad;
    return g;
  }
  static BoundaryDatum power(Point anchor, double exponent, double scale = 1.0) {
    BoundaryDatum g;
    g.kind = DatumKind::power;
    g.anchor = anchor;
    g.exponent = exponent;
    g.scale = scale;
    return g;
  }
  static BoundaryDatum table(TableAxis axis, double lo, double hi, std::vector<double> samples,
                             Point origin = {}) {
    BoundaryDatum g;
    g.kind = DatumKind::table;
    g.axis = axis;
    g.lo = lo;
    g.hi = hi;
    g.samples = std::move(samples);
    g.center = origin;
    return g;
  }
  static BoundaryDatum step(Point normal, double offset, double inside, double outside) {
    BoundaryDatum g;
    g.kind = DatumKind::step;
    g.normal = normal;
    g.offset = offset;
    g.inside = inside;
    g.outside = outside;
    return g;
  }
  static BoundaryDatum radial_step(Point center, double radius, double inside, double outside) {
    BoundaryDatum g;
    g.kind = DatumKind::radial_step;
    g.center = center;
    g.radius = radius;
    g.inside = inside;
    g.outside = outside;
    return g;
  }

  /// Structural checks that do not depend on the evaluation point.
  void validate() const {
    auto fail = [](const std::string& m) { throw ValidationError("datum: " + m); };
    auto fin = [](double v) { return std::isfinite(v); };
    if (!fin(multiplier) || !fin(shift)) fail("multiplier and shift must be finite");
    switch (kind) {
      case DatumKind::constant:
        if (!fin(value)) fail("value must be finite");
        break;
      case DatumKind::linear:
        if (!fin(value) || !fin(gradient.x) || !fin(gradient.y)) fail("linear coefficients must be finite");
        break;
      case DatumKind::power:
        if (!(exponent > 0.0) || !fin(exponent)) fail("power exponent must be positive");
        if (!fin(scale) || !fin(anchor.x) || !fin(anchor.y)) fail("power parameters must be finite");
        break;
      case DatumKind::table:
        if (samples.size() < 2) fail("table needs at least 2 samples");
        if (!(hi > lo) || !fin(lo) || !fin(hi)) fail("table range must satisfy lo < hi");
        for (double v : samples)
          if (!fin(v)) fail("table samples must be finite");
        break;
      case DatumKind::step:
        if (!fin(offset) || !fin(inside) || !fin(outside) || std::hypot(normal.x, normal.y) == 0.0)
          fail("step needs a nonzero normal and finite levels");
        break;
      case DatumKind::radial_step:
        if (!(radius > 0.0) || !fin(inside) || !fin(outside)) fail("radial-step needs a positive radius");
        break;
    }
  }

  [[nodiscard]] double raw(Point p) const {
    switch (kind) {
      case DatumKind::constant: return value;
      case DatumKind::linear: return value + gradient.x * p.x + gradient.y * p.y;
      case DatumKind::power: return scale * std::pow(distance(p, anchor), exponent);
      case DatumKind::table: {
        double s = axis == TableAxis::x ? p.x : axis == TableAxis::y ? p.y
                                                                     : std::atan2(p.y - center.y, p.x - center.x);
        s = std::clamp((s - lo) / (hi - lo), 0.0, 1.0) * static_cast<double>(samples.size() - 1);
        const auto k = std::min(static_cast<std::size_t>(s), samples.size() - 2);
        const double f = s - static_cast<double>(k);
        return samples[k] * (1.0 - f) + samples[k + 1] * f;
      }
      case DatumKind::step: return normal.x * p.x + normal.y * p.y <= offset ? inside : outside;
      case DatumKind::radial_step: return distance(p, center) <= radius ? inside : outside;
    }
    return 0.0;
  }
};

/// g(point). Throws ValidationError when the value is negative or not finite.
inline double eval_datum(const BoundaryDatum& g, Point p) {
  const double v = g.multiplier * g.raw(p) + g.shift;
  if (!std::isfinite(v)) throw ValidationError("datum: non-finite value");
  if (v < 0.0) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "datum: negative value %.6g at (%.6g, %.6g)", v, p.x, p.y);
    throw ValidationError(buf);
  }
  return v;
}

/// Datum values on every boundary cell (other cells 0).
inline std::vector<double> sample_boundary(const Grid& grid, const BoundaryDatum& g) {
  std::vector<double> out(grid.size(), 0.0);
  for (auto c : grid.boundary_cells()) out[c] = eval_datum(g, grid.center(c));
  return out;
}

/// max of g over boundary cells.
inline double datum_sup(const Grid& grid, const BoundaryDatum& g) {
  double m = 0.0;
  for (auto c : grid.boundary_cells()) m = std::max(m, eval_datum(g, grid.center(c)));
  return m;
}

enum class FamilyKind { additive_shift, scaling, vertical_translation };

inline std::string_view to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::additive_shift: return "additive-shift";
    case FamilyKind::scaling: return "scaling";
    case FamilyKind::vertical_translation: return "vertical-translation";
  }
  return "?";
}

/// Monotone family t -> g_t on (0, 1).
///   additive-shift:        g_t = g + rate * t          (rate > 0)
///   scaling:               g_t = t * g
///   vertical-translation:  g_t = g + rate * t          (rate >= 1, so g_t - g_s >= t - s)
struct DatumFamily {
  BoundaryDatum base;
  FamilyKind kind = FamilyKind::additive_shift;
  double rate = 1.0;
  double bound = std::numeric_limits<double>::infinity();  // M, sup-norm bound over the family

  void validate() const {
    base.validate();
    if (!std::isfinite(rate)) throw ValidationError("family: rate must be finite");
    if (kind == FamilyKind::additive_shift && !(rate > 0.0))
      throw ValidationError("family: additive-shift rate must be positive");
    if (kind == FamilyKind::vertical_translation && !(rate >= 1.0))
      throw ValidationError("family: vertical-translation rate must be at least 1");
    if (!(bound > 0.0)) throw ValidationError("family: bound must be positive");
  }
};

namespace detail {
inline BoundaryDatum family_at(const DatumFamily& fam, double t) {
  BoundaryDatum g = fam.base;
  switch (fam.kind) {
    case FamilyKind::additive_shift:
    case FamilyKind::vertical_translation: g.shift += fam.rate * t; break;
    case FamilyKind::scaling:
      g.multiplier *= t;
      g.shift *= t;
      break;
  }
  return g;
}
}  // namespace detail

inline BoundaryDatum family_member(const DatumFamily& fam, double t) {
  if (!(t > 0.0 && t < 1.0)) throw ArgumentError("family_member: t must lie in (0, 1)");
  fam.validate();
  return detail::family_at(fam, t);
}

/// sup over t in (0,1) of the sup-norm of g_t on the boundary cells. Every
/// family kind is monotone in t, so the supremum is the t -> 1 limit.
inline double family_sup_norm(const DatumFamily& fam, const Grid& grid) {
  return datum_sup(grid, detail::family_at(fam, 1.0));
}

inline bool family_within_bound(const DatumFamily& fam, const Grid& grid) {
  return family_sup_norm(fam, grid) <= fam.bound;
}

struct ModulusCurve {
  std::vector<double> delta;
  std::vector<double> omega;

  [[nodiscard]] std::size_t size() const { return delta.size(); }
  void write_csv(std::ostream& os) const {
    os << "delta,omega\n";
    char buf[96];
    for (std::size_t i = 0; i < delta.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", delta[i], omega[i]);
      os << buf;
    }
  }
};

/// Regions at or above this size are subsampled by a fixed stride.
inline constexpr std::size_t kModulusFullScanLimit = 100000;

namespace detail {

inline std::vector<std::uint8_t> region_mask(const Grid& grid, std::span<const std::size_t> region) {
  std::vector<std::uint8_t> m(grid.size(), 0);
  for (auto c : region) {
    if (c >= grid.size()) throw ArgumentError("region cell outside grid");
    m[c] = 1;
  }
  return m;
}

// Lattice offsets (half-plane representatives) of length at most r cells.
struct Offset {
  int di, dj;
  long norm2;
};

inline std::vector<Offset> half_offsets(int dim, double radius_cells) {
  std::vector<Offset> out;
  const int r = static_cast<int>(std::floor(radius_cells + 1e-9));
  const double r2 = radius_cells * radius_cells * (1.0 + 1e-12);
  const int jr = dim == 2 ? r : 0;
  for (int dj = 0; dj <= jr; ++dj) {
    for (int di = -r; di <= r; ++di) {
      if (dj == 0 && di <= 0) continue;
      const long n2 = static_cast<long>(di) * di + static_cast<long>(dj) * dj;
      if (static_cast<double>(n2) <= r2) out.push_back({di, dj, n2});
    }
  }
  std::sort(out.begin(), out.end(), [](const Offset& a, const Offset& b) {
    return a.norm2 != b.norm2 ? a.norm2 < b.norm2 : (a.dj != b.dj ? a.dj < b.dj : a.di < b.di);
  });
  return out;
}

}  // namespace detail

/// omega(delta) = max |u(x) - u(y)| over region pairs with |x - y| <= delta.
inline ModulusCurve empirical_modulus(const Grid& grid, std::span<const double> values,
                                      std::span<const std::size_t> region, std::span<const double> deltas) {
  if (region.empty()) throw ArgumentError("empirical_modulus: empty region");
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    if (!(deltas[k] > 0.0)) throw ArgumentError("empirical_modulus: deltas must be positive");
    if (k > 0 && !(deltas[k] > deltas[k - 1])) throw ArgumentError("empirical_modulus: deltas must be increasing");
  }
  ModulusCurve curve;
  curve.delta.assign(deltas.begin(), deltas.end());
  curve.omega.assign(deltas.size(), 0.0);
  if (deltas.empty()) return curve;

  const double h = grid.spacing();
  const auto mask = detail::region_mask(grid, region);
  const auto offsets = detail::half_offsets(grid.dimension(), deltas.back() / h);
  const std::size_t stride = region.size() > kModulusFullScanLimit
                                 ? (region.size() + kModulusFullScanLimit - 1) / kModulusFullScanLimit
                                 : 1;
  std::vector<std::size_t> base;
  for (std::size_t k = 0; k < region.size(); k += stride) base.push_back(region[k]);

  // Each pair is seen from whichever endpoint was sampled, so with a
  // subsampled base both orientations of an offset are scanned.
  const bool both = stride > 1;
  std::size_t next = 0;
  double running = 0.0;
  for (const auto& off : offsets) {
    const double len = std::sqrt(static_cast<double>(off.norm2)) * h;
    while (next < deltas.size() && deltas[next] * (1.0 + 1e-12) < len) curve.omega[next++] = running;
    if (next == deltas.size()) break;
    double m = 0.0;
    for (int sgn = 1; sgn >= (both ? -1 : 1); sgn -= 2) {
      for (auto c : base) {
        const auto n = grid.index(grid.ix(c) + sgn * off.di, grid.iy(c) + sgn * off.dj);
        if (n && mask[*n]) m = std::max(m, std::abs(values[c] - values[*n]));
      }
    }
    running = std::max(running, m);
  }
  while (next < deltas.size()) curve.omega[next++] = running;
  return curve;
}

inline ModulusCurve empirical_modulus(const ScalarField& u, std::span<const std::size_t> region,
                                      std::span<const double> deltas) {
  return empirical_modulus(*u.grid, u.values, region, deltas);
}

/// Modulus of the datum itself, sampled at the region's cell centers.
inline ModulusCurve empirical_modulus(const Grid& grid, const BoundaryDatum& g,
                                      std::span<const std::size_t> region, std::span<const double> deltas) {
  std::vector<double> v(grid.size(), 0.0);
  for (auto c : region) v[c] = eval_datum(g, grid.center(c));
  return empirical_modulus(grid, v, region, deltas);
}

struct HolderResult {
  double value = 0.0;
  std::size_t a = 0, b = 0;  // worst pair
};

/// sup |u(x) - u(y)| / |x - y|^gamma over x in A, y in B, |x - y| >= min_sep.
inline HolderResult holder_quotient(const Grid& grid, std::span<const double> values,
                                    std::span<const std::size_t> a_set, std::span<const std::size_t> b_set,
                                    double gamma, double min_sep) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ArgumentError("holder: gamma must lie in (0, 1]");
  const double h = grid.spacing();
  if (!(min_sep >= h * (1.0 - 1e-12))) throw ArgumentError("holder: min_sep must be at least h");
  if (a_set.empty() || b_set.empty()) throw ArgumentError("holder: empty pair set");

  int ilo = std::numeric_limits<int>::max(), ihi = std::numeric_limits<int>::min();
  int jlo = ilo, jhi = ihi;
  for (auto s : {a_set, b_set})
    for (auto c : s) {
      ilo = std::min(ilo, grid.ix(c));
      ihi = std::max(ihi, grid.ix(c));
      jlo = std::min(jlo, grid.iy(c));
      jhi = std::max(jhi, grid.iy(c));
    }
  const long di_max = ihi - ilo, dj_max = jhi - jlo;
  // |x - y|^{-gamma} tabulated by squared lattice distance
  std::vector<double> inv_pow(static_cast<std::size_t>(di_max * di_max + dj_max * dj_max + 1), 0.0);
  const double sep2 = (min_sep / h) * (min_sep / h) * (1.0 - 1e-12);
  for (std::size_t n2 = 1; n2 < inv_pow.size(); ++n2)
    if (static_cast<double>(n2) >= sep2) inv_pow[n2] = std::pow(std::sqrt(static_cast<double>(n2)) * h, -gamma);

  HolderResult best;
  bool any = false;
  std::vector<int> bx(b_set.size()), by(b_set.size());
  std::vector<double> bv(b_set.size());
  for (std::size_t k = 0; k < b_set.size(); ++k) {
    bx[k] = grid.ix(b_set[k]);
    by[k] = grid.iy(b_set[k]);
    bv[k] = values[b_set[k]];
  }
  for (auto ca : a_set) {
    const int ax = grid.ix(ca), ay = grid.iy(ca);
    const double av = values[ca];
    for (std::size_t k = 0; k < b_set.size(); ++k) {
      const long dx = bx[k] - ax, dy = by[k] - ay;
      const double w = inv_pow[static_cast<std::size_t>(dx * dx + dy * dy)];
      if (w == 0.0) continue;
      any = true;
      const double q = std::abs(av - bv[k]) * w;
      if (q > best.value) best = {q, ca, b_set[k]};
    }
  }
  if (!any) throw ArgumentError("holder: no pairs at distance >= min_sep");
  return best;
}

inline double holder_seminorm(const ScalarField& u, double gamma, std::span<const std::size_t> region,
                              double min_sep) {
  return holder_quotient(*u.grid, u.values, region, region, gamma, min_sep).value;
}

}  // namespace bernoulli
