#pragma once

// Admissible domains D and their uniform cell-centered lattices.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bernoulli/error.hpp"

namespace bernoulli {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct Interval {
  double a = 0.0;
  double b = 1.0;
};

struct Rectangle {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
};

struct Disk {
  Point center;
  double radius = 1.0;
};

struct Annulus {
  Point center;
  double inner = 1.0;
  double outer = 2.0;
};

/// Vertices in convex position; stored counter-clockwise after validation.
struct ConvexPolygon {
  std::vector<Point> vertices;
};

/// Region between a piecewise-linear graph y = f(x), x in [x0, x1], and the
/// horizontal line y = bound. With `upward` the domain is f(x) < y < bound,
/// otherwise bound < y < f(x). Samples are taken at uniform x.
struct LipschitzGraph {
  double x0 = 0.0;
  double x1 = 1.0;
  std::vector<double> samples;
  bool upward = true;
  double bound = 1.0;

  [[nodiscard]] double eval(double x) const {
    const auto n = samples.size() - 1;
    const double s = std::clamp((x - x0) / (x1 - x0), 0.0, 1.0) * static_cast<double>(n);
    const auto k = std::min(static_cast<std::size_t>(s), n - 1);
    const double w = s - static_cast<double>(k);
    return (1.0 - w) * samples[k] + w * samples[k + 1];
  }
  [[nodiscard]] double sample_spacing() const {
    return (x1 - x0) / static_cast<double>(samples.size() - 1);
  }
  [[nodiscard]] double segment_slope(std::size_t k) const {
    return (samples[k + 1] - samples[k]) / sample_spacing();
  }
};

enum class DomainKind { interval, rectangle, disk, annulus, convex_polygon, lipschitz_graph };

inline std::string_view to_string(DomainKind k) {
  switch (k) {
    case DomainKind::interval: return "interval";
    case DomainKind::rectangle: return "rectangle";
    case DomainKind::disk: return "disk";
    case DomainKind::annulus: return "annulus";
    case DomainKind::convex_polygon: return "convex-polygon";
    case DomainKind::lipschitz_graph: return "lipschitz-graph";
  }
  return "unknown";
}

struct Box {
  double xmin, xmax, ymin, ymax;
};

namespace detail {

inline double cross(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline double segment_distance(Point p, Point a, Point b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, Point{a.x + t * dx, a.y + t * dy});
}

inline bool finite(double v) { return std::isfinite(v); }

}  // namespace detail

/// Validated geometry of an open domain D in R^1 or R^2.
class DomainSpec {
 public:
  using Shape = std::variant<Interval, Rectangle, Disk, Annulus, ConvexPolygon, LipschitzGraph>;

  explicit DomainSpec(Shape shape) : shape_(std::move(shape)) { validate(); }

  [[nodiscard]] const Shape& shape() const { return shape_; }
  [[nodiscard]] DomainKind kind() const { return static_cast<DomainKind>(shape_.index()); }
  [[nodiscard]] int dimension() const { return kind() == DomainKind::interval ? 1 : 2; }

  /// Membership in the open set.
  [[nodiscard]] bool contains(Point p) const {
    return std::visit([p](const auto& s) { return contains_impl(s, p); }, shape_);
  }

  [[nodiscard]] Box bounds() const {
    return std::visit([](const auto& s) { return bounds_impl(s); }, shape_);
  }

  /// Analytic d-dimensional measure.
  [[nodiscard]] double measure() const {
    return std::visit([](const auto& s) { return measure_impl(s); }, shape_);
  }

  /// Smallest geometric length scale (interval length, annulus width, ...).
  [[nodiscard]] double feature_size() const {
    return std::visit([](const auto& s) { return feature_impl(s); }, shape_);
  }

  [[nodiscard]] double diameter() const {
    const Box b = bounds();
    return std::hypot(b.xmax - b.xmin, b.ymax - b.ymin);
  }

 private:
  void validate();

  static bool contains_impl(const Interval& s, Point p) { return s.a < p.x && p.x < s.b; }
  static bool contains_impl(const Rectangle& s, Point p) {
    return s.x0 < p.x && p.x < s.x1 && s.y0 < p.y && p.y < s.y1;
  }
  static bool contains_impl(const Disk& s, Point p) { return distance(p, s.center) < s.radius; }
  static bool contains_impl(const Annulus& s, Point p) {
    const double r = distance(p, s.center);
    return s.inner < r && r < s.outer;
  }
  static bool contains_impl(const ConvexPolygon& s, Point p) {
    const auto n = s.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (detail::cross(s.vertices[i], s.vertices[(i + 1) % n], p) <= 0.0) return false;
    }
    return true;
  }
  static bool contains_impl(const LipschitzGraph& s, Point p) {
    if (!(s.x0 < p.x && p.x < s.x1)) return false;
    const double f = s.eval(p.x);
    return s.upward ? (f < p.y && p.y < s.bound) : (s.bound < p.y && p.y < f);
  }

  static Box bounds_impl(const Interval& s) { return {s.a, s.b, 0.0, 0.0}; }
  static Box bounds_impl(const Rectangle& s) { return {s.x0, s.x1, s.y0, s.y1}; }
  static Box bounds_impl(const Disk& s) {
    return {s.center.x - s.radius, s.center.x + s.radius, s.center.y - s.radius,
            s.center.y + s.radius};
  }
  static Box bounds_impl(const Annulus& s) {
    return {s.center.x - s.outer, s.center.x + s.outer, s.center.y - s.outer,
            s.center.y + s.outer};
  }
  static Box bounds_impl(const ConvexPolygon& s) {
    Box b{std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest(),
          std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest()};
    for (const auto& v : s.vertices) {
      b.xmin = std::min(b.xmin, v.x);
      b.xmax = std::max(b.xmax, v.x);
      b.ymin = std::min(b.ymin, v.y);
      b.ymax = std::max(b.ymax, v.y);
    }
    return b;
  }
  static Box bounds_impl(const LipschitzGraph& s) {
    const auto [lo, hi] = std::minmax_element(s.samples.begin(), s.samples.end());
    return {s.x0, s.x1, std::min(*lo, s.bound), std::max(*hi, s.bound)};
  }

  static double measure_impl(const Interval& s) { return s.b - s.a; }
  static double measure_impl(const Rectangle& s) { return (s.x1 - s.x0) * (s.y1 - s.y0); }
  static double measure_impl(const Disk& s) { return std::numbers::pi * s.radius * s.radius; }
  static double measure_impl(const Annulus& s) {
    return std::numbers::pi * (s.outer * s.outer - s.inner * s.inner);
  }
  static double measure_impl(const ConvexPolygon& s) {
    double a = 0.0;
    const auto n = s.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& p = s.vertices[i];
      const auto& q = s.vertices[(i + 1) % n];
      a += p.x * q.y - q.x * p.y;
    }
    return 0.5 * a;
  }
  static double measure_impl(const LipschitzGraph& s) {
    double a = 0.0;
    const double dx = s.sample_spacing();
    for (std::size_t k = 0; k + 1 < s.samples.size(); ++k) {
      a += 0.5 * dx * (std::abs(s.bound - s.samples[k]) + std::abs(s.bound - s.samples[k + 1]));
    }
    return a;
  }

  static double feature_impl(const Interval& s) { return s.b - s.a; }
  static double feature_impl(const Rectangle& s) { return std::min(s.x1 - s.x0, s.y1 - s.y0); }
  static double feature_impl(const Disk& s) { return s.radius; }
  static double feature_impl(const Annulus& s) { return s.outer - s.inner; }
  static double feature_impl(const ConvexPolygon& s) {
    // polygon width: smallest extent orthogonal to an edge
    const auto n = s.vertices.size();
    double width = std::numeric_limits<double>::max();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& a = s.vertices[i];
      const auto& b = s.vertices[(i + 1) % n];
      const double len = distance(a, b);
      double far = 0.0;
      for (const auto& v : s.vertices) far = std::max(far, detail::cross(a, b, v) / len);
      width = std::min(width, far);
    }
    return width;
  }
  static double feature_impl(const LipschitzGraph& s) {
    double gap = std::numeric_limits<double>::max();
    for (double f : s.samples) gap = std::min(gap, std::abs(s.bound - f));
    return std::min(gap, s.x1 - s.x0);
  }

  Shape shape_;
};

inline void DomainSpec::validate() {
  auto fail = [](const std::string& m) { throw ValidationError("domain: " + m); };
  std::visit(
      [&](auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Interval>) {
          if (!detail::finite(s.a) || !detail::finite(s.b) || !(s.a < s.b))
            fail("interval needs finite a < b");
        } else if constexpr (std::is_same_v<T, Rectangle>) {
          if (!(s.x0 < s.x1) || !(s.y0 < s.y1) || !detail::finite(s.x0) || !detail::finite(s.x1) ||
              !detail::finite(s.y0) || !detail::finite(s.y1))
            fail("rectangle needs finite x0 < x1 and y0 < y1");
        } else if constexpr (std::is_same_v<T, Disk>) {
          if (!(s.radius > 0.0) || !detail::finite(s.radius)) fail("disk radius must be positive");
        } else if constexpr (std::is_same_v<T, Annulus>) {
          if (!(s.inner > 0.0) || !(s.inner < s.outer) || !detail::finite(s.outer))
            fail("annulus needs 0 < inner < outer");
        } else if constexpr (std::is_same_v<T, ConvexPolygon>) {
          auto& v = s.vertices;
          if (v.size() < 3) fail("convex-polygon needs at least 3 vertices");
          for (const auto& p : v)
            if (!detail::finite(p.x) || !detail::finite(p.y)) fail("non-finite vertex");
          if (measure_impl(s) < 0.0) std::reverse(v.begin(), v.end());
          const auto n = v.size();
          for (std::size_t i = 0; i < n; ++i) {
            if (detail::cross(v[i], v[(i + 1) % n], v[(i + 2) % n]) <= 0.0)
              fail("vertices are not in strictly convex position");
          }
        } else if constexpr (std::is_same_v<T, LipschitzGraph>) {
          if (s.samples.size() < 2) fail("lipschitz-graph needs at least 2 samples");
          if (!(s.x0 < s.x1)) fail("lipschitz-graph needs x0 < x1");
          for (double f : s.samples) {
            if (!detail::finite(f)) fail("non-finite graph sample");
            if (s.upward ? !(f < s.bound) : !(f > s.bound))
              fail("graph must stay strictly on one side of bound");
          }
        }
      },
      shape_);
}

enum class CellLabel : std::uint8_t { exterior, boundary, interior };

inline std::string_view to_string(CellLabel l) {
  switch (l) {
    case CellLabel::exterior: return "exterior";
    case CellLabel::boundary: return "boundary";
    case CellLabel::interior: return "interior";
  }
  return "unknown";
}

/// Uniform lattice with centers at integer multiples of h. A cell is interior
/// when its center lies in the open domain, boundary when it is not interior
/// but touches an interior cell in its 3^d neighborhood. The array carries a
/// margin of exterior cells so every boundary cell has all stencil neighbors.
class Grid {
 public:
  Grid(DomainSpec spec, double h) : spec_(std::move(spec)), h_(h) { build(); }

  [[nodiscard]] const DomainSpec& domain() const { return spec_; }
  [[nodiscard]] double spacing() const { return h_; }
  [[nodiscard]] int dimension() const { return spec_.dimension(); }
  /// h^d, the measure carried by one cell.
  [[nodiscard]] double cell_volume() const { return dimension() == 1 ? h_ : h_ * h_; }
  [[nodiscard]] int stencil_size() const { return 2 * dimension(); }

  [[nodiscard]] std::size_t size() const { return labels_.size(); }
  [[nodiscard]] int nx() const { return nx_; }
  [[nodiscard]] int ny() const { return ny_; }
  [[nodiscard]] CellLabel label(std::size_t c) const { return labels_[c]; }
  [[nodiscard]] bool is_interior(std::size_t c) const { return labels_[c] == CellLabel::interior; }
  [[nodiscard]] bool is_boundary(std::size_t c) const { return labels_[c] == CellLabel::boundary; }
  [[nodiscard]] bool in_closure(std::size_t c) const { return labels_[c] != CellLabel::exterior; }

  [[nodiscard]] int ix(std::size_t c) const { return ix0_ + static_cast<int>(c % nx_); }
  [[nodiscard]] int iy(std::size_t c) const { return iy0_ + static_cast<int>(c / nx_); }
  [[nodiscard]] Point center(std::size_t c) const { return {ix(c) * h_, iy(c) * h_}; }

  [[nodiscard]] std::optional<std::size_t> index(int ix, int iy) const {
    const int i = ix - ix0_, j = iy - iy0_;
    if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return std::nullopt;
    return static_cast<std::size_t>(j) * nx_ + i;
  }

  /// Stencil neighbors (west, east[, south, north]). Valid for closure cells.
  [[nodiscard]] std::array<std::size_t, 4> neighbors(std::size_t c) const {
    const auto w = static_cast<std::size_t>(nx_);
    if (dimension() == 1) return {c - 1, c + 1, c, c};
    return {c - 1, c + 1, c - w, c + w};
  }

  [[nodiscard]] std::span<const std::size_t> interior_cells() const { return interior_; }
  [[nodiscard]] std::span<const std::size_t> boundary_cells() const { return boundary_; }
  /// Interior and boundary cells in index order.
  [[nodiscard]] std::span<const std::size_t> closure_cells() const { return closure_; }

  /// Interior-cell count times h^d.
  [[nodiscard]] double interior_measure() const {
    return static_cast<double>(interior_.size()) * cell_volume();
  }

  void write_csv(std::ostream& os) const;

 private:
  void build();

  DomainSpec spec_;
  double h_;
  int ix0_ = 0, iy0_ = 0, nx_ = 0, ny_ = 1;
  std::vector<CellLabel> labels_;
  std::vector<std::size_t> interior_, boundary_, closure_;
};

inline void Grid::build() {
  if (!(h_ > 0.0) || !std::isfinite(h_)) throw ConfigurationError("grid spacing h must be positive");
  const double feature = spec_.feature_size();
  if (!(h_ < feature)) throw ConfigurationError("grid spacing h is not below the domain feature size");
  if (spec_.kind() == DomainKind::annulus && !(h_ < feature / 4.0))
    throw ConfigurationError("annulus needs h < (outer - inner) / 4");

  const Box b = spec_.bounds();
  const int margin = 2;
  ix0_ = static_cast<int>(std::floor(b.xmin / h_)) - margin;
  nx_ = static_cast<int>(std::ceil(b.xmax / h_)) + margin - ix0_ + 1;
  if (dimension() == 2) {
    iy0_ = static_cast<int>(std::floor(b.ymin / h_)) - margin;
    ny_ = static_cast<int>(std::ceil(b.ymax / h_)) + margin - iy0_ + 1;
  } else {
    iy0_ = 0;
    ny_ = 1;
  }
  labels_.assign(static_cast<std::size_t>(nx_) * ny_, CellLabel::exterior);
  for (std::size_t c = 0; c < labels_.size(); ++c) {
    if (spec_.contains(center(c))) labels_[c] = CellLabel::interior;
  }
  const int jr = dimension() == 2 ? 1 : 0;
  for (std::size_t c = 0; c < labels_.size(); ++c) {
    if (labels_[c] == CellLabel::interior) continue;
    const int i = ix(c), j = iy(c);
    bool touches = false;
    for (int dj = -jr; dj <= jr && !touches; ++dj) {
      for (int di = -1; di <= 1 && !touches; ++di) {
        if (auto n = index(i + di, j + dj); n && labels_[*n] == CellLabel::interior) touches = true;
      }
    }
    if (touches) labels_[c] = CellLabel::boundary;
  }
  for (std::size_t c = 0; c < labels_.size(); ++c) {
    if (labels_[c] == CellLabel::interior) interior_.push_back(c);
    if (labels_[c] == CellLabel::boundary) boundary_.push_back(c);
    if (labels_[c] != CellLabel::exterior) closure_.push_back(c);
  }
  if (interior_.empty()) throw ConfigurationError("grid spacing h too coarse: no interior cells");
}

inline void Grid::write_csv(std::ostream& os) const {
  os << "ix,iy,x,y,label\n";
  char buf[128];
  for (std::size_t c = 0; c < size(); ++c) {
    const Point p = center(c);
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,", ix(c), iy(c), p.x, p.y);
    os << buf << to_string(labels_[c]) << '\n';
  }
}

inline std::shared_ptr<const Grid> build_grid(DomainSpec spec, double h) {
  return std::make_shared<const Grid>(std::move(spec), h);
}

/// Distance from the cell center to the nearest boundary cell center.
inline double distance_to_boundary(const Grid& grid, std::size_t cell) {
  if (cell >= grid.size() || !grid.in_closure(cell))
    throw ArgumentError("distance_to_boundary: cell is exterior");
  if (grid.is_boundary(cell)) return 0.0;
  const Point p = grid.center(cell);
  double best = std::numeric_limits<double>::infinity();
  for (auto b : grid.boundary_cells()) best = std::min(best, distance(p, grid.center(b)));
  return best;
}

/// distance_to_boundary for every cell (NaN on exterior cells).
inline std::vector<double> boundary_distance_map(const Grid& grid) {
  std::vector<double> out(grid.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<Point> bpts;
  bpts.reserve(grid.boundary_cells().size());
  for (auto b : grid.boundary_cells()) bpts.push_back(grid.center(b));
  for (auto c : grid.closure_cells()) {
    if (grid.is_boundary(c)) {
      out[c] = 0.0;
      continue;
    }
    const Point p = grid.center(c);
    double best2 = std::numeric_limits<double>::infinity();
    for (const auto& q : bpts) {
      const double dx = p.x - q.x, dy = p.y - q.y;
      best2 = std::min(best2, dx * dx + dy * dy);
    }
    out[c] = std::sqrt(best2);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Local Lipschitz character of the boundary.
//
// For a window B(p, scale) the boundary inside is a graph after the best
// rotation iff the spread of its tangent directions is below pi; the smallest
// achievable slope is then tan(spread / 2). Polygon corners therefore get
// tan of half the exterior angle, which is the slope of either incident edge
// in the bisector frame. Lipschitz-graph domains are measured in their own
// frame over the graph part only (the closing box is not part of the graph).

namespace detail {

inline double tan_half_spread(double spread) {
  if (spread >= std::numbers::pi) return std::numeric_limits<double>::infinity();
  return std::tan(0.5 * spread);
}

inline double circle_window_slope(double radius, double scale) {
  const double q = scale / (2.0 * radius);
  if (q >= 1.0) return std::numeric_limits<double>::infinity();
  return tan_half_spread(4.0 * std::asin(q));
}

inline std::vector<Point> polygon_vertices(const DomainSpec& spec) {
  if (const auto* r = std::get_if<Rectangle>(&spec.shape())) {
    return {{r->x0, r->y0}, {r->x1, r->y0}, {r->x1, r->y1}, {r->x0, r->y1}};
  }
  return std::get<ConvexPolygon>(spec.shape()).vertices;
}

inline double polygon_window_slope(const std::vector<Point>& v, Point p, double scale) {
  const auto n = v.size();
  std::vector<bool> hit(n);
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    hit[i] = segment_distance(p, v[i], v[(i + 1) % n]) < scale;
    count += hit[i] ? 1 : 0;
  }
  if (count == 0) return 0.0;
  if (count == n) return std::numeric_limits<double>::infinity();
  auto turn = [&](std::size_t i) {  // exterior angle at vertex i+1 (between edge i and i+1)
    const Point a = v[i], b = v[(i + 1) % n], c = v[(i + 2) % n];
    const double ux = b.x - a.x, uy = b.y - a.y, wx = c.x - b.x, wy = c.y - b.y;
    return std::atan2(ux * wy - uy * wx, ux * wx + uy * wy);
  };
  // start at an edge whose predecessor is not hit so runs are contiguous
  std::size_t start = 0;
  while (!(hit[start] && !hit[(start + n - 1) % n])) ++start;
  double best = 0.0, run = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = (start + k) % n;
    if (!hit[i]) {
      run = 0.0;
      continue;
    }
    if (hit[(i + 1) % n]) {
      run += turn(i);
      best = std::max(best, run);
    }
  }
  return tan_half_spread(best);
}

}  // namespace detail

/// Best-rotation Lipschitz slope of the boundary inside B(point, scale).
inline double local_lipschitz(const DomainSpec& spec, Point point, double scale) {
  if (!(scale > 0.0)) throw ArgumentError("local_lipschitz: scale must be positive");
  switch (spec.kind()) {
    case DomainKind::interval: return 0.0;
    case DomainKind::disk: return detail::circle_window_slope(std::get<Disk>(spec.shape()).radius, scale);
    case DomainKind::annulus: {
      const auto& a = std::get<Annulus>(spec.shape());
      const double r = distance(point, a.center);
      // the window only sees the circle it is closest to unless it spans the gap
      double s = 0.0;
      if (std::abs(r - a.inner) < scale) s = std::max(s, detail::circle_window_slope(a.inner, scale));
      if (std::abs(r - a.outer) < scale) s = std::max(s, detail::circle_window_slope(a.outer, scale));
      return s;
    }
    case DomainKind::rectangle:
    case DomainKind::convex_polygon:
      return detail::polygon_window_slope(detail::polygon_vertices(spec), point, scale);
    case DomainKind::lipschitz_graph: {
      const auto& g = std::get<LipschitzGraph>(spec.shape());
      double s = 0.0;
      const double dx = g.sample_spacing();
      for (std::size_t k = 0; k + 1 < g.samples.size(); ++k) {
        const double xa = g.x0 + dx * static_cast<double>(k);
        if (xa + dx > point.x - scale && xa < point.x + scale)
          s = std::max(s, std::abs(g.segment_slope(k)));
      }
      return s;
    }
  }
  return 0.0;
}

/// Maximal local Lipschitz slope over all boundary windows of the given scale.
inline double lipschitz_constant(const DomainSpec& spec, double scale) {
  if (!(scale > 0.0)) throw ArgumentError("lipschitz_constant: scale must be positive");
  switch (spec.kind()) {
    case DomainKind::interval: return 0.0;
    case DomainKind::disk: return detail::circle_window_slope(std::get<Disk>(spec.shape()).radius, scale);
    case DomainKind::annulus: {
      const auto& a = std::get<Annulus>(spec.shape());
      return detail::circle_window_slope(a.inner, scale);
    }
    case DomainKind::rectangle:
    case DomainKind::convex_polygon: {
      const auto v = detail::polygon_vertices(spec);
      double best = 0.0;
      const auto n = v.size();
      for (std::size_t i = 0; i < n; ++i) {
        const Point a = v[i], b = v[(i + 1) % n];
        const double len = distance(a, b);
        const int steps = std::max(8, static_cast<int>(std::ceil(4.0 * len / scale)));
        for (int k = 0; k < steps; ++k) {
          const double t = static_cast<double>(k) / steps;
          best = std::max(best, detail::polygon_window_slope(
                                    v, Point{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}, scale));
        }
      }
      return best;
    }
    case DomainKind::lipschitz_graph: {
      const auto& g = std::get<LipschitzGraph>(spec.shape());
      double s = 0.0;
      for (std::size_t k = 0; k + 1 < g.samples.size(); ++k) s = std::max(s, std::abs(g.segment_slope(k)));
      return s;
    }
  }
  return 0.0;
}

}  // namespace bernoulli
