#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bernoulli/geometry.hpp"

using namespace bernoulli;

namespace {

DomainSpec unit_square() { return DomainSpec(Rectangle{0, 1, 0, 1}); }

std::size_t count_label(const Grid& g, CellLabel l) {
  std::size_t n = 0;
  for (std::size_t c = 0; c < g.size(); ++c) n += g.label(c) == l ? 1 : 0;
  return n;
}

}  // namespace

TEST(DomainSpec, RejectsDegenerateShapes) {
  EXPECT_THROW(DomainSpec(Interval{1, 1}), ValidationError);
  EXPECT_THROW(DomainSpec(Rectangle{0, 1, 1, 0}), ValidationError);
  EXPECT_THROW(DomainSpec(Disk{{0, 0}, 0.0}), ValidationError);
  EXPECT_THROW(DomainSpec(Annulus{{0, 0}, 2.0, 1.0}), ValidationError);
  EXPECT_THROW(DomainSpec(Disk{{0, 0}, std::nan("")}), ValidationError);
}

TEST(DomainSpec, ConvexPolygonNeedsConvexPosition) {
  EXPECT_NO_THROW(DomainSpec(ConvexPolygon{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}));
  // clockwise input is accepted and reoriented
  const DomainSpec cw(ConvexPolygon{{{0, 0}, {0, 1}, {1, 1}, {1, 0}}});
  EXPECT_NEAR(cw.measure(), 1.0, 1e-15);
  // a reflex vertex
  EXPECT_THROW(DomainSpec(ConvexPolygon{{{0, 0}, {2, 0}, {1, 0.5}, {2, 2}, {0, 2}}}), ValidationError);
  // collinear vertices are not strictly convex
  EXPECT_THROW(DomainSpec(ConvexPolygon{{{0, 0}, {1, 0}, {2, 0}, {1, 1}}}), ValidationError);
  EXPECT_THROW(DomainSpec(ConvexPolygon{{{0, 0}, {1, 0}}}), ValidationError);
}

TEST(DomainSpec, LipschitzGraphMustStayOnOneSide) {
  EXPECT_NO_THROW(DomainSpec(LipschitzGraph{0, 1, {0.0, 0.1, 0.0}, true, 1.0}));
  EXPECT_THROW(DomainSpec(LipschitzGraph{0, 1, {0.0, 1.5, 0.0}, true, 1.0}), ValidationError);
  EXPECT_THROW(DomainSpec(LipschitzGraph{0, 1, {0.0}, true, 1.0}), ValidationError);
}

TEST(DomainSpec, MeasureAndMembership) {
  const DomainSpec disk(Disk{{0, 0}, 1.0});
  EXPECT_NEAR(disk.measure(), std::numbers::pi, 1e-14);
  EXPECT_TRUE(disk.contains({0.5, 0.5}));
  EXPECT_FALSE(disk.contains({1.0, 0.0}));  // open set
  const DomainSpec ann(Annulus{{0, 0}, 1.0, 2.0});
  EXPECT_NEAR(ann.measure(), 3.0 * std::numbers::pi, 1e-13);
  EXPECT_FALSE(ann.contains({0.0, 0.0}));
  EXPECT_EQ(DomainSpec(Interval{0, 1}).dimension(), 1);
}

TEST(BuildGrid, UnitSquareQuarterSpacing) {
  const auto g = build_grid(unit_square(), 0.25);
  EXPECT_EQ(g->interior_cells().size(), 9u);
  EXPECT_EQ(g->boundary_cells().size(), 16u);
  EXPECT_EQ(count_label(*g, CellLabel::interior), 9u);
  for (auto c : g->boundary_cells()) {
    const Point p = g->center(c);
    const bool on_ring = p.x == 0.0 || p.x == 1.0 || p.y == 0.0 || p.y == 1.0;
    EXPECT_TRUE(on_ring) << p.x << "," << p.y;
  }
}

TEST(BuildGrid, IntervalHalfSpacing) {
  const auto g = build_grid(DomainSpec(Interval{0, 1}), 0.5);
  ASSERT_EQ(g->interior_cells().size(), 1u);
  EXPECT_DOUBLE_EQ(g->center(g->interior_cells()[0]).x, 0.5);
  ASSERT_EQ(g->boundary_cells().size(), 2u);
  EXPECT_DOUBLE_EQ(g->center(g->boundary_cells()[0]).x, 0.0);
  EXPECT_DOUBLE_EQ(g->center(g->boundary_cells()[1]).x, 1.0);
}

TEST(BuildGrid, AnnulusInteriorCentersInsideOpenAnnulus) {
  const auto g = build_grid(DomainSpec(Annulus{{0, 0}, 1.0, 1.7632}), 0.05);
  ASSERT_FALSE(g->interior_cells().empty());
  for (auto c : g->interior_cells()) {
    const double r = std::hypot(g->center(c).x, g->center(c).y);
    EXPECT_GT(r, 1.0);
    EXPECT_LT(r, 1.7632);
  }
}

TEST(BuildGrid, TooCoarseIsConfigurationError) {
  EXPECT_THROW(build_grid(unit_square(), 2.0), ConfigurationError);
  EXPECT_THROW(build_grid(unit_square(), 0.0), ConfigurationError);
  EXPECT_THROW(build_grid(unit_square(), -0.1), ConfigurationError);
}

TEST(BuildGrid, StencilNeighborsOfInteriorStayInClosure) {
  for (const DomainSpec& spec :
       {unit_square(), DomainSpec(Disk{{0.1, -0.2}, 0.8}), DomainSpec(Annulus{{0, 0}, 0.5, 1.2}),
        DomainSpec(ConvexPolygon{{{0, 0}, {1, 0}, {0.3, 0.9}}}),
        DomainSpec(LipschitzGraph{0, 1, {0.0, 0.2, 0.05, 0.3}, true, 1.0}), DomainSpec(Interval{-1, 2})}) {
    const auto g = build_grid(spec, 0.05);
    for (auto c : g->interior_cells()) {
      const auto nb = g->neighbors(c);
      for (int k = 0; k < g->stencil_size(); ++k) EXPECT_TRUE(g->in_closure(nb[k]));
    }
  }
}

TEST(BuildGrid, BoundaryCellsTouchInteriorAndLieOutsideOrOnEdge) {
  const auto g = build_grid(DomainSpec(Disk{{0, 0}, 1.0}), 1.0 / 16);
  for (auto c : g->boundary_cells()) {
    EXPECT_FALSE(g->domain().contains(g->center(c)));
    const double r = std::hypot(g->center(c).x, g->center(c).y);
    EXPECT_LE(r, 1.0 + 2.0 * g->spacing());
  }
  for (auto c : g->interior_cells()) EXPECT_TRUE(g->domain().contains(g->center(c)));
}

TEST(BuildGrid, AreaConvergesAtFirstOrder) {
  struct Case {
    DomainSpec spec;
    double area;
  };
  const Case cases[] = {{unit_square(), 1.0},
                        {DomainSpec(Disk{{0, 0}, 1.0}), std::numbers::pi},
                        {DomainSpec(Annulus{{0, 0}, 1.0, 2.0}), 3.0 * std::numbers::pi}};
  for (const auto& cs : cases) {
    for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
      const double err = std::abs(build_grid(cs.spec, h)->interior_measure() - cs.area);
      EXPECT_LE(err, 30.0 * h) << to_string(cs.spec.kind()) << " h=" << h;
    }
  }
}

TEST(LipschitzConstant, FlatEdgeAwayFromCornersIsZero) {
  const auto sq = unit_square();
  for (double s : {0.01, 0.1, 0.3}) EXPECT_EQ(local_lipschitz(sq, {0.5, 0.0}, s), 0.0);
}

TEST(LipschitzConstant, SquareCornerWindowIsOne) {
  EXPECT_NEAR(local_lipschitz(unit_square(), {0.0, 0.0}, 0.1), 1.0, 1e-12);
  EXPECT_NEAR(lipschitz_constant(unit_square(), 0.1), 1.0, 1e-12);
}

TEST(LipschitzConstant, DiskSlopeVanishesAtSmallScale) {
  const DomainSpec disk(Disk{{0, 0}, 1.0});
  double prev = lipschitz_constant(disk, 0.5);
  for (double s : {0.1, 0.01, 0.001}) {
    const double now = lipschitz_constant(disk, s);
    EXPECT_LT(now, prev);
    prev = now;
  }
  EXPECT_LT(prev, 2e-3);
}

TEST(LipschitzConstant, PolygonInvariantUnderRigidMotion) {
  const std::vector<Point> base{{0, 0}, {1, 0}, {1.3, 0.8}, {0.2, 1.1}};
  const double ref = lipschitz_constant(DomainSpec(ConvexPolygon{base}), 0.2);
  const double th = 0.7, tx = 3.0, ty = -1.5;
  std::vector<Point> moved;
  for (auto p : base)
    moved.push_back({std::cos(th) * p.x - std::sin(th) * p.y + tx, std::sin(th) * p.x + std::cos(th) * p.y + ty});
  EXPECT_NEAR(lipschitz_constant(DomainSpec(ConvexPolygon{moved}), 0.2), ref, 1e-12);
  // cyclic relabeling of the vertex list
  std::vector<Point> rolled{base[2], base[3], base[0], base[1]};
  EXPECT_NEAR(lipschitz_constant(DomainSpec(ConvexPolygon{rolled}), 0.2), ref, 1e-12);
}

TEST(LipschitzConstant, GraphIsMaxSegmentSlope) {
  const DomainSpec gr(LipschitzGraph{0, 1, {0.0, 0.25, 0.0, 0.1}, true, 1.0});
  EXPECT_NEAR(lipschitz_constant(gr, 0.1), 0.75, 1e-12);
  EXPECT_THROW(lipschitz_constant(gr, 0.0), ArgumentError);
}

TEST(DistanceToBoundary, Examples) {
  const auto sq = build_grid(unit_square(), 0.25);
  EXPECT_EQ(distance_to_boundary(*sq, sq->boundary_cells()[0]), 0.0);
  const auto mid = sq->index(2, 2);
  ASSERT_TRUE(mid.has_value());
  EXPECT_NEAR(distance_to_boundary(*sq, *mid), 0.5, 0.25);

  const auto iv = build_grid(DomainSpec(Interval{0, 1}), 0.5);
  EXPECT_DOUBLE_EQ(distance_to_boundary(*iv, iv->interior_cells()[0]), 0.5);
}

TEST(DistanceToBoundary, ExteriorCellIsArgumentError) {
  const auto g = build_grid(DomainSpec(Disk{{0, 0}, 1.0}), 0.25);
  std::size_t ext = g->size();
  for (std::size_t c = 0; c < g->size(); ++c)
    if (!g->in_closure(c)) {
      ext = c;
      break;
    }
  ASSERT_LT(ext, g->size());
  EXPECT_THROW(distance_to_boundary(*g, ext), ArgumentError);
  EXPECT_THROW(distance_to_boundary(*g, g->size() + 5), ArgumentError);
}

TEST(DistanceToBoundary, LipschitzAcrossNeighbors) {
  const auto g = build_grid(DomainSpec(Disk{{0, 0}, 1.0}), 1.0 / 32);
  const auto d = boundary_distance_map(*g);
  for (auto c : g->interior_cells()) {
    EXPECT_DOUBLE_EQ(d[c], distance_to_boundary(*g, c));
    for (auto n : g->neighbors(c)) EXPECT_LE(std::abs(d[c] - d[n]), g->spacing() * std::sqrt(2.0) + 1e-15);
  }
}
