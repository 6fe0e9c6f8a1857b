#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "bernoulli/oracle1d.hpp"
#include "bernoulli/radial.hpp"
#include "bernoulli/solver.hpp"
#include "bernoulli/sweep.hpp"

using namespace bernoulli;

namespace {

std::shared_ptr<const Grid> square(double h) { return build_grid(DomainSpec(Rectangle{0, 1, 0, 1}), h); }
std::shared_ptr<const Grid> interval(double h) { return build_grid(DomainSpec(Interval{0, 1}), h); }

std::shared_ptr<const Grid> critical_annulus(double h) {
  return build_grid(DomainSpec(Annulus{{0, 0}, 1.0, critical_radius(2)}), h);
}
BoundaryDatum annulus_datum() { return BoundaryDatum::radial_step({0, 0}, 1.5, 1.0, 0.0); }

double max_over_closure(const ScalarField& u) {
  double m = 0.0;
  for (auto c : u.grid->closure_cells()) m = std::max(m, std::abs(u.values[c]));
  return m;
}

double value_at(const ScalarField& u, double x) {
  const Grid& g = *u.grid;
  return u.values[*g.index(static_cast<int>(std::lround(x / g.spacing())), 0)];
}

}  // namespace

TEST(Solve, ZeroDatumGivesZero) {
  for (const auto& g : {square(0.1), interval(0.05), build_grid(DomainSpec(Disk{{0, 0}, 1.0}), 0.1)}) {
    const auto s = solve(g, BoundaryDatum::constant(0.0), SolveOptions{});
    EXPECT_TRUE(s.report.converged);
    EXPECT_EQ(max_over_closure(s.field), 0.0);
    EXPECT_EQ(s.report.energy, 0.0);
  }
}

TEST(Solve, UnitDatumOnSquareBoundedByConstantCandidate) {
  const auto s = solve(square(1.0 / 32), BoundaryDatum::constant(1.0), SolveOptions{});
  EXPECT_TRUE(s.report.converged);
  EXPECT_LE(s.report.energy, 1.0);
}

TEST(Solve, AnnulusMatchesClosedForm) {
  const auto g = critical_annulus(1.0 / 64);
  const auto s = solve(g, annulus_datum(), SolveOptions{});
  ASSERT_TRUE(s.report.converged);
  const auto ref = sample_annulus_solution(g, {0, 0});
  EXPECT_LE(max_norm_distance(s.field, ref), 0.05);
}

TEST(Solve, ReportFieldsAreConsistent) {
  const auto g = build_grid(DomainSpec(Disk{{0, 0}, 1.0}), 1.0 / 16);
  SolveOptions o;
  o.lambda = 2.0;
  const auto s = solve(g, BoundaryDatum::power({1, 0}, 0.5), o);
  EXPECT_TRUE(s.report.converged);
  EXPECT_LE(s.report.residual, o.tolerance);
  EXPECT_NEAR(s.report.energy, total_energy(s.field, o.lambda), 1e-10);
  EXPECT_DOUBLE_EQ(s.report.positivity_measure, positivity_measure(s.field));
  EXPECT_EQ(s.report.mode, SolveMode::single);
  EXPECT_GE(s.report.initial_energy, s.report.energy);
}

TEST(Solve, BoundaryValuesEqualDatumAndFieldIsNonnegative) {
  const auto g = build_grid(DomainSpec(ConvexPolygon{{{0, 0}, {1, 0}, {0.4, 0.9}}}), 1.0 / 32);
  const auto datum = BoundaryDatum::linear(0.1, {0.8, -0.1});
  const auto s = solve(g, datum, SolveOptions{});
  for (auto c : g->boundary_cells()) EXPECT_EQ(s.field.values[c], eval_datum(datum, g->center(c)));
  for (auto c : g->closure_cells()) {
    EXPECT_GE(s.field.values[c], 0.0);
    EXPECT_TRUE(std::isfinite(s.field.values[c]));
  }
}

TEST(Solve, NonConvergenceIsReportedNotThrown) {
  SolveOptions o;
  o.max_sweeps = 1;
  o.accelerate = false;
  o.init = Initialization::zero;
  const auto s = solve(build_grid(DomainSpec(Disk{{0, 0}, 1.0}), 1.0 / 32), BoundaryDatum::constant(1.0), o);
  EXPECT_FALSE(s.report.converged);
  EXPECT_EQ(s.report.sweeps, 1);
}

TEST(Solve, InvalidInputs) {
  const auto g = square(0.25);
  EXPECT_THROW(solve(g, BoundaryDatum::linear(0.0, {-1.0, 0.0}), SolveOptions{}), ValidationError);
  SolveOptions o;
  o.lambda = 0.0;
  EXPECT_THROW(solve(g, BoundaryDatum::constant(1.0), o), ValidationError);
  o = {};
  o.init = Initialization::given;
  EXPECT_THROW(solve(g, BoundaryDatum::constant(1.0), o), ValidationError);
  o.initial = ScalarField(square(0.125));
  EXPECT_THROW(solve(g, BoundaryDatum::constant(1.0), o), ArgumentError);
}

TEST(Solve, EveryInitializationConvergesOnAUniqueProblem) {
  // data well above the tie level: the constant is the unique minimizer
  const auto g = interval(0.01);
  ScalarField start(g);
  for (auto c : g->interior_cells()) start.values[c] = 0.3 * g->center(c).x;
  for (auto init : {Initialization::zero, Initialization::datum_sup, Initialization::harmonic,
                    Initialization::given}) {
    SolveOptions o;
    o.init = init;
    o.refine_front = true;
    if (init == Initialization::given) o.initial = start;
    const auto s = solve(g, BoundaryDatum::constant(0.6), o);
    EXPECT_TRUE(s.report.converged) << to_string(init);
    EXPECT_NEAR(value_at(s.field, 0.5), 0.6, 1e-9) << to_string(init);
  }
}

TEST(SolveExtremes, ZeroDatum) {
  const auto e = solve_extremes(square(0.1), BoundaryDatum::constant(0.0), SolveOptions{});
  EXPECT_EQ(max_over_closure(e.lower), 0.0);
  EXPECT_EQ(max_over_closure(e.upper), 0.0);
  EXPECT_EQ(e.lower_report.mode, SolveMode::lower);
  EXPECT_EQ(e.upper_report.mode, SolveMode::upper);
}

TEST(SolveExtremes, TiePointHasTwoDistinctExtremes) {
  // Front moves on, no energy selection: both extremes survive.
  const auto g = interval(0.01);
  SolveOptions o;
  o.refine_front = true;
  const auto e = solve_extremes(g, BoundaryDatum::constant(0.25), o);
  ASSERT_TRUE(e.lower_report.converged && e.upper_report.converged);
  const auto mins = solve_1d_exact(1.0, 0.25, 0.25, 1.0);
  ASSERT_EQ(mins.size(), 2u);
  const auto& triangle = mins[0].structure == Structure::double_detached ? mins[0] : mins[1];
  EXPECT_LE(max_norm_distance(e.lower, sample_on_grid(triangle, g)), 0.02);
  for (auto c : g->closure_cells()) EXPECT_NEAR(e.upper.values[c], 0.25, 1e-9);
  EXPECT_NEAR(value_at(e.upper, 0.5) - value_at(e.lower, 0.5), 0.25, 1e-9);
  EXPECT_NEAR(e.lower_report.energy, 1.0, 3.0 * g->spacing());  // cell-count error
  EXPECT_NEAR(e.upper_report.energy, 1.0, 3.0 * g->spacing());
}

TEST(SolveExtremes, BelowTieBothExtremesAreTheDoubleTriangle) {
  const auto g = interval(0.01);
  SweepOptions so = default_sweep_options(g->spacing());
  const auto e = solve_extremes(g, BoundaryDatum::constant(0.1), so.solve);
  ASSERT_TRUE(e.lower_report.converged && e.upper_report.converged);
  const auto ref = sample_on_grid(solve_1d_exact(1.0, 0.1, 0.1, 1.0).front(), g);
  EXPECT_LE(max_norm_distance(e.lower, ref), 1e-9);
  EXPECT_LE(max_norm_distance(e.upper, ref), 1e-9);
}

TEST(SolveExtremes, LowerBelowUpper) {
  const auto g = build_grid(DomainSpec(Disk{{0, 0}, 1.0}), 1.0 / 24);
  for (bool refine : {false, true}) {
    SolveOptions o;
    o.refine_front = refine;
    const auto e = solve_extremes(g, BoundaryDatum::step({1, 0}, 0.0, 0.6, 0.1), o);
    for (auto c : g->closure_cells()) EXPECT_LE(e.lower.values[c], e.upper.values[c]);
  }
}

TEST(FreeBoundary, Examples) {
  const auto g = square(0.1);
  ScalarField zero(g), one(g);
  for (auto c : g->closure_cells()) one.values[c] = 1.0;
  EXPECT_TRUE(free_boundary_cells(zero).empty());
  EXPECT_TRUE(free_boundary_cells(one).empty());
  EXPECT_TRUE(gradient_on_free_boundary(zero).empty());

  const auto g1 = interval(0.01);
  const auto tri = sample_on_grid(solve_1d_exact(1.0, 0.1, 0.0, 1.0).front(), g1);
  const auto fb = free_boundary_cells(tri);
  ASSERT_EQ(fb.size(), 1u);
  EXPECT_NEAR(g1->center(fb[0]).x, 0.1, 1.5 * g1->spacing());
  const auto st = gradient_on_free_boundary(tri);
  ASSERT_EQ(st.count, 1u);
  EXPECT_NEAR(st.median, 1.0, 1e-9);
}

TEST(FreeBoundary, AnnulusGradientNearOne) {
  const auto g = critical_annulus(1.0 / 128);
  const auto s = solve(g, annulus_datum(), SolveOptions{});
  const auto st = gradient_on_free_boundary(s.field);
  ASSERT_FALSE(st.empty());
  EXPECT_GE(st.median, 0.8);
  EXPECT_LE(st.median, 1.2);
}

TEST(SolverProperties, EnergyHistoryIsMonotone) {
  for (bool refine : {false, true}) {
    SolveOptions o;
    o.refine_front = refine;
    o.init = Initialization::zero;
    const auto s = solve(build_grid(DomainSpec(Disk{{0, 0}, 1.0}), 1.0 / 32), BoundaryDatum::power({1, 0}, 0.5), o);
    ASSERT_GE(s.report.energy_history.size(), 2u);
    for (std::size_t k = 1; k < s.report.energy_history.size(); ++k)
      EXPECT_LE(s.report.energy_history[k], s.report.energy_history[k - 1] + 1e-12);
  }
}

TEST(SolverProperties, HarmonicOnPositiveSet) {
  const auto g = build_grid(DomainSpec(Rectangle{0, 1, 0, 1}), 1.0 / 32);
  SolveOptions o;
  const auto s = solve(g, BoundaryDatum::step({1, 0}, 0.5, 1.0, 0.0), o);
  ASSERT_TRUE(s.report.converged);
  double worst = 0.0;
  for (auto c : g->interior_cells()) {
    if (!(s.field.values[c] > kValueTolerance)) continue;
    double mean = 0.0;
    for (auto n : g->neighbors(c)) mean += s.field.values[n];
    worst = std::max(worst, std::abs(s.field.values[c] - 0.25 * mean));
  }
  EXPECT_LE(worst, 10.0 * o.tolerance);
}

TEST(SolverProperties, OrderedUnderDatumOrdering) {
  const auto g = build_grid(DomainSpec(Disk{{0, 0}, 1.0}), 1.0 / 32);
  const auto base = BoundaryDatum::table(TableAxis::angle, -3.141592653589793, 3.141592653589793,
                                         {0.3, 0.0, 0.8, 0.1, 0.5, 0.3}, {0, 0});
  for (double c : {0.05, 0.2, 0.5}) {
    BoundaryDatum shifted = base;
    shifted.shift = c;
    const auto a = solve_extremes(g, base, SolveOptions{}), b = solve_extremes(g, shifted, SolveOptions{});
    double lo = 1e300, hi = 1e300;
    for (auto k : g->closure_cells()) {
      lo = std::min(lo, b.lower.values[k] - a.lower.values[k]);
      hi = std::min(hi, b.upper.values[k] - a.upper.values[k]);
    }
    EXPECT_GE(lo, -1e-8);
    EXPECT_GE(hi, -1e-8);
  }
}

TEST(SolverProperties, DeterministicAcrossWorkerCounts) {
  const auto g = build_grid(DomainSpec(Disk{{0, 0}, 1.0}), 1.0 / 24);
  DatumFamily fam{BoundaryDatum::power({1, 0}, 0.5), FamilyKind::scaling};
  const std::vector<double> ts{0.2, 0.4, 0.6, 0.8};
  auto opts = default_sweep_options(g->spacing());
  opts.keep_fields = true;
  opts.workers = 1;
  const auto one = run_sweep(g, fam, ts, opts);
  opts.workers = 4;
  const auto four = run_sweep(g, fam, ts, opts);
  for (std::size_t k = 0; k < ts.size(); ++k) {
    EXPECT_EQ(one.lower[k].values, four.lower[k].values);
    EXPECT_EQ(one.upper[k].values, four.upper[k].values);
  }
  const auto a = solve(g, family_member(fam, 0.5), SolveOptions{}), b = solve(g, family_member(fam, 0.5), SolveOptions{});
  EXPECT_EQ(a.field.values, b.field.values);
}

TEST(SolverProperties, InteriorGradientBoundedUnderRefinement) {
  // cells at distance >= 0.2 diam from the boundary of the unit disk
  std::vector<double> maxima;
  for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
    const auto g = build_grid(DomainSpec(Disk{{0, 0}, 1.0}), h);
    const auto s = solve(g, BoundaryDatum::power({1, 0}, 0.5), SolveOptions{});
    const auto dist = boundary_distance_map(*g);
    double m = 0.0;
    for (auto c : g->interior_cells()) {
      if (dist[c] < 0.4) continue;
      const auto nb = g->neighbors(c);
      const double gx = (s.field.values[nb[1]] - s.field.values[nb[0]]) / (2 * h);
      const double gy = (s.field.values[nb[3]] - s.field.values[nb[2]]) / (2 * h);
      m = std::max(m, std::hypot(gx, gy));
    }
    maxima.push_back(m);
  }
  for (std::size_t k = 1; k < maxima.size(); ++k) EXPECT_LE(maxima[k] / maxima[k - 1], 1.25);
}

TEST(SolverProperties, DatumH1ProxyScalesWithData) {
  const auto g = build_grid(DomainSpec(Disk{{0, 0}, 1.0}), 1.0 / 16);
  const auto g1 = BoundaryDatum::power({1, 0}, 0.5);
  BoundaryDatum g2 = g1;
  g2.multiplier = 2.0;
  EXPECT_NEAR(datum_h1_proxy(g, g2), 2.0 * datum_h1_proxy(g, g1), 1e-8);
  EXPECT_NEAR(datum_h1_proxy(g, BoundaryDatum::constant(0.7)), 0.7, 1e-10);
}
