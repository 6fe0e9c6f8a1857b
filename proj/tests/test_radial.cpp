#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bernoulli/radial.hpp"

using namespace bernoulli;

// R ln R = 1 has the closed form R = 1 / W(1), with W the Lambert function.
constexpr double kOmega = 0.56714329040978387300;
const double kR2 = 1.0 / kOmega;
// For d = 3 the slope condition reduces to R^2 - R - 1 = 0.
const double kR3 = std::numbers::phi;

TEST(CriticalRadius, ClosedFormsInTwoAndThreeDimensions) {
  EXPECT_NEAR(critical_radius(2), kR2, 1e-10);
  EXPECT_NEAR(critical_radius(3), kR3, 1e-10);
  EXPECT_NEAR(critical_radius(2), 1.763222834352, 1e-11);
}

TEST(CriticalRadius, LiesInOneTwoForAllDimensions) {
  double prev = 2.0;
  for (int d = 2; d <= 7; ++d) {
    const auto r = critical_radius_details(d);
    EXPECT_GT(r.value, 1.0);
    EXPECT_LT(r.value, 2.0);
    EXPECT_NEAR(r.value, r.newton, 1e-10);
    EXPECT_LT(r.value, prev) << d;  // higher dimensions decay faster
    prev = r.value;
  }
  EXPECT_THROW(critical_radius(1), ArgumentError);
  EXPECT_THROW(critical_radius(2, 0.0), ArgumentError);
}

TEST(CriticalRadius, LambdaScaling) {
  // d = 3: R^2 - R = 1 / sqrt(lambda)
  for (double lam : {0.25, 4.0, 9.0}) {
    const double s = std::sqrt(lam);
    EXPECT_NEAR(critical_radius(3, lam), 0.5 * (1.0 + std::sqrt(1.0 + 4.0 / s)), 1e-10);
    const double R2 = critical_radius(2, lam);
    EXPECT_NEAR(R2 * std::log(R2), 1.0 / s, 1e-10);
  }
}

TEST(AnnulusSolution, Examples) {
  for (int d = 2; d <= 5; ++d) {
    const double R = critical_radius(d);
    EXPECT_NEAR(annulus_solution(d, 1.0), 1.0, 1e-14);
    EXPECT_NEAR(annulus_solution(d, R), 0.0, 1e-14);
  }
  const double expect3 = (1.0 / 1.3 - 1.0 / kR3) / (1.0 - 1.0 / kR3);
  EXPECT_NEAR(annulus_solution(3, 1.3), expect3, 1e-10);
  EXPECT_NEAR(annulus_solution(3, 1.3), 0.3958, 1e-4);
  EXPECT_THROW(annulus_solution(2, 0.9), ArgumentError);
  EXPECT_THROW(annulus_solution(2, 1.9), ArgumentError);
}

TEST(AnnulusSolution, EdgeSlopeIsSqrtLambda) {
  for (int d = 2; d <= 6; ++d)
    for (double lam : {1.0, 0.5, 3.0}) {
      const double R = critical_radius(d, lam);
      const double eps = 1e-6 * (R - 1.0);
      // centered difference at R from the closed form, extended analytically past R
      const auto v = [&](double r) {
        if (d == 2) return 1.0 - std::log(r) / std::log(R);
        const double k = 2.0 - d;
        return (std::pow(r, k) - std::pow(R, k)) / (1.0 - std::pow(R, k));
      };
      const double slope = (v(R + eps) - v(R - eps)) / (2.0 * eps);
      EXPECT_NEAR(std::abs(slope), std::sqrt(lam), 1e-7) << d << " " << lam;
      EXPECT_NEAR(detail::annulus_edge_slope(d, R), std::sqrt(lam), 1e-10);
    }
}

TEST(AnnulusSolution, StrictlyDecreasing) {
  for (int d : {2, 3, 6}) {
    const double R = critical_radius(d);
    double prev = annulus_solution(d, 1.0);
    for (int i = 1; i <= 1000; ++i) {
      const double now = annulus_solution(d, 1.0 + (R - 1.0) * i / 1000.0);
      EXPECT_LT(now, prev);
      prev = now;
    }
  }
}

TEST(RadialMinimize, ZeroDataGivesZero) {
  const auto p = radial_minimize(2, 1.0, 2.0, 0.0, 0.0, 1.0, 64);
  EXPECT_TRUE(p.converged);
  for (double v : p.values) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(p.energy, 0.0);
}

TEST(RadialMinimize, MatchesAnnulusProfile) {
  for (int d : {2, 3}) {
    const double R = critical_radius(d);
    const auto p = radial_minimize(d, 1.0, R, 1.0, 0.0, 1.0, 4096);
    ASSERT_TRUE(p.converged);
    double err = 0.0;
    for (std::size_t i = 0; i < p.radii.size(); ++i)
      err = std::max(err, std::abs(p.values[i] - annulus_solution(d, std::min(p.radii[i], R))));
    EXPECT_LE(err, 2e-3) << d;
  }
}

TEST(RadialMinimize, FreeBoundaryOnWideAnnulus) {
  const std::size_t n = 2048;
  const auto p = radial_minimize(2, 1.0, 3.0, 1.0, 0.0, 1.0, n);
  ASSERT_TRUE(p.converged);
  const double h = 2.0 / n;
  EXPECT_NEAR(p.free_boundary_radius(), kR2, 0.02);
  // exact radial energy without the angular factor: int r v'^2 dr + int_{v>0} r dr
  const double exact = 1.0 / std::log(kR2) + 0.5 * (kR2 * kR2 - 1.0);
  EXPECT_NEAR(p.energy, exact, 20.0 * h);
}

TEST(RadialMinimize, FirstOrderRefinement) {
  const double R = critical_radius(2);
  double prev_diff = 0.0;
  for (std::size_t n : {256u, 512u, 1024u}) {
    const auto a = radial_minimize(2, 1.0, R, 1.0, 0.0, 1.0, n);
    const auto b = radial_minimize(2, 1.0, R, 1.0, 0.0, 1.0, 2 * n);
    double diff = 0.0;
    for (std::size_t i = 0; i <= n; ++i) diff = std::max(diff, std::abs(a.values[i] - b.values[2 * i]));
    EXPECT_LE(diff, 8.0 / n) << n;
    if (prev_diff > 0.0) {
      EXPECT_LE(diff, prev_diff);
    }
    prev_diff = diff;
  }
}

TEST(RadialMinimize, InvalidInputs) {
  EXPECT_THROW(radial_minimize(1, 1.0, 2.0, 1.0, 0.0, 1.0, 8), ArgumentError);
  EXPECT_THROW(radial_minimize(2, 2.0, 1.0, 1.0, 0.0, 1.0, 8), ArgumentError);
  EXPECT_THROW(radial_minimize(2, 1.0, 2.0, -1.0, 0.0, 1.0, 8), ValidationError);
  EXPECT_THROW(radial_minimize(2, 1.0, 2.0, 1.0, 0.0, 1.0, 1), ArgumentError);
}
