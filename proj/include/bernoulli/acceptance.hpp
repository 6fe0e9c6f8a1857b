#pragma once

// The acceptance suite: one function per criterion, each returning measured
// values and a verdict. Shared by the CLI `acceptance` subcommand and the
// acceptance test binary.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "bernoulli/boundary_data.hpp"
#include "bernoulli/energy.hpp"
#include "bernoulli/geometry.hpp"
#include "bernoulli/oracle1d.hpp"
#include "bernoulli/radial.hpp"
#include "bernoulli/regularity.hpp"
#include "bernoulli/solver.hpp"
#include "bernoulli/sweep.hpp"

namespace bernoulli::acceptance {

struct Result {
  int id = 0;
  std::string name;
  bool pass = false;
  bool errored = false;
  std::string error;
  double runtime_s = 0.0;
  double runtime_limit_s = 0.0;
  std::vector<std::pair<std::string, double>> measured;
  std::string note;
};

struct Config {
  std::uint64_t seed = 20240611;
};

/// Portable uniform doubles in [0, 1) from a seeded 64-bit engine.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : eng_(seed) {}
  double operator()() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 eng_;
};

/// A periodic random datum: piecewise linear in the polar angle about `origin`.
inline BoundaryDatum random_angular_datum(Uniform& rng, Point origin, std::size_t knots = 12) {
  std::vector<double> s(knots + 1);
  for (std::size_t k = 0; k < knots; ++k) s[k] = rng();
  s[knots] = s[0];
  return BoundaryDatum::table(TableAxis::angle, -std::numbers::pi, std::numbers::pi, std::move(s), origin);
}

namespace detail {

inline DomainSpec unit_square() { return DomainSpec(Rectangle{0.0, 1.0, 0.0, 1.0}); }
inline DomainSpec unit_disk() { return DomainSpec(Disk{{0.0, 0.0}, 1.0}); }

inline DomainSpec critical_annulus() {
  return DomainSpec(Annulus{{0.0, 0.0}, 1.0, critical_radius(2, 1.0)});
}

inline BoundaryDatum annulus_datum() {
  return BoundaryDatum::radial_step({0.0, 0.0}, 0.5 * (1.0 + critical_radius(2, 1.0)), 1.0, 0.0);
}

inline void add(Result& r, std::string key, double v) { r.measured.emplace_back(std::move(key), v); }

}  // namespace detail

inline Result critical_radius_check(const Config&) {
  Result r{.id = 1, .name = "critical radius", .runtime_limit_s = 1.0};
  const auto d2 = critical_radius_details(2, 1.0);
  const auto d3 = critical_radius_details(3, 1.0);
  const double golden = 0.5 * (1.0 + std::sqrt(5.0));
  const double res2 = d2.value * std::log(d2.value) - 1.0;
  detail::add(r, "R2", d2.value);
  detail::add(r, "R2_newton", d2.newton);
  detail::add(r, "R2_bisection_newton_gap", std::abs(d2.value - d2.newton));
  detail::add(r, "R2_equation_residual", res2);
  detail::add(r, "R3", d3.value);
  detail::add(r, "R3_golden_gap", std::abs(d3.value - golden));
  r.pass = std::abs(d2.value - d2.newton) <= 1e-10 && std::abs(res2) <= 1e-10 &&
           std::abs(d3.value - golden) <= 1e-10 && d2.value > 1.0 && d2.value < 2.0 && d3.value > 1.0 &&
           d3.value < 2.0;
  return r;
}

inline Result annulus_convergence(const Config&) {
  Result r{.id = 2, .name = "annulus convergence", .runtime_limit_s = 60.0};
  const auto spec = detail::critical_annulus();
  const auto g = detail::annulus_datum();
  std::vector<double> err;
  bool converged = true;
  for (int n : {32, 64, 128}) {
    auto grid = build_grid(spec, 1.0 / n);
    const auto s = solve(grid, g, SolveOptions{});
    converged = converged && s.report.converged;
    err.push_back(max_norm_distance(s.field, sample_annulus_solution(grid, {0.0, 0.0})));
    detail::add(r, "error_h1/" + std::to_string(n), err.back());
  }
  const double q1 = err[0] / err[1], q2 = err[1] / err[2];
  detail::add(r, "ratio_32_64", q1);
  detail::add(r, "ratio_64_128", q2);
  r.pass = converged && err[1] <= 0.05 && q1 >= 1.5 && q2 >= 1.5;
  return r;
}

/// Oracle sweep rows in the form jump_set consumes.
inline std::vector<SweepRow> oracle_sweep_rows(double step) {
  std::vector<double> ts;
  const int n = static_cast<int>(std::lround(1.0 / step));
  for (int k = 1; k < n; ++k) ts.push_back(k * step);
  std::vector<SweepRow> rows;
  for (const auto& o : sweep_1d(1.0, 1.0, ts)) rows.push_back({o.t, o.gap_mid, o.energy, o.energy, true, true});
  return rows;
}

inline Result oracle_jump(const Config&) {
  Result r{.id = 3, .name = "1D non-uniqueness and jump set", .runtime_limit_s = 1.0};
  const auto mins = solve_1d_exact(1.0, 0.25, 0.25, 1.0);
  double worst = 0.0;
  for (const auto& m : mins) worst = std::max(worst, std::abs(m.energy - 1.0));
  detail::add(r, "minimizers", static_cast<double>(mins.size()));
  detail::add(r, "max_energy_error", worst);

  const auto coarse = jump_set(oracle_sweep_rows(0.01), 1e-9);
  const auto fine = jump_set(oracle_sweep_rows(0.005), 1e-9);
  detail::add(r, "intervals_coarse", static_cast<double>(coarse.intervals.size()));
  detail::add(r, "intervals_fine", static_cast<double>(fine.intervals.size()));
  bool located = coarse.intervals.size() == 1 && fine.intervals.size() == 1;
  if (located) {
    const auto& c = coarse.intervals.front();
    const double center = 0.5 * (c.t_first + c.t_last);
    detail::add(r, "jump_center", center);
    detail::add(r, "width_coarse", coarse.total_measure);
    detail::add(r, "width_fine", fine.total_measure);
    located = std::abs(center - 0.25) <= 0.01 && c.lo <= 0.25 && 0.25 <= c.hi &&
              std::abs(fine.total_measure - 0.5 * coarse.total_measure) <= 0.005 + 1e-12;
  }
  r.pass = mins.size() == 2 && worst <= 1e-12 && located;
  return r;
}

inline Result comparison_principle(const Config& cfg) {
  Result r{.id = 4, .name = "comparison principle", .runtime_limit_s = 300.0};
  double worst_lower = std::numeric_limits<double>::infinity(), worst_upper = worst_lower;
  bool converged = true;
  int pairs = 0;
  const std::pair<DomainSpec, Point> domains[] = {{detail::unit_square(), {0.5, 0.5}},
                                                  {detail::unit_disk(), {0.0, 0.0}}};
  for (const auto& [spec, origin] : domains) {
    auto grid = build_grid(spec, 1.0 / 64);
    for (int k = 0; k < 20; ++k) {
      Uniform rng(cfg.seed + 1000u * static_cast<std::uint64_t>(++pairs));
      const BoundaryDatum g = random_angular_datum(rng, origin);
      BoundaryDatum gc = g;
      gc.shift += 0.05 * (1 + k % 10);
      for (auto init : {Initialization::zero, Initialization::datum_sup}) {
        SolveOptions o;
        o.init = init;
        const auto a = solve(grid, g, o), b = solve(grid, gc, o);
        converged = converged && a.report.converged && b.report.converged;
        const double m = check_comparison(a.field, b.field).param("min_difference");
        (init == Initialization::zero ? worst_lower : worst_upper) =
            std::min(init == Initialization::zero ? worst_lower : worst_upper, m);
      }
    }
  }
  detail::add(r, "pairs", pairs);
  detail::add(r, "min_difference_lower", worst_lower);
  detail::add(r, "min_difference_upper", worst_upper);
  r.pass = converged && worst_lower >= -1e-8 && worst_upper >= -1e-8;
  return r;
}

/// Random nonnegative field with roughly a third of interior cells at zero,
/// boundary cells set from `boundary`.
inline ScalarField random_field(std::shared_ptr<const Grid> grid, const std::vector<double>& boundary, Uniform& rng) {
  ScalarField f(grid);
  for (auto c : grid->boundary_cells()) f.values[c] = boundary[c];
  for (auto c : grid->interior_cells()) {
    const double z = rng();
    f.values[c] = z < 0.3 ? 0.0 : 2.0 * rng();
  }
  return f;
}

inline Result cut_and_paste(const Config& cfg) {
  Result r{.id = 5, .name = "cut-and-paste submodularity", .runtime_limit_s = 30.0};
  double min_slack = std::numeric_limits<double>::infinity();
  {
    auto grid = build_grid(detail::unit_square(), 1.0 / 16);
    for (int k = 0; k < 100; ++k) {
      Uniform rng(cfg.seed + 7919u * static_cast<std::uint64_t>(k + 1));
      const double lambda = 0.25 + 2.0 * rng();
      const auto bnd = sample_boundary(*grid, random_angular_datum(rng, {0.5, 0.5}));
      const auto u = random_field(grid, bnd, rng), v = random_field(grid, bnd, rng);
      min_slack = std::min(min_slack, check_cut_paste(u, v, lambda).param("slack"));
    }
  }
  detail::add(r, "random_pairs", 100);
  detail::add(r, "min_slack_random", min_slack);

  // Converged solves at one datum: lower vs upper, lexicographic vs red-black.
  double worst_gap = 0.0, min_slack_solves = std::numeric_limits<double>::infinity();
  bool converged = true;
  const SolveOptions base;
  const std::pair<DomainSpec, BoundaryDatum> cases[] = {
      {detail::unit_square(), BoundaryDatum::constant(2.0)},
      {detail::unit_square(), BoundaryDatum::linear(1.0, {1.0, 0.5})},
      {detail::unit_disk(), BoundaryDatum::constant(1.5)},
  };
  for (const auto& [spec, g] : cases) {
    auto grid = build_grid(spec, 1.0 / 32);
    const auto ext = solve_extremes(grid, g, base);
    SolveOptions lex = base;
    lex.traversal = Traversal::lexicographic;
    const auto a = solve(grid, g, lex), b = solve(grid, g, base);
    converged = converged && ext.lower_report.converged && ext.upper_report.converged && a.report.converged &&
                b.report.converged;
    for (const auto& [u, v] : {std::pair{&ext.lower, &ext.upper}, std::pair{&a.field, &b.field}}) {
      min_slack_solves = std::min(min_slack_solves, check_cut_paste(*u, *v, base.lambda).param("slack"));
      worst_gap = std::max(worst_gap,
                           check_cut_paste_minimizers(*u, *v, ext.lower, base.lambda, base.tolerance).violation);
    }
  }
  detail::add(r, "min_slack_solves", min_slack_solves);
  detail::add(r, "max_energy_gap_max_vs_lower", worst_gap);
  r.pass = min_slack >= -1e-12 && min_slack_solves >= -1e-12 && converged && worst_gap <= 10.0 * base.tolerance;
  return r;
}

inline Result free_boundary_gradient(const Config&) {
  Result r{.id = 6, .name = "free-boundary gradient", .runtime_limit_s = 120.0};
  double worst = 0.0;
  for (auto [a, lambda] : {std::pair{0.1, 1.0}, std::pair{0.3, 4.0}, std::pair{0.05, 0.25}}) {
    for (const auto& m : solve_1d_exact(1.0, a, 0.0, lambda))
      for (double s : m.detachment_slopes()) worst = std::max(worst, std::abs(s - std::sqrt(lambda)));
    for (const auto& m : solve_1d_exact(1.0, a, a, lambda))
      for (double s : m.detachment_slopes()) worst = std::max(worst, std::abs(s - std::sqrt(lambda)));
  }
  detail::add(r, "oracle_slope_error", worst);
  auto grid = build_grid(detail::critical_annulus(), 1.0 / 128);
  const auto s = solve(grid, detail::annulus_datum(), SolveOptions{});
  const auto st = gradient_on_free_boundary(s.field);
  detail::add(r, "free_boundary_cells", static_cast<double>(st.count));
  detail::add(r, "median_gradient", st.median);
  detail::add(r, "iqr_gradient", st.iqr());
  r.pass = worst <= 4.0 * std::numeric_limits<double>::epsilon() && s.report.converged && !st.empty() &&
           st.median >= 0.8 && st.median <= 1.2;
  return r;
}

inline Result equicontinuity(const Config&) {
  Result r{.id = 7, .name = "equicontinuity envelope", .runtime_limit_s = 180.0};
  auto grid = build_grid(detail::unit_disk(), 1.0 / 64);
  std::vector<ScalarField> fields;
  bool converged = true;
  for (double t : {0.2, 0.4, 0.6, 0.8, 1.0}) {
    const auto s = solve(grid, BoundaryDatum::power({1.0, 0.0}, 0.5, t), SolveOptions{});
    converged = converged && s.report.converged;
    fields.push_back(s.field);
  }
  std::vector<double> deltas;
  for (int k = 5; k >= 0; --k) deltas.push_back(std::ldexp(1.0, -k));
  const auto rep = equicontinuity_report(fields, deltas);
  bool monotone = true;
  for (std::size_t k = 1; k < deltas.size(); ++k) monotone = monotone && rep.envelope.omega[k - 1] <= rep.envelope.omega[k];
  for (std::size_t k = 0; k < deltas.size(); ++k)
    detail::add(r, "envelope_delta_" + std::to_string(deltas[k]), rep.envelope.omega[k]);
  const double ratio = rep.envelope.omega.front() / rep.envelope.omega.back();
  detail::add(r, "ratio_min_over_max", ratio);
  r.pass = converged && monotone && ratio <= 0.5;
  return r;
}

inline Result holder_boundedness(const Config&) {
  Result r{.id = 8, .name = "boundary Holder quotient", .runtime_limit_s = 180.0};
  const double band = 1.0 / 16;
  std::vector<double> q75, q95;
  bool converged = true;
  for (int n : {32, 64, 128}) {
    auto grid = build_grid(detail::unit_disk(), 1.0 / n);
    const auto s = solve(grid, BoundaryDatum::power({1.0, 0.0}, 0.75), SolveOptions{});
    converged = converged && s.report.converged;
    q75.push_back(boundary_holder_quotient(s.field, 0.75, band).value);
    q95.push_back(boundary_holder_quotient(s.field, 0.95, band).value);
    detail::add(r, "q075_h1/" + std::to_string(n), q75.back());
    detail::add(r, "q095_h1/" + std::to_string(n), q95.back());
  }
  const double spread = *std::max_element(q75.begin(), q75.end()) / *std::min_element(q75.begin(), q75.end());
  const double growth = q95.back() / q95.front();
  detail::add(r, "q075_max_over_min", spread);
  detail::add(r, "q095_growth", growth);
  r.pass = converged && spread <= 1.25 && growth >= 1.5;
  r.note = "a C^0.75 datum sampled at separations >= h grows at most like (h1/h2)^0.2 under refinement";
  return r;
}

inline Result barrier_positivity(const Config&) {
  Result r{.id = 9, .name = "barrier positivity", .runtime_limit_s = 60.0};
  const auto g = BoundaryDatum::step({1.0, 0.0}, 0.0, 2.0, 0.0);
  std::vector<double> rho;
  bool converged = true;
  for (int n : {64, 128}) {
    auto grid = build_grid(detail::unit_square(), 1.0 / n);
    const auto s = solve(grid, g, SolveOptions{});
    converged = converged && s.report.converged;
    std::vector<std::size_t> patch;
    for (auto c : grid->boundary_cells())
      if (s.field.values[c] >= 2.0) patch.push_back(c);
    rho.push_back(largest_passing_rho(s.field, patch, 2.0, 1.0, 1.0 / 32));
    detail::add(r, "rho_h1/" + std::to_string(n), rho.back());
  }
  const double q = rho[0] > 0.0 ? rho[1] / rho[0] : 0.0;
  r.pass = converged && rho[0] > 0.0 && rho[1] > 0.0 && q >= 0.5 - 1e-12 && q <= 2.0 + 1e-12;
  return r;
}

using Criterion = std::function<Result(const Config&)>;

inline std::vector<Criterion> criteria() {
  return {critical_radius_check, annulus_convergence, oracle_jump, comparison_principle, cut_and_paste,
          free_boundary_gradient, equicontinuity, holder_boundedness, barrier_positivity};
}

/// Runs one criterion, timing it and turning exceptions into an errored result.
inline Result run_one(const Criterion& c, int id, const Config& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  Result r;
  try {
    r = c(cfg);
  } catch (const std::exception& e) {
    r.id = id;
    r.errored = true;
    r.pass = false;
    r.error = e.what();
  }
  r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!r.errored && r.runtime_limit_s > 0.0 && r.runtime_s > r.runtime_limit_s) {
    r.pass = false;
    r.note += (r.note.empty() ? "" : "; ") + std::string("runtime limit exceeded");
  }
  return r;
}

}  // namespace bernoulli::acceptance
