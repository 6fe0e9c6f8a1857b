#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <memory>
#include <ostream>
#include <vector>

#include "bernoulli/boundary_data.hpp"
#include "bernoulli/error.hpp"
#include "bernoulli/field.hpp"
#include "bernoulli/geometry.hpp"
#include "bernoulli/parallel.hpp"
#include "bernoulli/solver.hpp"

namespace bernoulli {

struct SweepRow {
  double t = 0.0;
  double gap = 0.0;  // max-norm distance between upper and lower fields
  double energy_lower = 0.0;
  double energy_upper = 0.0;
  bool converged_lower = false;
  bool converged_upper = false;

  [[nodiscard]] bool converged() const { return converged_lower && converged_upper; }
};

struct SweepOptions {
  SolveOptions solve;
  double gap_tol = -1.0;     // negative: 10 h
  double energy_tol = -1.0;  // negative: 2 lambda h
  bool keep_fields = false;
  unsigned workers = 0;  // 0: BERNOULLI_LAB_THREADS
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<ScalarField> lower, upper;  // filled when keep_fields
  double gap_tol = 0.0;
  double energy_tol = 0.0;
};

/// Energies on the lattice carry a cell-count error of order lambda h, so two
/// branches of a discrete tie generally differ by that much at every sampled t.
inline double default_energy_tol(double h, double lambda) { return 2.0 * lambda * h; }

/// The solver options a sweep uses unless told otherwise: front refinement
/// on, and extremes whose energy is worse by more than energy_tol replaced.
inline SweepOptions default_sweep_options(double h, double lambda = 1.0) {
  SweepOptions o;
  o.solve.lambda = lambda;
  o.solve.refine_front = true;
  o.gap_tol = 10.0 * h;
  o.energy_tol = default_energy_tol(h, lambda);
  o.solve.select_tol = o.energy_tol;
  return o;
}

inline SweepResult run_sweep(std::shared_ptr<const Grid> grid, const DatumFamily& fam, const std::vector<double>& ts,
                             SweepOptions opts) {
  fam.validate();
  for (std::size_t k = 0; k < ts.size(); ++k) {
    if (!(ts[k] > 0.0 && ts[k] < 1.0)) throw ArgumentError("run_sweep: t must lie in (0, 1)");
    if (k > 0 && !(ts[k] > ts[k - 1])) throw ArgumentError("run_sweep: t-grid must be strictly increasing");
  }
  SweepResult res;
  res.gap_tol = opts.gap_tol >= 0.0 ? opts.gap_tol : 10.0 * grid->spacing();
  res.energy_tol = opts.energy_tol >= 0.0 ? opts.energy_tol : default_energy_tol(grid->spacing(), opts.solve.lambda);
  const unsigned workers = opts.workers ? opts.workers : worker_count();
  auto ext = parallel_map<Extremes>(
      ts.size(), [&](std::size_t k) { return solve_extremes(grid, family_member(fam, ts[k]), opts.solve); }, workers);
  for (std::size_t k = 0; k < ts.size(); ++k) {
    SweepRow r;
    r.t = ts[k];
    r.gap = max_norm_distance(ext[k].upper, ext[k].lower);
    r.energy_lower = ext[k].lower_report.energy;
    r.energy_upper = ext[k].upper_report.energy;
    r.converged_lower = ext[k].lower_report.converged;
    r.converged_upper = ext[k].upper_report.converged;
    res.rows.push_back(r);
    if (opts.keep_fields) {
      res.lower.push_back(std::move(ext[k].lower));
      res.upper.push_back(std::move(ext[k].upper));
    }
  }
  return res;
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "t,gap,energy_lower,energy_upper,converged_lower,converged_upper\n";
  char buf[192];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%d,%d\n", r.t, r.gap, r.energy_lower, r.energy_upper,
                  r.converged_lower ? 1 : 0, r.converged_upper ? 1 : 0);
    os << buf;
  }
}

struct JumpInterval {
  double lo = 0.0, hi = 0.0;  // cover: first/last row padded by half the spacing to the neighbor rows
  double t_first = 0.0, t_last = 0.0;
  std::size_t rows = 0;
  [[nodiscard]] double width() const { return hi - lo; }
};

struct JumpSet {
  std::vector<JumpInterval> intervals;
  double total_measure = 0.0;
};

/// Maximal runs of consecutive converged rows flagged as non-unique: gap >
/// gap_tol with energies within energy_tol. Non-converged rows break runs.
inline JumpSet jump_set(const std::vector<SweepRow>& rows, double gap_tol,
                        double energy_tol = std::numeric_limits<double>::infinity()) {
  JumpSet js;
  auto flagged = [&](std::size_t k) {
    const auto& r = rows[k];
    return r.converged() && r.gap > gap_tol && std::abs(r.energy_upper - r.energy_lower) <= energy_tol;
  };
  auto half_left = [&](std::size_t k) {
    if (k > 0) return 0.5 * (rows[k].t - rows[k - 1].t);
    return rows.size() > 1 ? 0.5 * (rows[1].t - rows[0].t) : 0.0;
  };
  auto half_right = [&](std::size_t k) {
    if (k + 1 < rows.size()) return 0.5 * (rows[k + 1].t - rows[k].t);
    return k > 0 ? 0.5 * (rows[k].t - rows[k - 1].t) : 0.0;
  };
  for (std::size_t k = 0; k < rows.size();) {
    if (!flagged(k)) {
      ++k;
      continue;
    }
    std::size_t e = k;
    while (e + 1 < rows.size() && flagged(e + 1)) ++e;
    JumpInterval iv;
    iv.t_first = rows[k].t;
    iv.t_last = rows[e].t;
    iv.lo = iv.t_first - half_left(k);
    iv.hi = iv.t_last + half_right(e);
    iv.rows = e - k + 1;
    js.total_measure += iv.width();
    js.intervals.push_back(iv);
    k = e + 1;
  }
  return js;
}

}  // namespace bernoulli
