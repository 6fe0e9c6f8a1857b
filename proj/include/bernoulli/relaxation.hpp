#pragma once

// Thresholded coordinate relaxation for energies of the form
//
//   E(u) = sum_{edges ij} w_ij (u_i - u_j)^2 + lambda * sum_{free i, u_i > 0} m_i
//
// over a weighted graph whose fixed nodes carry Dirichlet data. The lattice
// solver (w = h^{d-2}, m = h^d) and the radial minimizer (w = r^{d-1}/h,
// m = r^{d-1} h) are both instances.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "bernoulli/error.hpp"

namespace bernoulli::relax {

/// Deterministic pairwise summation (fixed tree over the input order).
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 16) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const auto mid = v.size() / 2;
  return pairwise_sum(v.first(mid)) + pairwise_sum(v.subspan(mid));
}

struct Edge {
  std::size_t i, j;
  double w;
};

class Problem {
 public:
  /// `free_nodes` lists the unknowns; every other node is fixed. Edges must
  /// have at least one free endpoint. `traversal` is the update order of free
  /// nodes (a permutation of free_nodes).
  Problem(std::size_t node_count, std::vector<Edge> edges, std::vector<double> measure,
          std::vector<std::size_t> traversal, bool chain)
      : n_(node_count),
        edges_(std::move(edges)),
        measure_(std::move(measure)),
        order_(std::move(traversal)),
        chain_(chain) {
    free_.assign(n_, 0);
    for (auto i : order_) free_[i] = 1;
    std::vector<std::size_t> deg(n_ + 1, 0);
    for (const auto& e : edges_) {
      if (!free_[e.i] && !free_[e.j]) throw InternalError("relax::Problem: edge between fixed nodes");
      ++deg[e.i];
      ++deg[e.j];
    }
    offsets_.assign(n_ + 1, 0);
    for (std::size_t i = 0; i < n_; ++i) offsets_[i + 1] = offsets_[i] + deg[i];
    adj_.resize(offsets_[n_]);
    adj_w_.resize(offsets_[n_]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : edges_) {
      adj_[fill[e.i]] = e.j;
      adj_w_[fill[e.i]++] = e.w;
      adj_[fill[e.j]] = e.i;
      adj_w_[fill[e.j]++] = e.w;
    }
    weight_sum_.assign(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) weight_sum_[i] += adj_w_[k];
  }

  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] bool is_free(std::size_t i) const { return free_[i] != 0; }
  [[nodiscard]] std::span<const std::size_t> order() const { return order_; }
  [[nodiscard]] std::span<const Edge> edges() const { return edges_; }
  [[nodiscard]] double measure(std::size_t i) const { return measure_[i]; }
  [[nodiscard]] double weight_sum(std::size_t i) const { return weight_sum_[i]; }
  [[nodiscard]] bool chain() const { return chain_; }

  template <class F>
  void for_neighbors(std::size_t i, F&& f) const {
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) f(adj_[k], adj_w_[k]);
  }

  /// Weighted neighbor mean.
  [[nodiscard]] double neighbor_mean(std::span<const double> u, std::size_t i) const {
    double s = 0.0;
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) s += adj_w_[k] * u[adj_[k]];
    return s / weight_sum_[i];
  }

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<double> measure_;
  std::vector<std::size_t> order_;
  bool chain_;
  std::vector<std::uint8_t> free_;
  std::vector<std::size_t> offsets_, adj_;
  std::vector<double> adj_w_, weight_sum_;
};

inline double dirichlet(const Problem& p, std::span<const double> u) {
  std::vector<double> terms;
  terms.reserve(p.edges().size());
  for (const auto& e : p.edges()) {
    const double d = u[e.i] - u[e.j];
    terms.push_back(e.w * d * d);
  }
  return pairwise_sum(terms);
}

/// Sum of m_i over free nodes with u_i > threshold.
inline double positive_measure(const Problem& p, std::span<const double> u, double threshold = 0.0) {
  std::vector<std::size_t> nodes(p.order().begin(), p.order().end());
  std::sort(nodes.begin(), nodes.end());
  std::vector<double> terms;
  terms.reserve(nodes.size());
  for (auto i : nodes)
    if (u[i] > threshold) terms.push_back(p.measure(i));
  return pairwise_sum(terms);
}

inline double energy(const Problem& p, std::span<const double> u, double lambda) {
  return dirichlet(p, u) + lambda * positive_measure(p, u);
}

/// Local energy of node i at value v with all other nodes frozen.
inline double local_energy(const Problem& p, std::span<const double> u, std::size_t i, double v,
                           double lambda) {
  double s = 0.0;
  p.for_neighbors(i, [&](std::size_t j, double w) {
    const double d = v - u[j];
    s += w * d * d;
  });
  return s + (v > 0.0 ? lambda * p.measure(i) : 0.0);
}

/// argmin over v in {0, mean} of the local energy; ties resolve to 0.
inline double local_update(const Problem& p, std::span<const double> u, std::size_t i, double lambda) {
  const double mean = p.neighbor_mean(u, i);
  if (!(mean > 0.0)) return 0.0;
  return local_energy(p, u, i, mean, lambda) < local_energy(p, u, i, 0.0, lambda) ? mean : 0.0;
}

struct SweepStats {
  double max_change = 0.0;
  std::size_t switched = 0;  // nodes that changed between zero and positive
};

/// One Gauss-Seidel pass of local_update in traversal order.
inline SweepStats sweep(const Problem& p, std::span<double> u, double lambda) {
  SweepStats st;
  for (auto i : p.order()) {
    const double old = u[i];
    const double nv = local_update(p, u, i, lambda);
    st.max_change = std::max(st.max_change, std::abs(nv - old));
    if ((old > 0.0) != (nv > 0.0)) ++st.switched;
    u[i] = nv;
  }
  return st;
}

/// max_i |local_update(u)_i - u_i| over free nodes, without modifying u.
inline double fixed_point_residual(const Problem& p, std::span<const double> u, double lambda) {
  double r = 0.0;
  for (auto i : p.order()) r = std::max(r, std::abs(local_update(p, u, i, lambda) - u[i]));
  return r;
}

namespace detail {

// Tridiagonal solve on maximal runs of consecutive support nodes of a chain.
inline void chain_solve(const Problem& p, std::span<double> u, const std::vector<std::uint8_t>& in) {
  const std::size_t n = p.size();
  std::vector<double> cprime(n), dprime(n);
  std::size_t i = 0;
  while (i < n) {
    if (!in[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && in[j + 1]) ++j;
    // forward elimination over [i, j]
    for (std::size_t k = i; k <= j; ++k) {
      double diag = p.weight_sum(k), lower = 0.0, upper = 0.0, rhs = 0.0;
      p.for_neighbors(k, [&](std::size_t m, double w) {
        if (m + 1 == k && k > i) lower = w;
        else if (m == k + 1 && k < j) upper = w;
        else if (!p.is_free(m)) rhs += w * u[m];
        // free neighbors outside the support contribute zero
      });
      const double denom = k > i ? diag + lower * cprime[k - 1] : diag;
      cprime[k] = -upper / denom;
      dprime[k] = (rhs + (k > i ? lower * dprime[k - 1] : 0.0)) / denom;
    }
    u[j] = dprime[j];
    for (std::size_t k = j; k-- > i;) u[k] = dprime[k] - cprime[k] * u[k + 1];
    i = j + 1;
  }
}

}  // namespace detail

struct HarmonicSolveStats {
  double residual = 0.0;  // max |u_i - mean_i| on the support
  bool converged = false;
};

/// Replaces u on the support (free nodes with in[i] != 0) by the weighted
/// harmonic function with the current fixed values and zero on free nodes
/// outside the support. Results at or below `zero_clamp` are set to 0.
inline HarmonicSolveStats harmonic_solve(const Problem& p, std::span<double> u,
                                         const std::vector<std::uint8_t>& in, double tol,
                                         double zero_clamp) {
  HarmonicSolveStats st;
  for (auto i : p.order())
    if (!in[i]) u[i] = 0.0;
  if (p.chain()) {
    detail::chain_solve(p, u, in);
    st.converged = true;
  } else {
    // Sparse LDL^T on the support; the system is the weighted graph
    // Laplacian restricted to the support, which is SPD because every
    // support component touches a fixed or zero node.
    std::vector<std::size_t> s;
    for (auto i : p.order())
      if (in[i]) s.push_back(i);
    std::sort(s.begin(), s.end());
    if (!s.empty()) {
      std::vector<std::ptrdiff_t> slot(p.size(), -1);
      for (std::size_t k = 0; k < s.size(); ++k) slot[s[k]] = static_cast<std::ptrdiff_t>(k);
      std::vector<Eigen::Triplet<double>> trip;
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.size()));
      for (std::size_t k = 0; k < s.size(); ++k) {
        const auto i = s[k];
        const auto row = static_cast<Eigen::Index>(k);
        trip.emplace_back(row, row, p.weight_sum(i));
        p.for_neighbors(i, [&](std::size_t j, double w) {
          if (slot[j] >= 0) trip.emplace_back(row, static_cast<Eigen::Index>(slot[j]), -w);
          else if (!p.is_free(j)) rhs[row] += w * u[j];
        });
      }
      Eigen::SparseMatrix<double> a(static_cast<Eigen::Index>(s.size()), static_cast<Eigen::Index>(s.size()));
      a.setFromTriplets(trip.begin(), trip.end());
      Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a);
      if (ldlt.info() != Eigen::Success) throw InternalError("harmonic_solve: factorization failed");
      const Eigen::VectorXd x = ldlt.solve(rhs);
      for (std::size_t k = 0; k < s.size(); ++k) u[s[k]] = x[static_cast<Eigen::Index>(k)];
      for (auto i : s) st.residual = std::max(st.residual, std::abs(u[i] - p.neighbor_mean(u, i)));
    }
    st.converged = st.residual <= tol || st.residual <= 1e-13;
  }
  for (auto i : p.order())
    if (u[i] <= zero_clamp) u[i] = 0.0;
  return st;
}

inline std::vector<std::uint8_t> support_mask(const Problem& p, std::span<const double> u) {
  std::vector<std::uint8_t> in(p.size(), 0);
  for (auto i : p.order()) in[i] = u[i] > 0.0 ? 1 : 0;
  return in;
}

struct Options {
  double tolerance = 1e-10;  // max per-node change of a converged sweep
  int max_sweeps = 100000;
  bool accelerate = true;     // exact harmonic solve on the current support after each sweep
  bool refine_front = false;  // collective front moves after convergence
  int max_front_moves = 100000;
  int stall_sweeps = 10;
  double stall_energy = 1e-14;
  double zero_clamp = 1e-12;
};

struct Report {
  double initial_energy = 0.0;
  double energy = 0.0;
  int sweeps = 0;
  double residual = 0.0;
  bool converged = false;
  int harmonic_solves = 0;
  int front_moves = 0;
  std::vector<double> history;  // energy after every sweep or accepted front move
};

namespace detail {

// Relaxes to a fixed point of local_update. Starting below (above) every
// fixed point, the iterates stay below (above) by monotonicity of
// local_update in the neighbor values; the harmonic jump preserves this
// because the solve on a support S lies between the current iterate and the
// fixed point supported on a superset (subset) of S.
inline void relax_to_fixed_point(const Problem& p, std::span<double> u, double lambda,
                                 const Options& opt, Report& rep, double& e) {
  int stall = 0;
  std::vector<double> trial;
  while (rep.sweeps < opt.max_sweeps) {
    const SweepStats st = sweep(p, u, lambda);
    ++rep.sweeps;
    double e_new = energy(p, u, lambda);
    if (st.max_change <= opt.tolerance && fixed_point_residual(p, u, lambda) <= opt.tolerance) {
      rep.history.push_back(e_new);
      e = e_new;
      rep.converged = true;
      return;
    }
    if (opt.accelerate) {
      trial.assign(u.begin(), u.end());
      harmonic_solve(p, trial, support_mask(p, u), 0.01 * opt.tolerance, opt.zero_clamp);
      ++rep.harmonic_solves;
      const double et = energy(p, trial, lambda);
      // the solve minimizes the Dirichlet term on the support, so any
      // increase here is evaluation rounding
      if (et <= e_new + 1e-13 * (1.0 + std::abs(e_new))) {
        std::copy(trial.begin(), trial.end(), u.begin());
        e_new = et;
      }
    }
    rep.history.push_back(e_new);
    stall = (e - e_new < opt.stall_energy) ? stall + 1 : 0;
    e = e_new;
    if (stall >= opt.stall_sweeps) return;
  }
}

struct Candidate {
  std::size_t node;
  double excess;
};

// A trial move: add nodes (seeded by their neighbor mean), drop nodes, then
// resolve harmonically on the new support and evaluate the exact energy.
inline double try_move(const Problem& p, std::span<const double> u, std::vector<double>& out,
                       std::span<const Candidate> add, std::span<const Candidate> drop,
                       double lambda, const Options& opt) {
  out.assign(u.begin(), u.end());
  auto in = support_mask(p, u);
  for (const auto& c : add) {
    in[c.node] = 1;
    out[c.node] = std::max(p.neighbor_mean(u, c.node), 0.0);
  }
  for (const auto& c : drop) {
    in[c.node] = 0;
    out[c.node] = 0.0;
  }
  harmonic_solve(p, out, in, 0.01 * opt.tolerance, opt.zero_clamp);
  return energy(p, out, lambda);
}

}  // namespace detail

/// Collective front moves. For a zero node next to the positive set the
/// squared slope estimate is sum_j w_ij u_j^2 / m_i, and for a positive node
/// next to zeros it is sum_{zero j} w_ij u_i^2 / m_i; both reduce to |grad u|^2
/// on flat lattice fronts. Nodes whose estimate disagrees with lambda are
/// proposed; a proposal is kept only if the exact energy decreases.
inline bool refine_front_once(const Problem& p, std::vector<double>& u, double lambda,
                              const Options& opt, double& e) {
  std::vector<detail::Candidate> add, drop;
  for (auto i : p.order()) {
    if (u[i] > 0.0) {
      double zero_w = 0.0;
      p.for_neighbors(i, [&](std::size_t j, double w) {
        if (!(u[j] > 0.0)) zero_w += w;
      });
      if (zero_w > 0.0) {
        const double est = zero_w * u[i] * u[i] / p.measure(i);
        if (est < lambda) drop.push_back({i, lambda - est});
      }
    } else {
      double acc = 0.0;
      p.for_neighbors(i, [&](std::size_t j, double w) {
        if (u[j] > 0.0) acc += w * u[j] * u[j];
      });
      if (acc > 0.0) {
        const double est = acc / p.measure(i);
        if (est > lambda) add.push_back({i, est - lambda});
      }
    }
  }
  if (add.empty() && drop.empty()) return false;
  auto by_excess = [](const detail::Candidate& a, const detail::Candidate& b) {
    return a.excess != b.excess ? a.excess > b.excess : a.node < b.node;
  };
  std::sort(add.begin(), add.end(), by_excess);
  std::sort(drop.begin(), drop.end(), by_excess);
  const double margin = 1e-13 * (1.0 + std::abs(e));
  std::vector<double> trial;
  const std::size_t top = std::max(add.size(), drop.size());
  for (std::size_t k = top; k >= 1; k = k / 2) {
    const auto na = std::min(k, add.size());
    const auto nd = std::min(k, drop.size());
    const std::span<const detail::Candidate> a(add.data(), na), d(drop.data(), nd), none;
    for (int variant = 0; variant < 3; ++variant) {
      if (variant == 0 && (na == 0 || nd == 0)) continue;
      if (variant == 1 && na == 0) continue;
      if (variant == 2 && nd == 0) continue;
      const double et = detail::try_move(p, u, trial, variant == 2 ? none : a,
                                         variant == 1 ? none : d, lambda, opt);
      if (et < e - margin) {
        u.swap(trial);
        e = et;
        return true;
      }
    }
    if (k == 1) break;
  }
  return false;
}

/// Relaxation to a local_update fixed point, optionally followed by front
/// refinement (each accepted move followed by re-relaxation).
inline Report minimize(const Problem& p, std::vector<double>& u, double lambda, const Options& opt) {
  if (!(opt.tolerance > 0.0) || opt.max_sweeps < 1)
    throw ArgumentError("relaxation: tolerance must be positive and max_sweeps >= 1");
  Report rep;
  double e = energy(p, u, lambda);
  rep.initial_energy = e;
  rep.history.push_back(e);
  detail::relax_to_fixed_point(p, u, lambda, opt, rep, e);
  if (opt.refine_front && rep.converged) {
    while (rep.front_moves < opt.max_front_moves && refine_front_once(p, u, lambda, opt, e)) {
      ++rep.front_moves;
      rep.history.push_back(e);
      rep.converged = false;
      detail::relax_to_fixed_point(p, u, lambda, opt, rep, e);
      if (!rep.converged) break;
    }
  }
  rep.energy = e;
  rep.residual = fixed_point_residual(p, u, lambda);
  return rep;
}

}  // namespace bernoulli::relax
