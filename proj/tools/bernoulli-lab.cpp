// bernoulli-lab: command-line runner for the one-phase free-boundary toolkit.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bernoulli/acceptance.hpp"
#include "bernoulli/io.hpp"
#include "bernoulli/oracle1d.hpp"
#include "bernoulli/radial.hpp"
#include "bernoulli/regularity.hpp"
#include "bernoulli/solver.hpp"
#include "bernoulli/sweep.hpp"

namespace {

using namespace bernoulli;
using io::json;

enum Exit { kOk = 0, kFailed = 1, kConfig = 2, kConvergence = 3, kInternal = 4 };

constexpr std::uint64_t kDefaultSeed = acceptance::Config{}.seed;

// Flags that were given on the command line overwrite keys of the config file.
struct Merged {
  json cfg = json::object();

  void load(const std::string& path) {
    if (path.empty()) return;
    cfg = io::load_json_arg(path, "config");
    if (!cfg.is_object()) throw ValidationError("config: expected a JSON object");
  }
  template <class T>
  void flag(const CLI::Option* opt, const std::string& key, const T& value) {
    if (opt->count() > 0) cfg[key] = value;
  }
  void json_flag(const CLI::Option* opt, const std::string& key, const std::string& text) {
    if (opt->count() > 0) cfg[key] = io::load_json_arg(text, key);
  }
  // Object-valued flags update the config object key by key.
  void merge_flag(const CLI::Option* opt, const std::string& key, const std::string& text) {
    if (opt->count() == 0) return;
    const json j = io::load_json_arg(text, key);
    if (!j.is_object()) throw ValidationError(key + ": expected a JSON object");
    if (!cfg.contains(key) || !cfg[key].is_object()) cfg[key] = json::object();
    cfg[key].update(j);
  }
  [[nodiscard]] bool has(const std::string& key) const { return cfg.contains(key); }
  [[nodiscard]] const json& at(const std::string& key) const {
    if (!cfg.contains(key)) throw ValidationError(key + ": missing");
    return cfg[key];
  }
  [[nodiscard]] double number(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_number()) throw ValidationError(key + ": expected a number");
    return v.get<double>();
  }
  [[nodiscard]] double number_or(const std::string& key, double dflt) const { return has(key) ? number(key) : dflt; }
  [[nodiscard]] std::string text_or(const std::string& key, const std::string& dflt) const {
    if (!has(key)) return dflt;
    if (!cfg[key].is_string()) throw ValidationError(key + ": expected a string");
    return cfg[key].get<std::string>();
  }
  [[nodiscard]] std::vector<double> numbers(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_array()) throw ValidationError(key + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) throw ValidationError(key + ": expected an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }
  [[nodiscard]] std::uint64_t seed() const {
    if (!has("seed")) return kDefaultSeed;
    if (!cfg["seed"].is_number_unsigned()) throw ValidationError("seed: expected a nonnegative integer");
    return cfg["seed"].get<std::uint64_t>();
  }
  [[nodiscard]] double spacing() const {
    const double h = number("h");
    if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError("h: must be positive");
    return h;
  }
  [[nodiscard]] SolveOptions solver(SolveOptions base = {}) const {
    if (has("solver")) base = io::solve_options_from_json(cfg["solver"], base);
    if (has("lambda")) {
      base.lambda = number("lambda");
      if (!(base.lambda > 0.0) || !std::isfinite(base.lambda)) throw ValidationError("lambda: must be positive");
    }
    return base;
  }
  [[nodiscard]] std::shared_ptr<const Grid> grid() const {
    return build_grid(io::domain_from_json(at("domain")), spacing());
  }
};

struct Common {
  std::string config, out;
  std::uint64_t seed = kDefaultSeed;
};

void add_common(CLI::App* sub, Common& c) {
  sub->set_help_flag("--help", "print this help and exit");  // -h would clash with --h
  sub->add_option("--config", c.config, "JSON config file; flags override its keys");
  sub->add_option("--out", c.out, "output directory");
  sub->add_option("--seed", c.seed, "seed recorded in outputs and used by randomized checks");
}

void finish_common(Merged& m, const CLI::App* sub, const Common& c) {
  m.load(c.config);
  m.flag(sub->get_option("--out"), "out", c.out);
  m.flag(sub->get_option("--seed"), "seed", c.seed);
}

std::string field_csv(const ScalarField& f) {
  std::ostringstream os;
  f.write_csv(os);
  return os.str();
}

json with_seed(json j, std::uint64_t seed) {
  j["seed"] = seed;
  return j;
}

std::optional<io::OutputDir> open_out(const Merged& m, bool required) {
  const std::string dir = m.text_or("out", "");
  if (dir.empty()) {
    if (required) throw ValidationError("out: an output directory is required");
    return std::nullopt;
  }
  io::OutputDir out(dir);
  json echo = m.cfg;
  echo.erase("out");  // keeps hashes independent of where the run was written
  out.write_json("config.json", echo);
  return out;
}

void close_out(std::optional<io::OutputDir>& out, const Merged& m, const std::string& command) {
  if (out) out->finish({{"command", command}, {"seed", m.seed()}});
}

std::vector<double> t_grid(double tmin, double tmax, double tstep) {
  if (!(tstep > 0.0)) throw ValidationError("tstep: must be positive");
  if (!(tmin > 0.0 && tmax < 1.0 && tmin <= tmax)) throw ValidationError("tmin/tmax: need 0 < tmin <= tmax < 1");
  std::vector<double> ts;
  const auto n = static_cast<long>(std::floor((tmax - tmin) / tstep + 1e-9));
  for (long k = 0; k <= n; ++k) ts.push_back(tmin + static_cast<double>(k) * tstep);
  return ts;
}

// ---- subcommands ---------------------------------------------------------------

int cmd_solve(const Merged& m) {
  auto grid = m.grid();
  const BoundaryDatum g = io::datum_from_json(m.at("datum"));
  const std::string mode = m.text_or("mode", "single");
  const SolveOptions opts = m.solver();
  auto out = open_out(m, true);
  bool converged = true;
  if (mode == "single") {
    const auto s = solve(grid, g, opts);
    converged = s.report.converged;
    out->write("field.csv", field_csv(s.field));
    out->write_json("report.json", with_seed(io::to_json(s.report), m.seed()));
  } else if (mode == "extremes") {
    const auto e = solve_extremes(grid, g, opts);
    converged = e.lower_report.converged && e.upper_report.converged;
    out->write("field.csv", field_csv(e.lower));
    out->write_json("report.json", with_seed(io::to_json(e.lower_report), m.seed()));
    out->write("field_upper.csv", field_csv(e.upper));
    out->write_json("report_upper.json", with_seed(io::to_json(e.upper_report), m.seed()));
  } else {
    throw ValidationError("mode: expected single|extremes");
  }
  close_out(out, m, "solve");
  if (!converged) {
    std::cerr << "solve: solver did not converge\n";
    return kConvergence;
  }
  return kOk;
}

int cmd_oracle1d(const Merged& m) {
  const auto mins = solve_1d_exact(m.number("L"), m.number("a"), m.number("b"), m.number_or("lambda", 1.0));
  json arr = json::array();
  for (const auto& p : mins) arr.push_back(io::to_json(p));
  std::cout << arr.dump(2) << "\n";
  auto out = open_out(m, false);
  if (out) out->write_json("minimizers.json", {{"minimizers", arr}, {"seed", m.seed()}});
  close_out(out, m, "oracle1d");
  return kOk;
}

int cmd_sweep1d(const Merged& m) {
  const auto ts = t_grid(m.number_or("tmin", 0.01), m.number_or("tmax", 0.99), m.number_or("tstep", 0.01));
  const auto rows = sweep_1d(m.number_or("L", 1.0), m.number_or("lambda", 1.0), ts);
  std::ostringstream os;
  os << "t,count,gap_mid,energy\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%zu,%.17g,%.17g\n", r.t, r.count, r.gap_mid, r.energy);
    os << buf;
  }
  auto out = open_out(m, false);
  if (out) out->write("sweep1d.csv", os.str());
  else std::cout << os.str();
  close_out(out, m, "sweep1d");
  return kOk;
}

int cmd_annulus(const Merged& m) {
  const int d = static_cast<int>(m.number_or("d", 2.0));
  if (d != m.number_or("d", 2.0)) throw ValidationError("d: expected an integer");
  const double lambda = m.number_or("lambda", 1.0);
  const auto cr = critical_radius_details(d, lambda);
  json j{{"d", d}, {"lambda", lambda}, {"R", cr.value}, {"R_newton", cr.newton}};
  if (m.has("r")) {
    j["r"] = m.number("r");
    j["v"] = annulus_solution(d, m.number("r"), lambda);
  }
  std::printf("R = %.12f\n", cr.value);
  if (m.has("r")) std::printf("v(%g) = %.12f\n", m.number("r"), j["v"].get<double>());
  auto out = open_out(m, false);
  if (m.has("profile")) {
    if (!out) throw ValidationError("out: profile export needs an output directory");
    const double n = m.number("profile");
    if (!(n >= 2.0) || n != std::floor(n)) throw ValidationError("profile: expected an integer cell count >= 2");
    const double r_out = m.number_or("r_out", cr.value);
    const auto prof = radial_minimize(d, 1.0, r_out, 1.0, 0.0, lambda, static_cast<std::size_t>(n));
    std::ostringstream os;
    prof.write_csv(os);
    out->write("profile.csv", os.str());
    j["profile_energy"] = prof.energy;
    j["profile_free_boundary"] = prof.free_boundary_radius();
    j["profile_converged"] = prof.converged;
  }
  if (out) out->write_json("annulus.json", with_seed(j, m.seed()));
  close_out(out, m, "annulus");
  return kOk;
}

std::vector<std::size_t> patch_at_level(const ScalarField& u, double level) {
  std::vector<std::size_t> patch;
  for (auto c : u.grid->boundary_cells())
    if (u.values[c] >= level - 1e-12) patch.push_back(c);
  return patch;
}

int cmd_check(const Merged& m) {
  const std::string kind = m.text_or("kind", "");
  auto grid = m.grid();
  const SolveOptions opts = m.solver();
  auto out = open_out(m, true);
  CheckReport rep;
  bool converged = true;

  if (kind == "comparison") {
    const BoundaryDatum g = io::datum_from_json(m.at("datum"));
    const double c = m.number_or("shift", 0.1);
    if (!(c >= 0.0)) throw ValidationError("shift: must be nonnegative");
    BoundaryDatum gc = g;
    gc.shift += c;
    const auto a = solve_extremes(grid, g, opts), b = solve_extremes(grid, gc, opts);
    converged = a.lower_report.converged && a.upper_report.converged && b.lower_report.converged &&
                b.upper_report.converged;
    const auto lo = check_comparison(a.lower, b.lower), hi = check_comparison(a.upper, b.upper);
    rep = lo.violation >= hi.violation ? lo : hi;
    rep.pass = lo.pass && hi.pass;
    rep.params = {{"min_difference_lower", lo.param("min_difference")},
                  {"min_difference_upper", hi.param("min_difference")},
                  {"shift", c},
                  {"tol", lo.tolerance}};
  } else if (kind == "cutpaste") {
    const BoundaryDatum g = io::datum_from_json(m.at("datum"));
    const auto e = solve_extremes(grid, g, opts);
    converged = e.lower_report.converged && e.upper_report.converged;
    rep = check_cut_paste(e.lower, e.upper, opts.lambda);
    const double pairs = m.number_or("pairs", 100.0);
    if (!(pairs >= 0.0) || pairs != std::floor(pairs)) throw ValidationError("pairs: expected a nonnegative integer");
    acceptance::Uniform rng(m.seed());
    const auto bnd = sample_boundary(*grid, g);
    double min_slack = rep.param("slack");
    for (int k = 0; k < static_cast<int>(pairs); ++k) {
      const auto u = acceptance::random_field(grid, bnd, rng);
      const auto v = acceptance::random_field(grid, bnd, rng);
      const auto r = check_cut_paste(u, v, opts.lambda);
      if (r.param("slack") < min_slack) min_slack = r.param("slack");
    }
    rep.violation = std::max(0.0, -min_slack);
    rep.pass = rep.violation <= rep.tolerance;
    rep.params.push_back({"min_slack", min_slack});
    rep.params.push_back({"random_pairs", pairs});
  } else if (kind == "barrier") {
    const BoundaryDatum g = io::datum_from_json(m.at("datum"));
    const auto s = solve(grid, g, opts);
    converged = s.report.converged;
    const double level = m.number_or("level", datum_sup(*grid, g));
    const auto patch = patch_at_level(s.field, level);
    if (patch.empty()) throw ValidationError("level: no boundary cell reaches the level");
    if (m.has("rho")) {
      rep = check_barrier_positivity(s.field, patch, level, m.number("rho"));
    } else {
      const double rho = largest_passing_rho(s.field, patch, level, m.number_or("rho_max", 1.0),
                                             m.number_or("rho_min", grid->spacing()));
      rep = check_barrier_positivity(s.field, patch, level, rho > 0.0 ? rho : grid->spacing());
      rep.params.push_back({"largest_passing_rho", rho});
    }
  } else if (kind == "equicontinuity") {
    const DatumFamily fam = io::family_from_json(m.at("family"));
    const auto ts = m.has("ts") ? m.numbers("ts") : std::vector<double>{0.25, 0.5, 0.75};
    std::vector<double> deltas;
    if (m.has("deltas")) {
      deltas = m.numbers("deltas");
    } else {
      for (double d = grid->spacing(); d <= 0.5 + 1e-12; d *= 2.0) deltas.push_back(d);
    }
    std::vector<ScalarField> fields;
    for (double t : ts) {
      const auto s = solve(grid, family_member(fam, t), opts);
      converged = converged && s.report.converged;
      fields.push_back(s.field);
    }
    const auto er = equicontinuity_report(fields, deltas);
    std::ostringstream curves;
    curves << "t,delta,omega\n";
    char buf[128];
    for (std::size_t k = 0; k < er.curves.size(); ++k)
      for (std::size_t i = 0; i < er.curves[k].size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", ts[k], er.curves[k].delta[i], er.curves[k].omega[i]);
        curves << buf;
      }
    std::ostringstream env;
    er.envelope.write_csv(env);
    out->write("curves.csv", curves.str());
    out->write("envelope.csv", env.str());
    double drops = 0.0;
    for (std::size_t i = 1; i < er.envelope.size(); ++i)
      drops = std::max(drops, er.envelope.omega[i - 1] - er.envelope.omega[i]);
    rep.name = "equicontinuity";
    rep.violation = drops;
    rep.tolerance = 1e-12;
    rep.pass = drops <= rep.tolerance;
    rep.params = {{"fields", double(fields.size())},
                  {"omega_min_delta", er.envelope.omega.front()},
                  {"omega_max_delta", er.envelope.omega.back()}};
  } else if (kind == "holder") {
    const BoundaryDatum g = io::datum_from_json(m.at("datum"));
    const auto s = solve(grid, g, opts);
    converged = s.report.converged;
    const double gamma = m.number_or("gamma", 0.5);
    const double band = m.number_or("band", 2.0 * grid->spacing());
    const auto q = boundary_holder_quotient(s.field, gamma, band);
    rep.name = "holder";
    rep.pass = std::isfinite(q.value);
    rep.params = {{"quotient", q.value}, {"gamma", gamma}, {"band", band}};
  } else {
    throw ValidationError("kind: expected comparison|cutpaste|barrier|equicontinuity|holder");
  }

  out->write_json("report.json", with_seed(io::to_json(rep), m.seed()));
  close_out(out, m, "check");
  std::printf("%s: %s (violation %.3g)\n", rep.name.c_str(), rep.pass ? "pass" : "fail", rep.violation);
  if (!converged) {
    std::cerr << "check: solver did not converge\n";
    return kConvergence;
  }
  return rep.pass ? kOk : kFailed;
}

int cmd_sweep(const Merged& m) {
  auto grid = m.grid();
  const DatumFamily fam = io::family_from_json(m.at("family"));
  SweepOptions o = default_sweep_options(grid->spacing(), m.solver().lambda);
  const bool explicit_select = m.has("solver") && m.cfg["solver"].contains("select_tol");
  o.solve = m.solver(o.solve);
  o.gap_tol = m.number_or("gap_tol", o.gap_tol);
  o.energy_tol = m.number_or("energy_tol", o.energy_tol);
  if (!explicit_select) o.solve.select_tol = o.energy_tol;
  const auto ts = t_grid(m.number_or("tmin", 0.05), m.number_or("tmax", 0.95), m.number_or("tstep", 0.05));
  auto out = open_out(m, true);
  const auto res = run_sweep(grid, fam, ts, o);
  std::ostringstream os;
  write_sweep_csv(os, res.rows);
  out->write("sweep.csv", os.str());
  const auto js = jump_set(res.rows, res.gap_tol, res.energy_tol);
  out->write_json("jumps.json", with_seed(io::to_json(js, res.gap_tol, res.energy_tol), m.seed()));
  close_out(out, m, "sweep");
  bool converged = true;
  for (const auto& r : res.rows) converged = converged && r.converged();
  if (!converged) {
    std::cerr << "sweep: some solves did not converge\n";
    return kConvergence;
  }
  return kOk;
}

int cmd_acceptance(const Merged& m) {
  acceptance::Config cfg;
  cfg.seed = m.seed();
  auto out = open_out(m, false);
  const auto list = acceptance::criteria();
  json results = json::array();
  bool all_pass = true, errored = false;
  double total = 0.0;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const auto r = acceptance::run_one(list[k], static_cast<int>(k + 1), cfg);
    std::printf("[%s] %d %s (%.2f s)%s%s\n", r.errored ? "ERROR" : r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.runtime_s, r.error.empty() ? "" : ": ", r.error.c_str());
    std::fflush(stdout);
    all_pass = all_pass && r.pass;
    errored = errored || r.errored;
    total += r.runtime_s;
    results.push_back(io::to_json(r));
  }
  json summary{{"count", list.size()}, {"all_pass", all_pass}, {"total_runtime_s", total},
               {"seed", cfg.seed}, {"criteria", results}};
  if (out) out->write_json("acceptance.json", summary);
  close_out(out, m, "acceptance");
  if (errored) return kInternal;
  return all_pass ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bernoulli-lab: discrete one-phase free-boundary experiments"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  Merged m;
  Common common;
  std::function<int()> run;

  // solve
  std::string domain, datum, family, mode, kind, solver;
  double h = 0, lambda = 1, L = 1, a = 0, b = 0, tmin = 0, tmax = 0, tstep = 0, r = 0, d = 2, profile = 0;
  double shift = 0, level = 0, rho = 0, gamma = 0, band = 0, pairs = 0, gap_tol = 0, energy_tol = 0;

  auto* solve_cmd = app.add_subcommand("solve", "minimize the discrete energy on a domain");
  add_common(solve_cmd, common);
  auto* s_domain = solve_cmd->add_option("--domain", domain, "domain JSON (inline or file)");
  auto* s_datum = solve_cmd->add_option("--datum", datum, "boundary datum JSON (inline or file)");
  auto* s_h = solve_cmd->add_option("--h", h, "grid spacing");
  auto* s_lambda = solve_cmd->add_option("--lambda", lambda, "positivity weight");
  auto* s_solver = solve_cmd->add_option("--solver", solver, "solver options JSON, merged into the config");
  auto* s_mode = solve_cmd->add_option("--mode", mode, "single|extremes");
  solve_cmd->callback([&] {
    finish_common(m, solve_cmd, common);
    m.json_flag(s_domain, "domain", domain);
    m.json_flag(s_datum, "datum", datum);
    m.flag(s_h, "h", h);
    m.flag(s_lambda, "lambda", lambda);
    m.merge_flag(s_solver, "solver", solver);
    m.flag(s_mode, "mode", mode);
    run = [&] { return cmd_solve(m); };
  });

  auto* oracle_cmd = app.add_subcommand("oracle1d", "exact 1D minimizers");
  add_common(oracle_cmd, common);
  auto* o_L = oracle_cmd->add_option("--L", L, "interval length");
  auto* o_a = oracle_cmd->add_option("--a", a, "value at 0");
  auto* o_b = oracle_cmd->add_option("--b", b, "value at L");
  auto* o_lambda = oracle_cmd->add_option("--lambda", lambda, "positivity weight");
  oracle_cmd->callback([&] {
    finish_common(m, oracle_cmd, common);
    m.flag(o_L, "L", L);
    m.flag(o_a, "a", a);
    m.flag(o_b, "b", b);
    m.flag(o_lambda, "lambda", lambda);
    run = [&] { return cmd_oracle1d(m); };
  });

  auto* sweep1d_cmd = app.add_subcommand("sweep1d", "exact 1D sweep over symmetric data a = b = t");
  add_common(sweep1d_cmd, common);
  auto* w_L = sweep1d_cmd->add_option("--L", L, "interval length");
  auto* w_lambda = sweep1d_cmd->add_option("--lambda", lambda, "positivity weight");
  auto* w_tmin = sweep1d_cmd->add_option("--tmin", tmin, "first t");
  auto* w_tmax = sweep1d_cmd->add_option("--tmax", tmax, "last t");
  auto* w_tstep = sweep1d_cmd->add_option("--tstep", tstep, "t step");
  sweep1d_cmd->callback([&] {
    finish_common(m, sweep1d_cmd, common);
    m.flag(w_L, "L", L);
    m.flag(w_lambda, "lambda", lambda);
    m.flag(w_tmin, "tmin", tmin);
    m.flag(w_tmax, "tmax", tmax);
    m.flag(w_tstep, "tstep", tstep);
    run = [&] { return cmd_sweep1d(m); };
  });

  auto* annulus_cmd = app.add_subcommand("annulus", "critical radius and radial profile");
  add_common(annulus_cmd, common);
  auto* n_d = annulus_cmd->add_option("--d", d, "dimension");
  auto* n_lambda = annulus_cmd->add_option("--lambda", lambda, "positivity weight");
  auto* n_r = annulus_cmd->add_option("--r", r, "evaluate the profile at this radius");
  auto* n_profile = annulus_cmd->add_option("--profile", profile, "radial cells for a discrete profile.csv");
  annulus_cmd->callback([&] {
    finish_common(m, annulus_cmd, common);
    m.flag(n_d, "d", d);
    m.flag(n_lambda, "lambda", lambda);
    m.flag(n_r, "r", r);
    m.flag(n_profile, "profile", profile);
    run = [&] { return cmd_annulus(m); };
  });

  auto* check_cmd = app.add_subcommand("check", "property checks on computed fields");
  add_common(check_cmd, common);
  auto* c_kind = check_cmd->add_option("--kind", kind, "comparison|cutpaste|barrier|equicontinuity|holder");
  auto* c_domain = check_cmd->add_option("--domain", domain, "domain JSON");
  auto* c_datum = check_cmd->add_option("--datum", datum, "boundary datum JSON");
  auto* c_family = check_cmd->add_option("--family", family, "datum family JSON (equicontinuity)");
  auto* c_h = check_cmd->add_option("--h", h, "grid spacing");
  auto* c_lambda = check_cmd->add_option("--lambda", lambda, "positivity weight");
  auto* c_solver = check_cmd->add_option("--solver", solver, "solver options JSON, merged into the config");
  auto* c_shift = check_cmd->add_option("--shift", shift, "comparison: constant added to the datum");
  auto* c_pairs = check_cmd->add_option("--pairs", pairs, "cutpaste: random competitor pairs");
  auto* c_level = check_cmd->add_option("--level", level, "barrier: datum level of the patch");
  auto* c_rho = check_cmd->add_option("--rho", rho, "barrier: radius to check (default: ladder)");
  auto* c_gamma = check_cmd->add_option("--gamma", gamma, "holder: exponent");
  auto* c_band = check_cmd->add_option("--band", band, "holder: boundary band width");
  check_cmd->callback([&] {
    finish_common(m, check_cmd, common);
    m.flag(c_kind, "kind", kind);
    m.json_flag(c_domain, "domain", domain);
    m.json_flag(c_datum, "datum", datum);
    m.json_flag(c_family, "family", family);
    m.flag(c_h, "h", h);
    m.flag(c_lambda, "lambda", lambda);
    m.merge_flag(c_solver, "solver", solver);
    m.flag(c_shift, "shift", shift);
    m.flag(c_pairs, "pairs", pairs);
    m.flag(c_level, "level", level);
    m.flag(c_rho, "rho", rho);
    m.flag(c_gamma, "gamma", gamma);
    m.flag(c_band, "band", band);
    run = [&] { return cmd_check(m); };
  });

  auto* sweep_cmd = app.add_subcommand("sweep", "lower/upper solves over a datum family");
  add_common(sweep_cmd, common);
  auto* p_domain = sweep_cmd->add_option("--domain", domain, "domain JSON");
  auto* p_family = sweep_cmd->add_option("--family", family, "datum family JSON");
  auto* p_h = sweep_cmd->add_option("--h", h, "grid spacing");
  auto* p_lambda = sweep_cmd->add_option("--lambda", lambda, "positivity weight");
  auto* p_solver = sweep_cmd->add_option("--solver", solver, "solver options JSON, merged into the config");
  auto* p_tmin = sweep_cmd->add_option("--tmin", tmin, "first t");
  auto* p_tmax = sweep_cmd->add_option("--tmax", tmax, "last t");
  auto* p_tstep = sweep_cmd->add_option("--tstep", tstep, "t step");
  auto* p_gap = sweep_cmd->add_option("--gap-tol", gap_tol, "gap above which a row counts as a jump");
  auto* p_energy = sweep_cmd->add_option("--energy-tol", energy_tol, "energy agreement for a jump row");
  sweep_cmd->callback([&] {
    finish_common(m, sweep_cmd, common);
    m.json_flag(p_domain, "domain", domain);
    m.json_flag(p_family, "family", family);
    m.flag(p_h, "h", h);
    m.flag(p_lambda, "lambda", lambda);
    m.merge_flag(p_solver, "solver", solver);
    m.flag(p_tmin, "tmin", tmin);
    m.flag(p_tmax, "tmax", tmax);
    m.flag(p_tstep, "tstep", tstep);
    m.flag(p_gap, "gap_tol", gap_tol);
    m.flag(p_energy, "energy_tol", energy_tol);
    run = [&] { return cmd_sweep(m); };
  });

  auto* acc_cmd = app.add_subcommand("acceptance", "run the acceptance criteria");
  add_common(acc_cmd, common);
  acc_cmd->callback([&] {
    finish_common(m, acc_cmd, common);
    run = [&] { return cmd_acceptance(m); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }

  try {
    return run();
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const ConfigurationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
