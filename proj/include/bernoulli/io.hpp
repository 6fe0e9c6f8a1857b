#pragma once

// JSON forms of domains, data, families, solver options and reports, plus
// the output-directory writer with its content-hash manifest.

#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "bernoulli/acceptance.hpp"
#include "bernoulli/boundary_data.hpp"
#include "bernoulli/error.hpp"
#include "bernoulli/geometry.hpp"
#include "bernoulli/oracle1d.hpp"
#include "bernoulli/regularity.hpp"
#include "bernoulli/solver.hpp"
#include "bernoulli/sweep.hpp"

namespace bernoulli::io {

using json = nlohmann::ordered_json;

namespace detail {

[[noreturn]] inline void bad(const std::string& where, const std::string& what) {
  throw ValidationError(where + ": " + what);
}

inline const json& field(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(where + "." + key, "missing");
  return *it;
}

inline double number(const json& j, const std::string& key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_number()) bad(where + "." + key, "expected a number");
  return v.get<double>();
}

inline double number_or(const json& j, const std::string& key, double dflt, const std::string& where) {
  return j.contains(key) ? number(j, key, where) : dflt;
}

inline std::string text(const json& j, const std::string& key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_string()) bad(where + "." + key, "expected a string");
  return v.get<std::string>();
}

inline Point point(const json& j, const std::string& key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    bad(where + "." + key, "expected [x, y]");
  return {v[0].get<double>(), v[1].get<double>()};
}

inline Point point_or(const json& j, const std::string& key, Point dflt, const std::string& where) {
  return j.contains(key) ? point(j, key, where) : dflt;
}

inline json pt(Point p) { return json::array({p.x, p.y}); }

// Library messages start with "datum: ", "domain: " ...; replace that with the JSON path.
[[noreturn]] inline void rethrow_at(const ValidationError& e, const std::string& prefix, const std::string& where) {
  std::string m = e.what();
  if (m.rfind(where, 0) == 0) throw e;
  if (m.rfind(prefix + ": ", 0) == 0) m.erase(0, prefix.size() + 2);
  throw ValidationError(where + ": " + m);
}

template <class E>
E parse_enum(const std::string& s, std::initializer_list<std::pair<const char*, E>> table, const std::string& where) {
  std::string options;
  for (const auto& [name, v] : table) {
    if (s == name) return v;
    options += (options.empty() ? "" : "|") + std::string(name);
  }
  bad(where, "unknown value '" + s + "' (expected " + options + ")");
}

}  // namespace detail

/// Inline JSON text, or a path to a JSON file.
inline json load_json_arg(const std::string& arg, const std::string& what) {
  std::string text = arg;
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || (arg[first] != '{' && arg[first] != '[')) {
    std::ifstream in(arg);
    if (!in) throw ValidationError(what + ": cannot read file '" + arg + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(what + ": invalid JSON (" + std::string(e.what()) + ")");
  }
}

// ---- domains ---------------------------------------------------------------

inline DomainSpec domain_from_json(const json& j, const std::string& where = "domain") {
  using detail::number;
  const std::string kind = detail::text(j, "kind", where);
  const std::string pw = where + ".params";
  const json& p = detail::field(j, "params", where);
  auto spec = [&]() -> DomainSpec {
    if (kind == "interval") return DomainSpec(Interval{number(p, "a", pw), number(p, "b", pw)});
    if (kind == "rectangle")
      return DomainSpec(Rectangle{number(p, "x0", pw), number(p, "x1", pw), number(p, "y0", pw), number(p, "y1", pw)});
    if (kind == "disk") return DomainSpec(Disk{detail::point(p, "center", pw), number(p, "radius", pw)});
    if (kind == "annulus")
      return DomainSpec(Annulus{detail::point(p, "center", pw), number(p, "inner", pw), number(p, "outer", pw)});
    if (kind == "convex-polygon") {
      const json& v = detail::field(p, "vertices", pw);
      if (!v.is_array()) detail::bad(pw + ".vertices", "expected an array of [x, y]");
      ConvexPolygon poly;
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (!v[k].is_array() || v[k].size() != 2 || !v[k][0].is_number() || !v[k][1].is_number())
          detail::bad(pw + ".vertices[" + std::to_string(k) + "]", "expected [x, y]");
        poly.vertices.push_back({v[k][0].get<double>(), v[k][1].get<double>()});
      }
      return DomainSpec(std::move(poly));
    }
    if (kind == "lipschitz-graph") {
      LipschitzGraph g;
      g.x0 = number(p, "x0", pw);
      g.x1 = number(p, "x1", pw);
      const json& s = detail::field(p, "samples", pw);
      if (!s.is_array()) detail::bad(pw + ".samples", "expected an array of numbers");
      for (const auto& v : s) {
        if (!v.is_number()) detail::bad(pw + ".samples", "expected an array of numbers");
        g.samples.push_back(v.get<double>());
      }
      const std::string dir = p.contains("direction") ? detail::text(p, "direction", pw) : "up";
      if (dir != "up" && dir != "down") detail::bad(pw + ".direction", "expected up|down");
      g.upward = dir == "up";
      g.bound = number(p, "bound", pw);
      return DomainSpec(std::move(g));
    }
    detail::bad(where + ".kind", "unknown domain kind '" + kind + "'");
  };
  DomainSpec d = [&] {
    try {
      return spec();
    } catch (const ValidationError& e) {
      detail::rethrow_at(e, "domain", where);
    }
  }();
  if (j.contains("dimension")) {
    const double dim = detail::number(j, "dimension", where);
    if (dim != d.dimension()) detail::bad(where + ".dimension", "does not match the domain kind");
  }
  return d;
}

inline json to_json(const DomainSpec& d) {
  json p;
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Interval>) p = {{"a", s.a}, {"b", s.b}};
        else if constexpr (std::is_same_v<S, Rectangle>) p = {{"x0", s.x0}, {"x1", s.x1}, {"y0", s.y0}, {"y1", s.y1}};
        else if constexpr (std::is_same_v<S, Disk>) p = {{"center", detail::pt(s.center)}, {"radius", s.radius}};
        else if constexpr (std::is_same_v<S, Annulus>)
          p = {{"center", detail::pt(s.center)}, {"inner", s.inner}, {"outer", s.outer}};
        else if constexpr (std::is_same_v<S, ConvexPolygon>) {
          json v = json::array();
          for (auto q : s.vertices) v.push_back(detail::pt(q));
          p = {{"vertices", v}};
        } else {
          p = {{"x0", s.x0}, {"x1", s.x1}, {"samples", s.samples},
               {"direction", s.upward ? "up" : "down"}, {"bound", s.bound}};
        }
      },
      d.shape());
  return {{"kind", std::string(to_string(d.kind()))}, {"params", p}, {"dimension", d.dimension()}};
}

// ---- data and families -------------------------------------------------------

inline BoundaryDatum datum_from_json(const json& j, const std::string& where = "datum") {
  using detail::number;
  const std::string kind = detail::text(j, "kind", where);
  BoundaryDatum g;
  if (kind == "constant") {
    g = BoundaryDatum::constant(number(j, "value", where));
  } else if (kind == "linear") {
    g = BoundaryDatum::linear(detail::number_or(j, "value", 0.0, where), detail::point(j, "gradient", where));
  } else if (kind == "power") {
    g = BoundaryDatum::power(detail::point(j, "anchor", where), number(j, "exponent", where),
                             detail::number_or(j, "scale", 1.0, where));
  } else if (kind == "table") {
    const std::string axis = detail::text(j, "axis", where);
    const auto ax = detail::parse_enum<TableAxis>(
        axis, {{"x", TableAxis::x}, {"y", TableAxis::y}, {"angle", TableAxis::angle}}, where + ".axis");
    const json& r = detail::field(j, "range", where);
    if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
      detail::bad(where + ".range", "expected [lo, hi]");
    const json& v = detail::field(j, "values", where);
    if (!v.is_array()) detail::bad(where + ".values", "expected an array of numbers");
    std::vector<double> s;
    for (const auto& x : v) {
      if (!x.is_number()) detail::bad(where + ".values", "expected an array of numbers");
      s.push_back(x.get<double>());
    }
    g = BoundaryDatum::table(ax, r[0].get<double>(), r[1].get<double>(), std::move(s),
                             detail::point_or(j, "origin", {}, where));
  } else if (kind == "step") {
    g = BoundaryDatum::step(detail::point(j, "normal", where), number(j, "offset", where), number(j, "inside", where),
                            number(j, "outside", where));
  } else if (kind == "radial-step") {
    g = BoundaryDatum::radial_step(detail::point(j, "center", where), number(j, "radius", where),
                                   number(j, "inside", where), number(j, "outside", where));
  } else {
    detail::bad(where + ".kind", "unknown datum kind '" + kind + "'");
  }
  g.multiplier = detail::number_or(j, "multiplier", 1.0, where);
  g.shift = detail::number_or(j, "shift", 0.0, where);
  try {
    g.validate();
  } catch (const ValidationError& e) {
    detail::rethrow_at(e, "datum", where);
  }
  return g;
}

inline json to_json(const BoundaryDatum& g) {
  json j{{"kind", std::string(to_string(g.kind))}};
  switch (g.kind) {
    case DatumKind::constant: j["value"] = g.value; break;
    case DatumKind::linear:
      j["value"] = g.value;
      j["gradient"] = detail::pt(g.gradient);
      break;
    case DatumKind::power:
      j["anchor"] = detail::pt(g.anchor);
      j["exponent"] = g.exponent;
      j["scale"] = g.scale;
      break;
    case DatumKind::table:
      j["axis"] = g.axis == TableAxis::x ? "x" : g.axis == TableAxis::y ? "y" : "angle";
      j["range"] = {g.lo, g.hi};
      j["values"] = g.samples;
      j["origin"] = detail::pt(g.center);
      break;
    case DatumKind::step:
      j["normal"] = detail::pt(g.normal);
      j["offset"] = g.offset;
      j["inside"] = g.inside;
      j["outside"] = g.outside;
      break;
    case DatumKind::radial_step:
      j["center"] = detail::pt(g.center);
      j["radius"] = g.radius;
      j["inside"] = g.inside;
      j["outside"] = g.outside;
      break;
  }
  if (g.multiplier != 1.0) j["multiplier"] = g.multiplier;
  if (g.shift != 0.0) j["shift"] = g.shift;
  return j;
}

inline DatumFamily family_from_json(const json& j, const std::string& where = "family") {
  DatumFamily f;
  f.kind = detail::parse_enum<FamilyKind>(detail::text(j, "kind", where),
                                          {{"additive-shift", FamilyKind::additive_shift},
                                           {"scaling", FamilyKind::scaling},
                                           {"vertical-translation", FamilyKind::vertical_translation}},
                                          where + ".kind");
  f.base = datum_from_json(detail::field(j, "base", where), where + ".base");
  f.rate = detail::number_or(j, "rate", 1.0, where);
  if (j.contains("bound")) f.bound = detail::number(j, "bound", where);
  try {
    f.validate();
  } catch (const ValidationError& e) {
    if (std::string(e.what()).rfind("datum: ", 0) == 0) detail::rethrow_at(e, "datum", where + ".base");
    detail::rethrow_at(e, "family", where);
  }
  return f;
}

inline json to_json(const DatumFamily& f) {
  json j{{"kind", std::string(to_string(f.kind))}, {"base", to_json(f.base)}, {"rate", f.rate}};
  if (std::isfinite(f.bound)) j["bound"] = f.bound;
  return j;
}

// ---- solver ----------------------------------------------------------------

inline SolveOptions solve_options_from_json(const json& j, SolveOptions o = {}, const std::string& where = "solver") {
  if (!j.is_object()) detail::bad(where, "expected an object");
  o.lambda = detail::number_or(j, "lambda", o.lambda, where);
  o.tolerance = detail::number_or(j, "tolerance", o.tolerance, where);
  if (j.contains("max_sweeps")) {
    const json& v = j["max_sweeps"];
    if (!v.is_number_integer()) detail::bad(where + ".max_sweeps", "expected an integer");
    o.max_sweeps = v.get<int>();
  }
  if (j.contains("init"))
    o.init = detail::parse_enum<Initialization>(detail::text(j, "init", where),
                                                {{"zero", Initialization::zero},
                                                 {"datum-sup", Initialization::datum_sup},
                                                 {"harmonic", Initialization::harmonic}},
                                                where + ".init");
  if (j.contains("traversal"))
    o.traversal = detail::parse_enum<Traversal>(
        detail::text(j, "traversal", where),
        {{"lexicographic", Traversal::lexicographic}, {"red-black", Traversal::red_black}}, where + ".traversal");
  for (auto [key, dst] : {std::pair{"accelerate", &o.accelerate}, std::pair{"refine_front", &o.refine_front}}) {
    if (!j.contains(key)) continue;
    if (!j[key].is_boolean()) detail::bad(where + "." + key, "expected true|false");
    *dst = j[key].get<bool>();
  }
  o.select_tol = detail::number_or(j, "select_tol", o.select_tol, where);
  try {
    o.validate();
  } catch (const ValidationError& e) {
    detail::rethrow_at(e, "solver", where);
  }
  return o;
}

inline json to_json(const SolveOptions& o) {
  return {{"lambda", o.lambda},
          {"max_sweeps", o.max_sweeps},
          {"tolerance", o.tolerance},
          {"init", std::string(to_string(o.init))},
          {"traversal", std::string(to_string(o.traversal))},
          {"accelerate", o.accelerate},
          {"refine_front", o.refine_front},
          {"select_tol", o.select_tol}};
}

inline json to_json(const SolveReport& r) {
  return {{"energy", r.energy},
          {"sweeps", r.sweeps},
          {"residual", r.residual},
          {"positivity_measure", r.positivity_measure},
          {"converged", r.converged},
          {"mode", std::string(to_string(r.mode))}};
}

inline json to_json(const PiecewiseLinear1D& p) {
  return {{"structure", std::string(to_string(p.structure))},
          {"breakpoints", p.breakpoints()},
          {"L", p.length},
          {"a", p.a},
          {"b", p.b},
          {"lambda", p.lambda},
          {"energy", p.energy}};
}

inline json to_json(const CheckReport& r) {
  json params = json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  return {{"name", r.name}, {"pass", r.pass}, {"violation", r.violation}, {"params", params}};
}

inline json to_json(const JumpSet& js, double gap_tol, double energy_tol) {
  json iv = json::array();
  for (const auto& i : js.intervals)
    iv.push_back({{"lo", i.lo}, {"hi", i.hi}, {"t_first", i.t_first}, {"t_last", i.t_last}, {"rows", i.rows}});
  return {{"gap_tol", gap_tol}, {"energy_tol", energy_tol}, {"intervals", iv}, {"total_measure", js.total_measure}};
}

inline json to_json(const acceptance::Result& r) {
  json m = json::object();
  for (const auto& [k, v] : r.measured) m[k] = v;
  json j{{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"errored", r.errored}, {"measured", m},
         {"runtime_s", r.runtime_s}, {"runtime_limit_s", r.runtime_limit_s}};
  if (!r.error.empty()) j["error"] = r.error;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

// ---- output directory ------------------------------------------------------------

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw InternalError("sha256: digest failed");
  std::ostringstream os;
  for (unsigned int k = 0; k < len; ++k) os << std::hex << std::setw(2) << std::setfill('0') << int(md[k]);
  return os.str();
}

/// Single writer for one output directory; records every file for the manifest.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw ConfigurationError("out: cannot create directory '" + dir_.string() + "': " + ec.message());
  }

  void write(const std::string& name, const std::string& content) {
    std::ofstream os(dir_ / name, std::ios::binary);
    if (!os) throw ConfigurationError("out: cannot write '" + (dir_ / name).string() + "'");
    os << content;
    os.close();
    if (!os) throw ConfigurationError("out: write failed for '" + (dir_ / name).string() + "'");
    files_.push_back({name, sha256_hex(content), content.size()});
  }

  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

  /// manifest.json: every file written so far with its SHA-256.
  void finish(const json& extra = json::object()) {
    json files = json::array();
    for (const auto& f : files_) files.push_back({{"path", f.name}, {"sha256", f.hash}, {"bytes", f.bytes}});
    json m = extra;
    m["files"] = files;
    std::ofstream os(dir_ / "manifest.json", std::ios::binary);
    os << m.dump(2) << "\n";
    if (!os) throw ConfigurationError("out: cannot write manifest");
  }

  [[nodiscard]] const std::filesystem::path& path() const { return dir_; }

 private:
  struct File {
    std::string name, hash;
    std::size_t bytes;
  };
  std::filesystem::path dir_;
  std::vector<File> files_;
};

}  // namespace bernoulli::io
