#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "bernoulli/io.hpp"

using namespace bernoulli;
using io::json;

namespace {

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("bernoulli_io_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST(DomainJson, RoundTripsEveryKind) {
  const std::vector<DomainSpec> specs{
      DomainSpec(Interval{0, 2}),
      DomainSpec(Rectangle{0, 1, -1, 1}),
      DomainSpec(Disk{{0.5, 0}, 1.5}),
      DomainSpec(Annulus{{0, 0}, 1, 2}),
      DomainSpec(ConvexPolygon{{{0, 0}, {1, 0}, {0, 1}}}),
      DomainSpec(LipschitzGraph{0, 1, {0.0, 0.2, 0.1}, false, -1.0}),
  };
  for (const auto& d : specs) {
    const json j = io::to_json(d);
    const DomainSpec back = io::domain_from_json(j);
    EXPECT_EQ(io::to_json(back), j) << j.dump();
    EXPECT_EQ(back.kind(), d.kind());
    EXPECT_DOUBLE_EQ(back.measure(), d.measure());
  }
}

TEST(DomainJson, ErrorsNameTheField) {
  EXPECT_EQ(error_of([] { io::domain_from_json(json::object()); }), "domain.kind: missing");
  EXPECT_EQ(error_of([] { io::domain_from_json(json::parse(R"({"kind":"disk","params":{"center":[0,0]}})")); }),
            "domain.params.radius: missing");
  EXPECT_NE(error_of([] { io::domain_from_json(json::parse(R"({"kind":"blob","params":{}})")); }).find("domain.kind"),
            std::string::npos);
  EXPECT_EQ(error_of([] {
              io::domain_from_json(json::parse(R"({"kind":"interval","params":{"a":0,"b":1},"dimension":2})"));
            }),
            "domain.dimension: does not match the domain kind");
  const auto msg = error_of([] { io::domain_from_json(json::parse(R"({"kind":"disk","params":{"center":[0,0],"radius":-1}})")); });
  EXPECT_EQ(msg.rfind("domain: ", 0), 0u) << msg;
  EXPECT_NE(msg.find("radius"), std::string::npos);
}

TEST(DatumJson, RoundTripsEveryKind) {
  std::vector<BoundaryDatum> data{
      BoundaryDatum::constant(0.3),
      BoundaryDatum::linear(2.0, {1.0, -0.5}),
      BoundaryDatum::power({1, 0}, 0.75, 2.0),
      BoundaryDatum::table(TableAxis::angle, 0.0, 6.0, {0.0, 1.0, 0.5}, {0.1, 0.2}),
      BoundaryDatum::step({0, 1}, 0.5, 2.0, 0.0),
      BoundaryDatum::radial_step({0, 0}, 1.5, 1.0, 0.0),
  };
  data[1].multiplier = 2.0;
  data[2].shift = 0.25;
  for (const auto& g : data) {
    const json j = io::to_json(g);
    const BoundaryDatum back = io::datum_from_json(j);
    EXPECT_EQ(io::to_json(back), j) << j.dump();
    for (Point p : {Point{0.3, 0.4}, Point{1.0, 0.0}, Point{-0.7, 0.2}}) EXPECT_EQ(eval_datum(back, p), eval_datum(g, p));
  }
}

TEST(DatumJson, ErrorsNameTheField) {
  EXPECT_EQ(error_of([] { io::datum_from_json(json::parse(R"({"kind":"constant"})")); }), "datum.value: missing");
  EXPECT_NE(error_of([] { io::datum_from_json(json::parse(R"({"kind":"table","axis":"z","range":[0,1],"values":[0,1]})")); })
                .find("datum.axis"),
            std::string::npos);
  EXPECT_EQ(error_of([] { io::datum_from_json(json::parse(R"({"kind":"power","exponent":0.5})"), "family.base"); }),
            "family.base.anchor: missing");
}

TEST(FamilyJson, RoundTripAndValidation) {
  const DatumFamily f{.base = BoundaryDatum::constant(0.0), .kind = FamilyKind::vertical_translation, .rate = 2.0,
                      .bound = 5.0};
  const json j = io::to_json(f);
  const DatumFamily back = io::family_from_json(j);
  EXPECT_EQ(io::to_json(back), j);
  EXPECT_EQ(back.kind, FamilyKind::vertical_translation);
  EXPECT_DOUBLE_EQ(back.rate, 2.0);
  EXPECT_THROW(io::family_from_json(json::parse(R"({"kind":"vertical-translation","rate":0.5,"base":{"kind":"constant","value":0}})")),
               ValidationError);
}

TEST(SolveOptionsJson, ParsesKnownKeysAndRejectsBadValues) {
  const auto o = io::solve_options_from_json(
      json::parse(R"({"lambda":2,"tolerance":1e-9,"max_sweeps":50,"init":"zero","traversal":"lexicographic",
                      "accelerate":false,"refine_front":true,"select_tol":0.01})"));
  EXPECT_EQ(o.lambda, 2.0);
  EXPECT_EQ(o.tolerance, 1e-9);
  EXPECT_EQ(o.max_sweeps, 50);
  EXPECT_EQ(o.init, Initialization::zero);
  EXPECT_EQ(o.traversal, Traversal::lexicographic);
  EXPECT_FALSE(o.accelerate);
  EXPECT_TRUE(o.refine_front);
  EXPECT_EQ(o.select_tol, 0.01);
  EXPECT_EQ(io::solve_options_from_json(io::to_json(o)).max_sweeps, 50);
  EXPECT_NE(error_of([] { io::solve_options_from_json(json::parse(R"({"init":"random"})")); }).find("solver.init"),
            std::string::npos);
  EXPECT_THROW(io::solve_options_from_json(json::parse(R"({"lambda":0})")), ValidationError);
}

TEST(ReportJson, KeySets) {
  SolveReport r;
  r.energy = 1.5;
  r.converged = true;
  const json j = io::to_json(r);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"energy", "sweeps", "residual", "positivity_measure", "converged", "mode"}));

  CheckReport c{.name = "comparison", .pass = true, .violation = 0.0, .params = {{"tol", 1e-8}}};
  const json cj = io::to_json(c);
  EXPECT_EQ(cj["name"], "comparison");
  EXPECT_EQ(cj["pass"], true);
  EXPECT_EQ(cj["params"]["tol"], 1e-8);
}

TEST(LoadJsonArg, InlineFileAndErrors) {
  EXPECT_EQ(io::load_json_arg(R"( {"a":1})", "x")["a"], 1);
  const auto dir = scratch("load");
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "c.json") << R"({"b":[1,2]})";
  EXPECT_EQ(io::load_json_arg((dir / "c.json").string(), "x")["b"][1], 2);
  EXPECT_NE(error_of([&] { io::load_json_arg((dir / "none.json").string(), "config"); }).find("config: cannot read"),
            std::string::npos);
  EXPECT_NE(error_of([] { io::load_json_arg("{oops", "config"); }).find("config: invalid JSON"), std::string::npos);
}

TEST(Sha256, KnownDigests) {
  EXPECT_EQ(io::sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(io::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(OutputDir, ManifestListsEveryFileWithHash) {
  const auto dir = scratch("out");
  {
    io::OutputDir out(dir / "nested");
    out.write("a.csv", "x\n1\n");
    out.write_json("b.json", json{{"k", 1}});
    out.finish({{"command", "test"}});
  }
  std::ifstream in(dir / "nested" / "manifest.json");
  const json m = json::parse(in);
  EXPECT_EQ(m["command"], "test");
  ASSERT_EQ(m["files"].size(), 2u);
  EXPECT_EQ(m["files"][0]["path"], "a.csv");
  EXPECT_EQ(m["files"][0]["sha256"], io::sha256_hex("x\n1\n"));
  EXPECT_EQ(m["files"][0]["bytes"], 4);
  EXPECT_EQ(m["files"][1]["path"], "b.json");
}

TEST(OutputDir, UnwritableLocationIsConfigurationError) {
  const auto file = scratch("blocker");
  std::ofstream(file) << "x";
  EXPECT_THROW(io::OutputDir(file / "sub"), ConfigurationError);
}
