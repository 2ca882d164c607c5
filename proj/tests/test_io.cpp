#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "asymlab/functionals.hpp"
#include "asymlab/io.hpp"
#include "asymlab/limits.hpp"
#include "asymlab/profile.hpp"

using namespace asymlab;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::MessageMatches;
using nlohmann::json;

namespace {

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string line;
  while (std::getline(is, line)) out.push_back(line);
  return out;
}

std::string temp_path(const std::string& tag) {
  return "asymlab_io_test_" + tag + ".tmp";
}

} // namespace

TEST_CASE("fmt17 round-trips doubles bit-exactly") {
  const double cases[] = {1.0 / 3.0,  0.1,       1e300, 5e-324,
                          -2.5e-7,    12345.678, 0.0,   -0.0,
                          6.02214076e23};
  for (double v : cases) {
    CAPTURE(v);
    const std::string s = fmt17(v);
    // strtod, not stod: stod throws out_of_range on the ERANGE that strtod
    // sets for subnormals like 5e-324, even though the parse is exact.
    const double back = std::strtod(s.c_str(), nullptr);
    CHECK(back == v);
    CHECK(std::signbit(back) == std::signbit(v));
  }
  CHECK(fmt17(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("endpoint documents map levels to arguments") {
  EndpointDoc e0{0, 7.0, false};
  CHECK(e0.to_scalar().to_double() == Catch::Approx(7.0).epsilon(1e-15));

  EndpointDoc e1{1, 3.0, false};
  CHECK(e1.to_scalar().log_magnitude() == 3.0);

  EndpointDoc e2{2, 2.0, false};
  CHECK(e2.to_scalar().log_magnitude() == std::exp(2.0));

  EndpointDoc einf{0, 0.0, true};
  CHECK(einf.to_scalar().is_infinite());

  EndpointDoc bad{3, 1.0, false};
  CHECK_THROWS_AS(bad.to_scalar(), FormatError);
}

TEST_CASE("profile documents parse and re-serialize stably") {
  const char* text = R"({
    "name": "two-step",
    "segments": [
      {"kind": "constant", "c": 2.0,
       "from": {"level": 0, "value": 0.0},
       "to": {"level": 0, "value": 1.0}},
      {"kind": "power", "c": 2.0, "alpha": 1.0,
       "from": {"level": 0, "value": 1.0},
       "to": "inf"}
    ]
  })";
  const ProfileDoc doc = profile_doc_from_json(json::parse(text));
  CHECK(doc.name == "two-step");
  CHECK(doc.generator == "none");
  REQUIRE(doc.segments.size() == 2);
  CHECK(doc.segments[0].kind == "constant");
  CHECK(doc.segments[0].c == 2.0);
  CHECK(doc.segments[1].kind == "power");
  CHECK(doc.segments[1].alpha == 1.0);
  CHECK(doc.segments[1].to.inf);

  // Serialization is a fixed point: dump -> parse -> dump reproduces itself.
  const auto j1 = profile_doc_to_json(doc);
  const auto j2 = profile_doc_to_json(profile_doc_from_json(json::parse(j1.dump())));
  CHECK(j1.dump(2) == j2.dump(2));
  CHECK(j1["segments"][1]["to"] == "inf");
  CHECK(j1["segments"][0].contains("alpha") == false);

  const PiecewiseProfile p = profile_from_doc(doc);
  CHECK(p.segment_count() == 2);
  CHECK(!p.is_generated());
  CHECK(p.evaluate(LogScalar::from_value(0.5)).to_double() ==
        Catch::Approx(2.0).epsilon(1e-15));
  CHECK(p.evaluate(LogScalar::from_value(4.0)).to_double() ==
        Catch::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("generated profile documents defer to the builders") {
  json j;
  j["name"] = "whatever";
  j["generator"] = "counterexample";
  const PiecewiseProfile pc = profile_from_doc(profile_doc_from_json(j));
  CHECK(pc.is_generated());

  j["generator"] = "spike";
  const PiecewiseProfile ps = profile_from_doc(profile_doc_from_json(j));
  CHECK(ps.is_generated());
  // The two generators disagree already on the first block.
  CHECK(pc.evaluate(LogScalar::from_value(2.0)).to_double() !=
        ps.evaluate(LogScalar::from_value(2.0)).to_double());

  j["segments"] = json::array({json::object({{"kind", "constant"}})});
  CHECK_THROWS_MATCHES(profile_doc_from_json(j), FormatError,
                       MessageMatches(ContainsSubstring("no explicit segments")));
}

TEST_CASE("profile parse errors carry a document path") {
  auto expect_error = [](const json& j, const std::string& fragment) {
    CHECK_THROWS_MATCHES(profile_doc_from_json(j), FormatError,
                         MessageMatches(ContainsSubstring(fragment)));
  };

  expect_error(json::array(), "profile: expected an object");
  expect_error(json::object(), "profile.name");

  json base;
  base["name"] = "x";

  {
    json j = base;
    j["generator"] = "fractal";
    expect_error(j, "unknown generator 'fractal'");
  }
  {
    json j = base;
    expect_error(j, "profile.segments: expected a non-empty array");
  }
  {
    json j = base;
    j["segments"] = json::array({json::object({{"kind", "ramp"}, {"c", 1.0}})});
    expect_error(j, "profile.segments[0].kind");
  }
  {
    json j = base;
    j["segments"] = json::array({json::object({{"kind", "constant"}})});
    expect_error(j, "profile.segments[0].c: expected a number");
  }
  {
    json j = base;
    j["segments"] =
        json::array({json::object({{"kind", "constant"}, {"c", -1.0}})});
    expect_error(j, "profile.segments[0].c: must be positive");
  }
  {
    json j = base;
    j["segments"] =
        json::array({json::object({{"kind", "power"}, {"c", 1.0}})});
    expect_error(j, "profile.segments[0].alpha");
  }
  {
    json j = base;
    j["segments"] = json::array(
        {json::object({{"kind", "constant"}, {"c", 1.0}})});
    j["segments"][0]["to"] = "inf";
    expect_error(j, "profile.segments[0].from: missing");
  }
  {
    json j = base;
    j["segments"] = json::array(
        {json::object({{"kind", "constant"}, {"c", 1.0}})});
    j["segments"][0]["from"] = "oo";
    expect_error(j, "only the string \"inf\"");
  }
  {
    json j = base;
    j["segments"] = json::array(
        {json::object({{"kind", "constant"}, {"c", 1.0}})});
    j["segments"][0]["from"] = "inf";
    j["segments"][0]["to"] = "inf";
    expect_error(j, "profile.segments[0].from: cannot be \"inf\"");
  }
  {
    json j = base;
    j["segments"] = json::array(
        {json::object({{"kind", "constant"}, {"c", 1.0}})});
    j["segments"][0]["from"] = json::object({{"level", 3}, {"value", 0.0}});
    expect_error(j, "from.level: must be 0, 1 or 2");
  }
  {
    json j = base;
    j["segments"] = json::array(
        {json::object({{"kind", "constant"}, {"c", 1.0}})});
    j["segments"][0]["from"] =
        json::object({{"level", 1},
                      {"value", std::numeric_limits<double>::infinity()}});
    expect_error(j, "from.value: must be finite");
  }

  // Structurally valid documents with a broken shape fail profile validation,
  // not parsing.
  json j = base;
  j["segments"] = json::array();
  j["segments"].push_back(json::object(
      {{"kind", "constant"},
       {"c", 1.0},
       {"from", json::object({{"level", 0}, {"value", 0.0}})},
       {"to", json::object({{"level", 0}, {"value", 1.0}})}}));
  j["segments"].push_back(json::object(
      {{"kind", "constant"},
       {"c", 1.0},
       {"from", json::object({{"level", 0}, {"value", 2.0}})},
       {"to", json::object({{"level", 0}, {"value", 3.0}})}}));
  CHECK_THROWS_AS(profile_from_doc(profile_doc_from_json(j)),
                  std::invalid_argument);
}

TEST_CASE("model documents build all three model kinds") {
  {
    json j;
    j["kind"] = "power_cutoff";
    j["a"] = 1.5;
    j["p"] = 2.0;
    const HeatTraceModel m = model_from_json(j);
    CHECK(m.spectral_p() == 2.0);
    CHECK(m.eval(LogScalar::one()).to_double() ==
          Catch::Approx(1.5).epsilon(1e-15));
  }
  {
    json j;
    j["kind"] = "gasket";
    j["a"] = 1.0;
    j["b"] = 0.05;
    j["c"] = 0.0;
    const HeatTraceModel m = model_from_json(j);
    CHECK(m.spectral_p() ==
          Catch::Approx(2.0 * std::log(3.0) / std::log(5.0)).epsilon(1e-15));

    j["beta"] = 0.5;
    CHECK(model_from_json(j).spectral_p() == Catch::Approx(1.0).epsilon(1e-15));
  }
  {
    json j;
    j["kind"] = "from_profile";
    j["q"] = 2.0;
    j["profile"] = json::object(
        {{"name", "tail"},
         {"segments",
          json::array(
              {json::object(
                   {{"kind", "constant"},
                    {"c", 1.0},
                    {"from", json::object({{"level", 0}, {"value", 0.0}})},
                    {"to", json::object({{"level", 0}, {"value", 1.0}})}}),
               json::object(
                   {{"kind", "power"},
                    {"c", 1.0},
                    {"alpha", 1.0},
                    {"from", json::object({{"level", 0}, {"value", 1.0}})},
                    {"to", "inf"}})})}});
    const HeatTraceModel m = model_from_json(j);
    CHECK(m.spectral_p() == Catch::Approx(1.0).epsilon(1e-15));
  }

  auto expect_error = [](const json& j, const std::string& fragment) {
    CHECK_THROWS_MATCHES(model_from_json(j), FormatError,
                         MessageMatches(ContainsSubstring(fragment)));
  };
  expect_error(json::array(), "model: expected an object");
  expect_error(json::object({{"kind", "laplacian"}}), "unknown kind 'laplacian'");
  expect_error(json::object({{"kind", "power_cutoff"}, {"a", 1.0}}), "model.p");
  expect_error(json::object({{"kind", "gasket"}, {"a", 1.0}}), "model.b");
  expect_error(json::object({{"kind", "from_profile"}, {"q", 1.0}}),
               "model.profile: missing");
}

TEST_CASE("documents load from files with location-bearing errors") {
  const std::string good = temp_path("good_profile");
  write_text_file(good, R"({"name":"g","generator":"spike"})");
  const ProfileDoc doc = load_profile_doc(good);
  CHECK(doc.generator == "spike");

  const std::string bad = temp_path("bad_profile");
  write_text_file(bad, "{name: nope");
  CHECK_THROWS_MATCHES(load_profile_doc(bad), FormatError,
                       MessageMatches(ContainsSubstring(bad)));

  CHECK_THROWS_MATCHES(load_profile_doc("no_such_dir/missing.json"), FormatError,
                       MessageMatches(ContainsSubstring("cannot open")));
  CHECK_THROWS_MATCHES(load_model("no_such_dir/missing.json"), FormatError,
                       MessageMatches(ContainsSubstring("cannot open")));

  const std::string model = temp_path("good_model");
  write_text_file(model, R"({"kind":"power_cutoff","a":1.0,"p":3.0})");
  CHECK(load_model(model).spectral_p() == 3.0);

  std::remove(good.c_str());
  std::remove(bad.c_str());
  std::remove(model.c_str());
}

TEST_CASE("sampled CSV carries provenance and full-precision rows") {
  SampledFunction f = sampled_on(GridSpec{1, 0.0, 1.0, 2}, "demo");
  REQUIRE(f.size() == 3);
  f.values[0] = 1.0 / 3.0;
  f.values[1] = -2.0;
  f.values[2] = 0.0;

  std::ostringstream os;
  write_sampled_csv(os, f, "asymlab functionals --profile canonical");
  const auto lines = split_lines(os.str());
  REQUIRE(lines.size() == 8);
  CHECK(lines[0] == "# asymlab 1.0.0");
  CHECK(lines[1] == "# command: asymlab functionals --profile canonical");
  CHECK(lines[2] == "# label: demo");
  CHECK_THAT(lines[3], ContainsSubstring("# grid: level=1"));
  CHECK(lines[4] == "grid_level,x,argument_log_magnitude,value");
  CHECK_THAT(lines[5], ContainsSubstring("1,0,0,"));

  // The value column must reproduce the double exactly.
  const std::string& row = lines[5];
  const double back = std::stod(row.substr(row.rfind(',') + 1));
  CHECK(back == 1.0 / 3.0);

  // quad_error appears only when the producer supplied one.
  CHECK_THAT(os.str(), !ContainsSubstring("quad_error"));
  f.quad_error = 0.5;
  std::ostringstream os2;
  write_sampled_csv(os2, f, "");
  CHECK_THAT(os2.str(), ContainsSubstring("# quad_error: 0.5"));
}

TEST_CASE("grid descriptions name level, range and refinements") {
  GridSpec g{2, 0.0, 8.0, 16, {1.0, 2.0}};
  const std::string d = grid_description(g);
  CHECK_THAT(d, ContainsSubstring("level=2"));
  CHECK_THAT(d, ContainsSubstring("x=[0,8]"));
  CHECK_THAT(d, ContainsSubstring("ppu=16"));
  CHECK_THAT(d, ContainsSubstring("refine=1;2"));
  CHECK_THAT(grid_description(GridSpec{1, 0.0, 4.0, 8}),
             !ContainsSubstring("refine"));
}

TEST_CASE("scenario CSV lists one row per check") {
  ScenarioResult r;
  r.name = "demo-scenario";
  r.rows.push_back(row_near("value", 1.0, 1.0005, 1e-2));
  r.rows.push_back(row_flag("divergent", true, false));
  r.finish();
  CHECK(!r.pass);

  std::ostringstream os;
  write_scenario_csv(os, r, "asymlab counterexample");
  const auto lines = split_lines(os.str());
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "# asymlab 1.0.0");
  CHECK(lines[1] == "# command: asymlab counterexample");
  CHECK(lines[2] == "# scenario: demo-scenario");
  CHECK(lines[3] == "label,kind,expected,computed,tolerance,pass");
  CHECK(lines[4].substr(0, 11) == "value,near,");
  CHECK(lines[4].back() == '1');

  std::ostringstream os2;
  write_scenario_csv(os2, r, "");
  CHECK_THAT(os2.str(), ContainsSubstring("divergent,flag,1,0,0,0"));
}

TEST_CASE("zeta CSV records divergences alongside finite points") {
  std::vector<ZetaPoint> pts(2);
  pts[0].s = 1e-3;
  pts[0].divergent = false;
  pts[0].s_tau = 0.25;
  pts[0].tau_log = 2.5;
  pts[1].s = 0.0;
  pts[1].divergent = true;

  std::ostringstream os;
  write_zeta_csv(os, pts, "asymlab functionals");
  const auto lines = split_lines(os.str());
  REQUIRE(lines.size() == 5);
  CHECK(lines[2] == "s,divergent,s_tau,tau_log");
  CHECK(lines[3] == "0.001,0,0.25,2.5");
  CHECK(lines[4].substr(0, 4) == "0,1,");
}

TEST_CASE("report JSON shapes are stable") {
  {
    SampledFunction f = sampled_on(GridSpec{1, 0.0, 40.0, 8}, "probe");
    for (std::size_t i = 0; i < f.size(); ++i)
      f.values[i] = 2.0 + std::exp(-f.xs[i]);
    const auto j = limit_to_json(estimate_limit(f));
    CHECK(j["class"] == "converged");
    CHECK(j["value"].get<double>() == Catch::Approx(2.0).margin(1e-6));
    CHECK(j.contains("tail_oscillation"));
    CHECK(j.contains("window_points"));
  }
  {
    Membership m;
    m.weak_l1 = true;
    m.weak_l1_sup = 1.0;
    m.m1_inf = true;
    m.m1_inf_sup = 0.9;
    m.little_o = false;
    const auto j = membership_to_json(m);
    CHECK(j["weak_l1"] == true);
    CHECK(j["little_o"] == false);
    CHECK(j["m1_inf_sup"] == 0.9);
  }
  {
    MeasurabilityReport r;
    r.q = 2.0;
    r.agree = false;
    r.notes = "routes disagree";
    const auto j = measurability_to_json(r);
    CHECK(j["q"] == 2.0);
    CHECK(j["agree"] == false);
    CHECK(j["notes"] == "routes disagree");
    CHECK(j["avg_limit"].contains("class"));
    CHECK(j["mheat_limit"].contains("liminf"));
  }
  {
    ScenarioResult r;
    r.name = "shape";
    r.rows.push_back(row_at_most("bounded", 2.0, 1.5, "stays small"));
    r.finish();
    const auto j = scenario_to_json(r);
    CHECK(j["scenario"] == "shape");
    CHECK(j["pass"] == true);
    REQUIRE(j["rows"].size() == 1);
    CHECK(j["rows"][0]["kind"] == "at_most");
    CHECK(j["rows"][0]["note"] == "stays small");
  }
  {
    ScenarioResult r;
    r.name = "no-note";
    r.rows.push_back(row_flag("ok", true, true));
    r.finish();
    const auto j = scenario_to_json(r);
    CHECK(!j["rows"][0].contains("note"));
  }
}

TEST_CASE("row kind names cover every kind") {
  CHECK(std::string(row_kind_name(ScenarioRow::Kind::Near)) == "near");
  CHECK(std::string(row_kind_name(ScenarioRow::Kind::AtMost)) == "at_most");
  CHECK(std::string(row_kind_name(ScenarioRow::Kind::AtLeast)) == "at_least");
  CHECK(std::string(row_kind_name(ScenarioRow::Kind::Flag)) == "flag");
}
