// Command-line front end: loads profile/model documents, runs the requested
// computation, and writes CSV or JSON artifacts with a provenance header.
//
// Exit codes: 0 on success (for scenario verbs: every row passed), 1 when a
// scenario ran but failed a row, 2 on usage or input errors.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "asymlab/functionals.hpp"
#include "asymlab/io.hpp"
#include "asymlab/limits.hpp"
#include "asymlab/mellin.hpp"
#include "asymlab/profile.hpp"
#include "asymlab/scenarios.hpp"
#include "asymlab/version.hpp"

namespace {

using namespace asymlab;

struct Options {
  std::string profile;
  std::vector<std::string> pair;
  std::string model;
  double q = 1.0;
  double p = 2.0;
  double tol = 1e-3;
  std::string grid;
  int nmax = 30;
  std::string out;
  std::string format = "csv";
  bool verbose = false;
};

std::string joined_command(int argc, char** argv) {
  std::ostringstream os;
  for (int i = 0; i < argc; ++i) os << (i ? " " : "") << argv[i];
  return os.str();
}

void progress(const Options& o, const std::string& msg) {
  if (o.verbose) std::cout << msg << "\n";
}

//! --grid LEVEL:XMIN:XMAX:PPU.  Anything that does not parse exactly is a
//! usage error, reported before any computation starts.
GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  int level = 0, ppu = 0;
  double x_min = 0.0, x_max = 0.0;
  char trailing = 0;
  const int got = std::sscanf(text.c_str(), "%d:%lf:%lf:%d%c", &level, &x_min,
                              &x_max, &ppu, &trailing);
  if (got != 4)
    throw FormatError("--grid expects LEVEL:XMIN:XMAX:PPU, got '" + text + "'");
  g.level = level;
  g.x_min = x_min;
  g.x_max = x_max;
  g.points_per_unit = ppu;
  validate(g);
  return g;
}

//! --profile accepts a file path or one of the built-in names.
PiecewiseProfile resolve_profile(const std::string& ref) {
  if (ref.empty())
    throw FormatError("this verb needs --profile (path or built-in name)");
  if (ref == "canonical") return make_canonical();
  if (ref == "counterexample") return make_counterexample();
  if (ref == "spike") return make_spike();
  return profile_from_doc(load_profile_doc(ref));
}

HeatTraceModel resolve_model(const std::string& ref) {
  if (ref.empty()) throw FormatError("this verb needs --model PATH");
  return load_model(ref);
}

void write_artifact(const Options& o, const std::string& content) {
  if (o.out.empty()) return;
  write_text_file(o.out, content);
}

//! Scenario runners share their reporting: verdict to stderr, artifact to
//! --out, exit status from the row conjunction.
int finish_scenario(const Options& o, const std::string& command,
                    const ScenarioResult& res) {
  std::ostringstream artifact;
  if (o.format == "json") {
    auto j = scenario_to_json(res);
    j["command"] = command;
    j["version"] = kVersion;
    artifact << j.dump(2) << "\n";
  } else {
    write_scenario_csv(artifact, res, command);
  }
  write_artifact(o, artifact.str());

  std::size_t failed = 0;
  for (const auto& r : res.rows)
    if (!r.pass) ++failed;
  std::cerr << "scenario " << res.name << ": " << (res.pass ? "PASS" : "FAIL")
            << " (" << res.rows.size() << " rows";
  if (failed) std::cerr << ", " << failed << " failed";
  std::cerr << ")\n";
  if (!res.pass) {
    for (const auto& r : res.rows)
      if (!r.pass)
        std::cerr << "  failed row " << r.label << ": expected "
                  << row_kind_name(r.kind) << " " << fmt17(r.expected)
                  << ", computed " << fmt17(r.computed) << "\n";
  }
  return res.pass ? 0 : 1;
}

int cmd_profile_validate(const Options& o, const std::string& command) {
  const bool builtin = o.profile == "canonical" ||
                       o.profile == "counterexample" || o.profile == "spike";
  if (builtin) {
    resolve_profile(o.profile);
    std::cerr << "profile " << o.profile << ": valid (built-in generator)\n";
    return 0;
  }
  const ProfileDoc doc = load_profile_doc(o.profile);
  const PiecewiseProfile p = profile_from_doc(doc);
  const auto n = p.segment_count();
  std::cerr << "profile " << doc.name << ": valid, "
            << (n ? std::to_string(*n) + " segment(s)"
                  : std::string("generated family"))
            << "\n";
  if (!o.out.empty()) {
    // Normalized re-serialization, with provenance alongside the document.
    nlohmann::ordered_json j = profile_doc_to_json(doc);
    j["command"] = command;
    j["version"] = kVersion;
    write_artifact(o, j.dump(2) + "\n");
  }
  return 0;
}

int cmd_functionals(const Options& o, const std::string& command) {
  const PiecewiseProfile p = resolve_profile(o.profile);
  const GridSpec grid = o.grid.empty() ? GridSpec{1, 0.0, 100.0, 8}
                                       : parse_grid(o.grid);
  progress(o, "classifying membership");
  const Membership m = classify_membership(p, grid);

  if (!m.m1_inf) {
    std::cerr << "profile " << p.name()
              << ": outside M_{1,inf} on this grid, no average computed\n";
    nlohmann::ordered_json j;
    j["command"] = command;
    j["version"] = kVersion;
    j["profile"] = p.name();
    j["membership"] = membership_to_json(m);
    write_artifact(o, j.dump(2) + "\n");
    return 0;
  }

  progress(o, "sampling Dixmier average");
  const SampledFunction avg = dixmier_average(p, grid);
  const LimitEstimate est = estimate_limit(avg, o.tol);

  std::ostringstream artifact;
  if (o.format == "json") {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["version"] = kVersion;
    j["profile"] = p.name();
    j["grid"] = grid_description(grid);
    j["membership"] = membership_to_json(m);
    j["average_limit"] = limit_to_json(est);
    artifact << j.dump(2) << "\n";
  } else {
    write_sampled_csv(artifact, avg, command);
  }
  write_artifact(o, artifact.str());
  std::cerr << "profile " << p.name() << ": average " << to_string(est.cls);
  if (est.cls == LimitClass::Converged)
    std::cerr << " to " << fmt17(est.value);
  std::cerr << "\n";
  return 0;
}

int cmd_measurability(const Options& o, const std::string& command) {
  const PiecewiseProfile p = resolve_profile(o.profile);
  MeasurabilityGrids grids;
  grids.avg = o.grid.empty() ? GridSpec{1, 0.0, 1000.0, 4} : parse_grid(o.grid);
  grids.heat = grids.avg;
  grids.zeta = GridSpec{1, 0.0, 32.0, 8};
  progress(o, "running the three limit routes");
  const MeasurabilityReport r = measurability_report(p, o.q, grids, o.tol);

  std::ostringstream artifact;
  if (o.format == "json") {
    auto j = measurability_to_json(r);
    j["command"] = command;
    j["version"] = kVersion;
    j["profile"] = p.name();
    artifact << j.dump(2) << "\n";
  } else {
    write_csv_header(artifact, command);
    artifact << "# profile: " << p.name() << "\n";
    artifact << "quantity,class,value\n";
    artifact << "dixmier_average," << to_string(r.avg_limit.cls) << ","
             << fmt17(r.avg_limit.value) << "\n";
    artifact << "averaged_heat_normalized," << to_string(r.mheat_limit.cls)
             << "," << fmt17(r.mheat_normalized) << "\n";
    artifact << "zeta_residue," << to_string(r.zeta_limit.cls) << ","
             << fmt17(r.zeta_limit.value) << "\n";
    artifact << "raw_heat," << to_string(r.raw_heat.cls) << ","
             << fmt17(r.raw_heat.value) << "\n";
    artifact << "agree,," << (r.agree ? 1 : 0) << "\n";
  }
  write_artifact(o, artifact.str());
  std::cerr << "profile " << p.name() << ": routes "
            << (r.agree ? "agree" : "disagree");
  if (r.agree) std::cerr << " at " << fmt17(r.common_value);
  std::cerr << "\n";
  return 0;
}

int cmd_counterexample(const Options& o, const std::string& command) {
  progress(o, "running counterexample scenario");
  return finish_scenario(o, command, run_counterexample(o.nmax));
}

int cmd_gamma_factor(const Options& o, const std::string& command,
                     bool q_given) {
  progress(o, "running gamma-factor scenario");
  std::vector<double> qs = {0.5, 1.0, 2.0, 3.0};
  if (q_given) qs = {o.q};
  return finish_scenario(o, command, run_gamma_factor(qs));
}

int cmd_p_case(const Options& o, const std::string& command) {
  const PiecewiseProfile p =
      o.profile.empty() ? make_canonical() : resolve_profile(o.profile);
  progress(o, "running p-case scenario");
  return finish_scenario(o, command, run_p_case(p, o.p));
}

int cmd_signed(const Options& o, const std::string& command) {
  if (o.pair.size() != 2)
    throw FormatError("--pair expects exactly two profile references");
  SignedPair pair{resolve_profile(o.pair[0]), resolve_profile(o.pair[1]),
                  o.pair[0] + "-minus-" + o.pair[1]};
  progress(o, "running signed scenario");
  return finish_scenario(o, command, run_signed(pair, o.q));
}

//! Envelope constant for zeta bound checks, derived from the model: the
//! smallest C with C^{-1} t^{-p/2} <= h <= C t^{-p/2} on (0,1], probed on
//! the same lattice the checker uses, padded so boundary cases pass.
double derive_envelope(const HeatTraceModel& m) {
  double hi = 1.0, lo = 1.0;
  for (int j = 0; j <= 80; ++j) {
    const double lt = -0.25 * j;
    const LogScalar t = LogScalar::from_log(lt);
    const double ratio =
        std::exp(log_of(m.eval(t)) + 0.5 * m.spectral_p() * lt);
    hi = std::max(hi, ratio);
    lo = std::min(lo, ratio);
  }
  return std::max(hi, 1.0 / lo) + 0.01;
}

int cmd_mellin(const Options& o, const std::string& command) {
  const HeatTraceModel m = resolve_model(o.model);
  const double C = derive_envelope(m);
  progress(o, "running mellin scenario with envelope C=" + fmt17(C));
  return finish_scenario(o, command, run_mellin_scenario(m, C));
}

int cmd_gasket(const Options& o, const std::string& command) {
  GasketParams params;
  if (!o.model.empty()) {
    const HeatTraceModel m = resolve_model(o.model);
    if (m.kind() != HeatTraceModel::Kind::Gasket)
      throw FormatError("gasket verb needs a gasket-kind model");
    params = m.gasket_params();
  }
  progress(o, "running gasket scenario");
  return finish_scenario(o, command, run_gasket_scenario(params));
}

int cmd_tauberian(const Options& o, const std::string& command) {
  progress(o, "running tauberian scenario");
  return finish_scenario(o, command, run_tauberian());
}

} // namespace

int main(int argc, char** argv) {
  const std::string command = joined_command(argc, argv);
  Options o;

  CLI::App app{"numerical laboratory for spectral asymptotics", "asymlab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "artifact output path");
    sub->add_option("--format", o.format, "artifact format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--verbose", o.verbose, "progress notes on stdout");
    sub->add_option("--tol", o.tol, "limit classification tolerance")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* validate = app.add_subcommand(
      "profile-validate", "parse and validate a profile document");
  validate->add_option("--profile", o.profile, "profile path or built-in name")
      ->required();
  add_common(validate);

  CLI::App* functionals = app.add_subcommand(
      "functionals", "membership and Dixmier average on a grid");
  functionals->add_option("--profile", o.profile, "profile path or name")
      ->required();
  functionals->add_option("--grid", o.grid, "LEVEL:XMIN:XMAX:PPU");
  add_common(functionals);

  CLI::App* measurability = app.add_subcommand(
      "measurability", "three-route limit comparison for one profile");
  measurability->add_option("--profile", o.profile, "profile path or name")
      ->required();
  measurability->add_option("--q", o.q, "heat exponent q")
      ->check(CLI::PositiveNumber);
  measurability->add_option("--grid", o.grid, "LEVEL:XMIN:XMAX:PPU");
  add_common(measurability);

  CLI::App* counterexample = app.add_subcommand(
      "counterexample", "tower-scale non-measurability scenario");
  counterexample->add_option("--nmax", o.nmax, "deepest tower block")
      ->check(CLI::Range(2, 700));
  add_common(counterexample);

  CLI::App* gamma = app.add_subcommand(
      "gamma-factor", "averaged heat to zeta ratio against Gamma(1+1/q)");
  CLI::Option* gamma_q =
      gamma->add_option("--q", o.q, "single q instead of the default sweep")
          ->check(CLI::PositiveNumber);
  add_common(gamma);

  CLI::App* pcase =
      app.add_subcommand("p-case", "power-scaled coincidence of limits");
  pcase->add_option("--p", o.p, "power p")->check(CLI::PositiveNumber);
  pcase->add_option("--profile", o.profile,
                    "profile of A^p (default: canonical)");
  add_common(pcase);

  CLI::App* signed_cmd = app.add_subcommand(
      "signed", "signed difference of two profiles stays measurable");
  signed_cmd
      ->add_option("--pair", o.pair, "two profile references (plus minus)")
      ->expected(2)
      ->required();
  signed_cmd->add_option("--q", o.q, "heat exponent q")
      ->check(CLI::PositiveNumber);
  add_common(signed_cmd);

  CLI::App* mellin = app.add_subcommand(
      "mellin", "zeta bounds through the heat-trace Mellin transform");
  mellin->add_option("--model", o.model, "model document path")->required();
  add_common(mellin);

  CLI::App* gasket = app.add_subcommand(
      "gasket", "oscillatory trace model and its Cesaro regularization");
  gasket->add_option("--model", o.model, "gasket model document (optional)");
  add_common(gasket);

  CLI::App* tauberian = app.add_subcommand(
      "tauberian", "averaging-order and derivative Tauberian checks");
  add_common(tauberian);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (validate->parsed()) return cmd_profile_validate(o, command);
    if (functionals->parsed()) return cmd_functionals(o, command);
    if (measurability->parsed()) return cmd_measurability(o, command);
    if (counterexample->parsed()) return cmd_counterexample(o, command);
    if (gamma->parsed())
      return cmd_gamma_factor(o, command, gamma_q->count() > 0);
    if (pcase->parsed()) return cmd_p_case(o, command);
    if (signed_cmd->parsed()) return cmd_signed(o, command);
    if (mellin->parsed()) return cmd_mellin(o, command);
    if (gasket->parsed()) return cmd_gasket(o, command);
    if (tauberian->parsed()) return cmd_tauberian(o, command);
  } catch (const FormatError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cerr << "usage error: no verb\n";
  return 2;
}
