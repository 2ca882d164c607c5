#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "asymlab/grid.hpp"
#include "asymlab/limits.hpp"
#include "asymlab/mellin.hpp"
#include "asymlab/profile.hpp"
#include "asymlab/scenarios.hpp"
#include "asymlab/version.hpp"

namespace asymlab {

//! Malformed input document (profile or model file).  The message carries
//! a JSON-path-style location.
class FormatError : public std::runtime_error {
public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

//! 17 significant digits: enough to reproduce any double bit-exactly.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

//==============================================================================
// Profile documents
//==============================================================================

//! Endpoint as written in a profile file: level 0 stores t itself, level 1
//! stores ln t, level 2 stores ln ln t.  inf marks the infinite tail end.
struct EndpointDoc {
  int level = 0;
  double value = 0.0;
  bool inf = false;

  LogScalar to_scalar() const {
    if (inf) return LogScalar::infinity();
    switch (level) {
      case 0: return LogScalar::from_value(value);
      case 1: return LogScalar::from_log(value);
      case 2: return LogScalar::from_log(std::exp(value));
    }
    throw FormatError("endpoint level must be 0, 1 or 2");
  }
};

struct SegmentDoc {
  std::string kind; // "constant" or "power"
  double c = 1.0;
  double alpha = 0.0;
  EndpointDoc from;
  EndpointDoc to;
};

struct ProfileDoc {
  std::string name;
  std::string generator = "none";
  std::vector<SegmentDoc> segments;
};

namespace detail {

inline double require_number(const nlohmann::json& j, const std::string& key,
                             const std::string& path) {
  if (!j.contains(key) || !j[key].is_number())
    throw FormatError(path + "." + key + ": expected a number");
  return j[key].get<double>();
}

inline std::string require_string(const nlohmann::json& j,
                                  const std::string& key,
                                  const std::string& path) {
  if (!j.contains(key) || !j[key].is_string())
    throw FormatError(path + "." + key + ": expected a string");
  return j[key].get<std::string>();
}

inline EndpointDoc parse_endpoint(const nlohmann::json& j,
                                  const std::string& path) {
  EndpointDoc e;
  if (j.is_string()) {
    if (j.get<std::string>() != "inf")
      throw FormatError(path + ": only the string \"inf\" is allowed here");
    e.inf = true;
    return e;
  }
  if (!j.is_object()) throw FormatError(path + ": expected an object or \"inf\"");
  const double lvl = require_number(j, "level", path);
  if (lvl != 0.0 && lvl != 1.0 && lvl != 2.0)
    throw FormatError(path + ".level: must be 0, 1 or 2");
  e.level = static_cast<int>(lvl);
  e.value = require_number(j, "value", path);
  if (!std::isfinite(e.value))
    throw FormatError(path + ".value: must be finite");
  return e;
}

} // namespace detail

inline ProfileDoc profile_doc_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("profile: expected an object");
  ProfileDoc doc;
  doc.name = detail::require_string(j, "name", "profile");
  if (j.contains("generator")) {
    if (!j["generator"].is_string())
      throw FormatError("profile.generator: expected a string");
    doc.generator = j["generator"].get<std::string>();
  }
  if (doc.generator != "none" && doc.generator != "counterexample" &&
      doc.generator != "spike")
    throw FormatError("profile.generator: unknown generator '" +
                      doc.generator + "'");
  if (doc.generator != "none") {
    if (j.contains("segments") && !j["segments"].empty())
      throw FormatError(
          "profile.segments: generated profiles take no explicit segments");
    return doc;
  }
  if (!j.contains("segments") || !j["segments"].is_array() ||
      j["segments"].empty())
    throw FormatError("profile.segments: expected a non-empty array");
  for (std::size_t i = 0; i < j["segments"].size(); ++i) {
    const std::string path = "profile.segments[" + std::to_string(i) + "]";
    const auto& js = j["segments"][i];
    if (!js.is_object()) throw FormatError(path + ": expected an object");
    SegmentDoc s;
    s.kind = detail::require_string(js, "kind", path);
    if (s.kind != "constant" && s.kind != "power")
      throw FormatError(path + ".kind: must be \"constant\" or \"power\"");
    s.c = detail::require_number(js, "c", path);
    if (!(s.c > 0.0) || !std::isfinite(s.c))
      throw FormatError(path + ".c: must be positive and finite");
    if (s.kind == "power") {
      s.alpha = detail::require_number(js, "alpha", path);
      if (!(s.alpha > 0.0) || !std::isfinite(s.alpha))
        throw FormatError(path + ".alpha: must be positive and finite");
    }
    if (!js.contains("from")) throw FormatError(path + ".from: missing");
    s.from = detail::parse_endpoint(js["from"], path + ".from");
    if (s.from.inf) throw FormatError(path + ".from: cannot be \"inf\"");
    if (!js.contains("to")) throw FormatError(path + ".to: missing");
    s.to = detail::parse_endpoint(js["to"], path + ".to");
    doc.segments.push_back(s);
  }
  return doc;
}

//! Builds the computational profile from a document.  Shape violations
//! (junction gaps, increasing values, bad tails) surface as
//! std::invalid_argument from profile validation.
inline PiecewiseProfile profile_from_doc(const ProfileDoc& doc) {
  if (doc.generator == "counterexample") {
    PiecewiseProfile p = make_counterexample();
    return p;
  }
  if (doc.generator == "spike") return make_spike();
  std::vector<Segment> segs;
  for (const auto& sd : doc.segments) {
    Segment s;
    s.kind = sd.kind == "constant" ? Segment::Kind::Constant
                                   : Segment::Kind::Power;
    s.c = LogScalar::from_value(sd.c);
    s.alpha = sd.alpha;
    s.from = sd.from.to_scalar();
    s.to = sd.to.to_scalar();
    segs.push_back(s);
  }
  return PiecewiseProfile::from_segments(doc.name, std::move(segs));
}

inline nlohmann::ordered_json endpoint_to_json(const EndpointDoc& e) {
  if (e.inf) return "inf";
  nlohmann::ordered_json j;
  j["level"] = e.level;
  j["value"] = e.value;
  return j;
}

inline nlohmann::ordered_json profile_doc_to_json(const ProfileDoc& doc) {
  nlohmann::ordered_json j;
  j["name"] = doc.name;
  j["generator"] = doc.generator;
  j["segments"] = nlohmann::ordered_json::array();
  for (const auto& s : doc.segments) {
    nlohmann::ordered_json js;
    js["kind"] = s.kind;
    js["c"] = s.c;
    if (s.kind == "power") js["alpha"] = s.alpha;
    js["from"] = endpoint_to_json(s.from);
    js["to"] = endpoint_to_json(s.to);
    j["segments"].push_back(js);
  }
  return j;
}

inline ProfileDoc load_profile_doc(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open profile file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("profile file " + path + ": " + e.what());
  }
  return profile_doc_from_json(j);
}

//==============================================================================
// Model documents
//==============================================================================

inline HeatTraceModel model_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("model: expected an object");
  const std::string kind = detail::require_string(j, "kind", "model");
  if (kind == "power_cutoff") {
    return HeatTraceModel::power_cutoff(
        detail::require_number(j, "a", "model"),
        detail::require_number(j, "p", "model"));
  }
  if (kind == "gasket") {
    GasketParams g;
    g.a = detail::require_number(j, "a", "model");
    g.b = detail::require_number(j, "b", "model");
    g.c = detail::require_number(j, "c", "model");
    if (j.contains("beta")) g.beta = detail::require_number(j, "beta", "model");
    return HeatTraceModel::gasket(g);
  }
  if (kind == "from_profile") {
    if (!j.contains("profile"))
      throw FormatError("model.profile: missing");
    const ProfileDoc doc = profile_doc_from_json(j["profile"]);
    return HeatTraceModel::from_profile(profile_from_doc(doc),
                                        detail::require_number(j, "q", "model"));
  }
  throw FormatError("model.kind: unknown kind '" + kind + "'");
}

inline HeatTraceModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open model file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("model file " + path + ": " + e.what());
  }
  return model_from_json(j);
}

//==============================================================================
// CSV output
//==============================================================================

inline std::string grid_description(const GridSpec& g) {
  std::ostringstream os;
  os << "level=" << g.level << " x=[" << fmt17(g.x_min) << ","
     << fmt17(g.x_max) << "] ppu=" << g.points_per_unit;
  if (!g.refinement_points.empty()) {
    os << " refine=";
    for (std::size_t i = 0; i < g.refinement_points.size(); ++i)
      os << (i ? ";" : "") << fmt17(g.refinement_points[i]);
  }
  return os.str();
}

//! Provenance header shared by all CSV artifacts: tool version and the
//! exact command line, so a file can be regenerated without guessing.
inline void write_csv_header(std::ostream& os, const std::string& command) {
  os << "# " << kToolName << " " << kVersion << "\n";
  if (!command.empty()) os << "# command: " << command << "\n";
}

inline void write_sampled_csv(std::ostream& os, const SampledFunction& f,
                              const std::string& command) {
  write_csv_header(os, command);
  os << "# label: " << f.label << "\n";
  os << "# grid: " << grid_description(f.spec) << "\n";
  if (std::isfinite(f.quad_error))
    os << "# quad_error: " << fmt17(f.quad_error) << "\n";
  os << "grid_level,x,argument_log_magnitude,value\n";
  for (std::size_t i = 0; i < f.size(); ++i)
    os << f.spec.level << "," << fmt17(f.xs[i]) << "," << fmt17(f.us[i]) << ","
       << fmt17(f.values[i]) << "\n";
}

inline const char* row_kind_name(ScenarioRow::Kind k) {
  switch (k) {
    case ScenarioRow::Kind::Near: return "near";
    case ScenarioRow::Kind::AtMost: return "at_most";
    case ScenarioRow::Kind::AtLeast: return "at_least";
    case ScenarioRow::Kind::Flag: return "flag";
  }
  return "?";
}

inline void write_scenario_csv(std::ostream& os, const ScenarioResult& r,
                               const std::string& command) {
  write_csv_header(os, command);
  os << "# scenario: " << r.name << "\n";
  os << "label,kind,expected,computed,tolerance,pass\n";
  for (const auto& row : r.rows)
    os << row.label << "," << row_kind_name(row.kind) << ","
       << fmt17(row.expected) << "," << fmt17(row.computed) << ","
       << fmt17(row.tolerance) << "," << (row.pass ? 1 : 0) << "\n";
}

inline void write_zeta_csv(std::ostream& os,
                           const std::vector<ZetaPoint>& pts,
                           const std::string& command) {
  write_csv_header(os, command);
  os << "s,divergent,s_tau,tau_log\n";
  for (const auto& z : pts)
    os << fmt17(z.s) << "," << (z.divergent ? 1 : 0) << "," << fmt17(z.s_tau)
       << "," << fmt17(z.tau_log) << "\n";
}

//==============================================================================
// JSON reports
//==============================================================================

inline nlohmann::ordered_json limit_to_json(const LimitEstimate& e) {
  nlohmann::ordered_json j;
  j["class"] = to_string(e.cls);
  j["value"] = e.value;
  j["liminf"] = e.liminf;
  j["limsup"] = e.limsup;
  j["tail_oscillation"] = e.tail_oscillation;
  j["trend"] = e.trend;
  j["window_points"] = e.window_points;
  return j;
}

inline nlohmann::ordered_json membership_to_json(const Membership& m) {
  nlohmann::ordered_json j;
  j["weak_l1"] = m.weak_l1;
  j["weak_l1_sup"] = m.weak_l1_sup;
  j["m1_inf"] = m.m1_inf;
  j["m1_inf_sup"] = m.m1_inf_sup;
  j["little_o"] = m.little_o;
  return j;
}

inline nlohmann::ordered_json measurability_to_json(
    const MeasurabilityReport& r) {
  nlohmann::ordered_json j;
  j["q"] = r.q;
  j["avg_limit"] = limit_to_json(r.avg_limit);
  j["mheat_limit"] = limit_to_json(r.mheat_limit);
  j["zeta_limit"] = limit_to_json(r.zeta_limit);
  j["raw_heat"] = limit_to_json(r.raw_heat);
  j["mheat_normalized"] = r.mheat_normalized;
  j["agree"] = r.agree;
  j["common_value"] = r.common_value;
  j["avg_liminf"] = r.avg_liminf;
  j["avg_limsup"] = r.avg_limsup;
  j["notes"] = r.notes;
  return j;
}

inline nlohmann::ordered_json scenario_to_json(const ScenarioResult& r) {
  nlohmann::ordered_json j;
  j["scenario"] = r.name;
  j["pass"] = r.pass;
  j["notes"] = r.notes;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json jr;
    jr["label"] = row.label;
    jr["kind"] = row_kind_name(row.kind);
    jr["expected"] = row.expected;
    jr["computed"] = row.computed;
    jr["tolerance"] = row.tolerance;
    jr["pass"] = row.pass;
    if (!row.note.empty()) jr["note"] = row.note;
    j["rows"].push_back(jr);
  }
  return j;
}

inline void write_text_file(const std::string& path,
                            const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace asymlab
