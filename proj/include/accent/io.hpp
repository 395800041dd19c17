#pragma once

// Run configuration (strict JSON schema) and CSV/JSON serialization.
//
// Every output carries a metadata block: a single "# metadata: {...}" line at
// the top of CSV files, or a "metadata" member of JSON documents. Numbers in
// CSV are written with 17 significant digits.

#include "accent/field_correlations.hpp"
#include "accent/sweeps.hpp"
#include "accent/validation.hpp"
#include "accent/version.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>

namespace accent {

using json = nlohmann::json;

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Optional sweep block of a run configuration.
struct SweepSection {
  std::string axis = "accel";
  std::vector<double> values;
  bool operator==(const SweepSection&) const = default;
};

struct RunConfig {
  Alignment alignment = Alignment::Parallel;
  double accel = 0.5;
  double separation = 1.0;
  double y_over_L = 0.5;
  Vec3 d1 = Vec3::UnitX();
  Vec3 d2 = Vec3::UnitX();
  bool boundary = true;
  double gamma0 = 1.0;
  std::variant<std::string, Mat4c> initial_state = std::string("S");
  double horizon = 40.0;
  double sample_step = 1e-2;
  std::string output_path;
  std::string output_format = "csv";
  bool include_free_space_companion = false;
  bool oracle_validation = false;
  std::optional<SweepSection> sweep;

  bool operator==(const RunConfig& o) const {
    return alignment == o.alignment && accel == o.accel && separation == o.separation && y_over_L == o.y_over_L &&
           d1 == o.d1 && d2 == o.d2 && boundary == o.boundary && gamma0 == o.gamma0 &&
           initial_state == o.initial_state && horizon == o.horizon && sample_step == o.sample_step &&
           output_path == o.output_path && output_format == o.output_format &&
           include_free_space_companion == o.include_free_space_companion &&
           oracle_validation == o.oracle_validation && sweep == o.sweep;
  }

  PhysicalConfig physical() const {
    PhysicalConfig c = make_config(alignment, accel, separation, y_over_L, d1, d2);
    c.boundary = boundary;
    c.gamma0 = gamma0;
    return c;
  }

  XState initial() const {
    if (const auto* name = std::get_if<std::string>(&initial_state)) return XState::preset(*name);
    const XState s = from_density_matrix(std::get<Mat4c>(initial_state), 1e-10);
    s.validate(1e-10);
    return s;
  }

  std::string initial_label() const {
    if (const auto* name = std::get_if<std::string>(&initial_state)) return *name;
    return "custom";
  }

  void validate() const {
    if (!std::isfinite(y_over_L) || y_over_L <= 0.0) throw InvalidInput("y_over_L: must be finite and > 0");
    physical().validate();
    initial();
    if (!std::isfinite(horizon) || horizon <= 0.0) throw InvalidInput("horizon: must be finite and > 0");
    if (!std::isfinite(sample_step) || sample_step <= 0.0 || sample_step > horizon)
      throw InvalidInput("sample_step: must be finite, > 0 and <= horizon");
    if (output_format != "csv" && output_format != "json")
      throw InvalidInput("output_format: expected \"csv\" or \"json\"");
    if (sweep) {
      sweep_axis_from_string(sweep->axis);
      if (sweep->axis != "time" && sweep->values.empty()) throw InvalidInput("sweep.values: must be nonempty");
    }
  }
};

namespace detail {

inline double json_number(const json& j, const std::string& key) {
  if (!j.is_number()) throw InvalidInput(key + ": expected a number");
  return j.get<double>();
}
inline bool json_bool(const json& j, const std::string& key) {
  if (!j.is_boolean()) throw InvalidInput(key + ": expected true or false");
  return j.get<bool>();
}
inline std::string json_string(const json& j, const std::string& key) {
  if (!j.is_string()) throw InvalidInput(key + ": expected a string");
  return j.get<std::string>();
}
inline Vec3 json_vec3(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 3) throw InvalidInput(key + ": expected an array of 3 numbers");
  Vec3 v;
  for (int i = 0; i < 3; ++i) v[i] = json_number(j[i], key);
  return v;
}

// Entries are numbers or [re, im] pairs.
inline Mat4c json_matrix(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 4) throw InvalidInput(key + ": expected a 4x4 matrix");
  Mat4c m;
  for (int r = 0; r < 4; ++r) {
    if (!j[r].is_array() || j[r].size() != 4) throw InvalidInput(key + ": expected a 4x4 matrix");
    for (int c = 0; c < 4; ++c) {
      const json& e = j[r][c];
      if (e.is_number()) {
        m(r, c) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
      } else {
        throw InvalidInput(key + ": matrix entries must be numbers or [re, im] pairs");
      }
    }
  }
  return m;
}

}  // namespace detail

inline RunConfig run_config_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("config: expected a JSON object");
  static const std::set<std::string> known{
      "alignment", "accel", "separation", "y_over_L", "d1", "d2", "boundary", "gamma0", "initial_state", "horizon",
      "sample_step", "output_path", "output_format", "include_free_space_companion", "oracle_validation", "sweep"};
  for (const auto& [k, v] : j.items())
    if (!known.contains(k)) throw InvalidInput("config: unknown key \"" + k + "\"");

  using namespace detail;
  RunConfig c;
  if (j.contains("alignment")) c.alignment = alignment_from_string(json_string(j["alignment"], "alignment"));
  if (j.contains("accel")) c.accel = json_number(j["accel"], "accel");
  if (j.contains("separation")) c.separation = json_number(j["separation"], "separation");
  if (j.contains("y_over_L")) c.y_over_L = json_number(j["y_over_L"], "y_over_L");
  if (j.contains("d1")) c.d1 = json_vec3(j["d1"], "d1");
  if (j.contains("d2")) c.d2 = json_vec3(j["d2"], "d2");
  if (j.contains("boundary")) c.boundary = json_bool(j["boundary"], "boundary");
  if (j.contains("gamma0")) c.gamma0 = json_number(j["gamma0"], "gamma0");
  if (j.contains("initial_state")) {
    const json& s = j["initial_state"];
    if (s.is_string()) c.initial_state = s.get<std::string>();
    else c.initial_state = json_matrix(s, "initial_state");
  }
  if (j.contains("horizon")) c.horizon = json_number(j["horizon"], "horizon");
  if (j.contains("sample_step")) c.sample_step = json_number(j["sample_step"], "sample_step");
  if (j.contains("output_path")) c.output_path = json_string(j["output_path"], "output_path");
  if (j.contains("output_format")) c.output_format = json_string(j["output_format"], "output_format");
  if (j.contains("include_free_space_companion"))
    c.include_free_space_companion = json_bool(j["include_free_space_companion"], "include_free_space_companion");
  if (j.contains("oracle_validation")) c.oracle_validation = json_bool(j["oracle_validation"], "oracle_validation");
  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    if (!s.is_object()) throw InvalidInput("sweep: expected an object");
    for (const auto& [k, v] : s.items())
      if (k != "axis" && k != "values") throw InvalidInput("sweep: unknown key \"" + k + "\"");
    SweepSection sec;
    if (s.contains("axis")) sec.axis = json_string(s["axis"], "sweep.axis");
    if (s.contains("values")) {
      if (!s["values"].is_array()) throw InvalidInput("sweep.values: expected an array of numbers");
      for (const json& v : s["values"]) sec.values.push_back(json_number(v, "sweep.values"));
    }
    c.sweep = sec;
  }
  if (c.initial_state.index() == 0) XState::preset(std::get<std::string>(c.initial_state));
  return c;
}

inline json to_json(const RunConfig& c) {
  json j;
  j["alignment"] = std::string(to_string(c.alignment));
  j["accel"] = c.accel;
  j["separation"] = c.separation;
  j["y_over_L"] = c.y_over_L;
  j["d1"] = {c.d1.x(), c.d1.y(), c.d1.z()};
  j["d2"] = {c.d2.x(), c.d2.y(), c.d2.z()};
  j["boundary"] = c.boundary;
  j["gamma0"] = c.gamma0;
  if (const auto* name = std::get_if<std::string>(&c.initial_state)) {
    j["initial_state"] = *name;
  } else {
    const Mat4c& m = std::get<Mat4c>(c.initial_state);
    json rows = json::array();
    for (int r = 0; r < 4; ++r) {
      json row = json::array();
      for (int k = 0; k < 4; ++k) row.push_back({m(r, k).real(), m(r, k).imag()});
      rows.push_back(row);
    }
    j["initial_state"] = rows;
  }
  j["horizon"] = c.horizon;
  j["sample_step"] = c.sample_step;
  j["output_path"] = c.output_path;
  j["output_format"] = c.output_format;
  j["include_free_space_companion"] = c.include_free_space_companion;
  j["oracle_validation"] = c.oracle_validation;
  if (c.sweep) j["sweep"] = {{"axis", c.sweep->axis}, {"values", c.sweep->values}};
  return j;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("config: cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("config: malformed JSON: ") + e.what());
  }
  return run_config_from_json(j);
}

inline json physical_json(const PhysicalConfig& c) {
  return {{"alignment", std::string(to_string(c.alignment))},
          {"accel", c.accel},
          {"separation", c.separation},
          {"distance", c.distance},
          {"y_over_L", c.y_over_L()},
          {"d1", {c.d1.x(), c.d1.y(), c.d1.z()}},
          {"d2", {c.d2.x(), c.d2.y(), c.d2.z()}},
          {"boundary", c.boundary}};
}

/// Tolerances and conventions that shape every result.
inline json tolerance_json(double horizon, double sample_step) {
  const QuadratureSettings q;
  return {{"horizon", horizon},
          {"sample_step", sample_step},
          {"trace_tolerance", kTraceTolerance},
          {"positivity_slack", kPositivitySlack},
          {"radicand_slack", kRadicandSlack},
          {"event_resolution", kEventResolution},
          {"entanglement_floor", kEntanglementFloor},
          {"eigen_condition_limit", kEigenConditionLimit},
          {"window_resolution", 1e-3},
          {"oracle_epsilons", q.epsilons},
          {"oracle_window_factor", q.window_factor},
          {"oracle_tolerance", q.tolerance},
          {"oracle_agreement", kOracleAgreement},
          {"extrapolation", "richardson, two levels, on eps"}};
}

inline json metadata(std::string_view subcommand, const json& config, double horizon, double sample_step) {
  return {{"program", "accent"},
          {"version", kVersion},
          {"subcommand", std::string(subcommand)},
          {"units", "omega = 1, Gamma0 = 1; times are Gamma0*tau, rates in units of Gamma0"},
          {"config", config},
          {"tolerances", tolerance_json(horizon, sample_step)}};
}

inline std::string csv_metadata_line(const json& meta) { return "# metadata: " + meta.dump() + "\n"; }

// ---------------------------------------------------------------------------
// Tables
// ---------------------------------------------------------------------------

inline std::vector<std::string> split_columns(std::string_view header) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = header.find(',', start);
    out.emplace_back(header.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline constexpr const char* kTrajectoryColumns =
    "gamma0_tau,pG,pE,pA,pS,re_rhoAS,im_rhoAS,re_rhoGE,im_rhoGE,concurrence";

inline std::string trajectory_csv_rows(const Trajectory& tr, const std::string& prefix = "") {
  std::string out;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const XState& s = tr.states[i];
    out += prefix + fmt17(tr.times[i]) + "," + fmt17(s.pG) + "," + fmt17(s.pE) + "," + fmt17(s.pA) + "," +
           fmt17(s.pS) + "," + fmt17(s.rhoAS.real()) + "," + fmt17(s.rhoAS.imag()) + "," + fmt17(s.rhoGE.real()) +
           "," + fmt17(s.rhoGE.imag()) + "," + fmt17(tr.concurrence[i]) + "\n";
  }
  return out;
}

inline std::string trajectory_csv(const Trajectory& tr, const json& meta) {
  return csv_metadata_line(meta) + kTrajectoryColumns + "\n" + trajectory_csv_rows(tr);
}

inline json trajectory_json(const Trajectory& tr) {
  json rows = json::array();
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const XState& s = tr.states[i];
    rows.push_back({tr.times[i], s.pG, s.pE, s.pA, s.pS, s.rhoAS.real(), s.rhoAS.imag(), s.rhoGE.real(),
                    s.rhoGE.imag(), tr.concurrence[i]});
  }
  return {{"columns", split_columns(kTrajectoryColumns)}, {"rows", rows}};
}

inline constexpr const char* kCoefficientColumns = "provenance,boundary,A1,A2,A3,B1,B2,B3";

inline std::string coefficient_csv_row(const CoefficientSet& c, bool boundary) {
  return std::string(to_string(c.provenance)) + "," + (boundary ? "true" : "false") + "," + fmt17(c.A1) + "," +
         fmt17(c.A2) + "," + fmt17(c.A3) + "," + fmt17(c.B1) + "," + fmt17(c.B2) + "," + fmt17(c.B3) + "\n";
}

inline json coefficient_json(const CoefficientSet& c, bool boundary) {
  return {{"provenance", std::string(to_string(c.provenance))},
          {"boundary", boundary},
          {"A1", c.A1}, {"A2", c.A2}, {"A3", c.A3},
          {"B1", c.B1}, {"B2", c.B2}, {"B3", c.B3}};
}

inline json events_json(const EntanglementEvents& e) {
  json rev = json::array();
  for (const Interval& i : e.revivalIntervals)
    rev.push_back({{"start", i.start}, {"end", i.end}, {"open_ended", i.open_ended}});
  return {{"death_times", e.deathTimes},
          {"birth_times", e.birthTimes},
          {"revival_intervals", rev},
          {"max_concurrence", {{"value", e.maxC.value}, {"gamma0_tau", e.maxC.time}}},
          {"entangled_at_start", e.entangled_at_start},
          {"truncation_time", e.truncationTime},
          {"horizon_truncated", e.truncated}};
}

inline constexpr const char* kEventColumns = "event,gamma0_tau,gamma0_tau_end,value";

inline std::string events_csv_rows(const EntanglementEvents& e, const std::string& prefix = "") {
  std::string out;
  for (double t : e.deathTimes) out += prefix + "death," + fmt17(t) + ",,0\n";
  for (double t : e.birthTimes) out += prefix + "birth," + fmt17(t) + ",,0\n";
  for (const Interval& i : e.revivalIntervals)
    out += prefix + (i.open_ended ? "revival_open," : "revival,") + fmt17(i.start) + "," + fmt17(i.end) + ",\n";
  out += prefix + "max," + fmt17(e.maxC.time) + ",," + fmt17(e.maxC.value) + "\n";
  if (e.truncated) out += prefix + "horizon_truncated," + fmt17(e.truncationTime) + ",,\n";
  return out;
}

inline constexpr const char* kSweepColumns =
    "series,label,companion,axis_value,accel,separation,y_over_L,A1,A2,A3,B1,B2,B3,max_concurrence,"
    "max_gamma0_tau,deaths,births,first_death,first_birth,revival,ever_entangled,status";

inline constexpr const char* kSweepTimeColumns =
    "series,label,companion,gamma0_tau,pG,pE,pA,pS,re_rhoAS,im_rhoAS,re_rhoGE,im_rhoGE,concurrence";

inline std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

inline std::string sweep_csv(const SweepResult& r, const json& meta) {
  std::string out = csv_metadata_line(meta);
  if (r.spec.axis == SweepAxis::Time) {
    out += std::string(kSweepTimeColumns) + "\n";
    for (const SweepRow& row : r.rows) {
      const std::string prefix = std::to_string(row.series_index) + "," + csv_quote(row.label) + "," +
                                 (row.companion ? "true," : "false,");
      out += trajectory_csv_rows(row.trajectory, prefix);
    }
    return out;
  }
  out += std::string(kSweepColumns) + "\n";
  for (const SweepRow& row : r.rows) {
    const CoefficientSet& c = row.coefficients;
    const EntanglementEvents& e = row.events;
    const bool ok = row.status == "ok";
    auto opt = [&](const std::vector<double>& v) { return ok && !v.empty() ? fmt17(v.front()) : std::string(); };
    out += std::to_string(row.series_index) + "," + csv_quote(row.label) + "," + (row.companion ? "true" : "false") +
           "," + fmt17(row.axis_value) + "," + fmt17(row.config.accel) + "," + fmt17(row.config.separation) + "," +
           fmt17(row.config.y_over_L()) + "," + fmt17(c.A1) + "," + fmt17(c.A2) + "," + fmt17(c.A3) + "," +
           fmt17(c.B1) + "," + fmt17(c.B2) + "," + fmt17(c.B3) + "," + fmt17(e.maxC.value) + "," +
           fmt17(e.maxC.time) + "," + std::to_string(e.deathTimes.size()) + "," + std::to_string(e.birthTimes.size()) +
           "," + opt(e.deathTimes) + "," + opt(e.birthTimes) + "," + (e.has_revival() ? "true" : "false") + "," +
           (row.ever_entangled ? "true" : "false") + "," + csv_quote(ok ? row.status : row.status + ": " + row.message) +
           "\n";
  }
  return out;
}

inline json sweep_spec_json(const SweepSpec& s) {
  json series = json::array();
  for (const Series& x : s.series)
    series.push_back({{"label", x.label}, {"initial_state", x.initial}, {"config", physical_json(x.config)}});
  return {{"name", s.name},
          {"description", s.description},
          {"axis", std::string(to_string(s.axis))},
          {"values", s.values},
          {"series", series},
          {"horizon", s.horizon},
          {"sample_step", s.sample_step},
          {"include_free_space_companion", s.include_free_space_companion},
          {"window_resolution", s.window_resolution}};
}

inline json sweep_json(const SweepResult& r) {
  json rows = json::array();
  for (const SweepRow& row : r.rows) {
    json j = {{"series", row.series_index},
              {"label", row.label},
              {"companion", row.companion},
              {"axis_value", row.axis_value},
              {"config", physical_json(row.config)},
              {"status", row.status}};
    if (!row.message.empty()) j["message"] = row.message;
    if (row.status == "ok") {
      j["coefficients"] = coefficient_json(row.coefficients, row.config.boundary);
      j["events"] = events_json(row.events);
      j["ever_entangled"] = row.ever_entangled;
      if (r.spec.axis == SweepAxis::Time) j["trajectory"] = trajectory_json(row.trajectory);
    }
    rows.push_back(j);
  }
  json edges = json::array();
  for (const WindowEdge& e : r.edges)
    edges.push_back({{"series", e.series_index},
                     {"companion", e.companion},
                     {"lo", e.lo},
                     {"hi", e.hi},
                     {"entangled_at_hi", e.entangled_at_hi}});
  return {{"rows", rows}, {"window_edges", edges}};
}

// ---------------------------------------------------------------------------
// Output location
// ---------------------------------------------------------------------------

inline constexpr const char* kOutputDirEnv = "ACCENT_OUTPUT_DIR";

/// Relative paths are placed under $ACCENT_OUTPUT_DIR when it is set.
inline std::filesystem::path resolve_output_path(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) p = std::filesystem::path(dir) / p;
  }
  return p;
}

/// Writes to the resolved path, or to stdout when `path` is empty.
inline void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    std::cout.flush();
    return;
  }
  const std::filesystem::path p = resolve_output_path(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InvalidInput("output_path: cannot write " + p.string());
  out << content;
}

}  // namespace accent
