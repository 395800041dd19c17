// accent: coefficients, trajectories, events and sweeps for two accelerated
// atoms near a reflecting plane.
//
// Exit status: 0 ok, 1 invalid input, 2 numerical failure.

#include "accent/accent.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace accent;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNumerical = 2;

// Config file plus per-field command-line overrides.
struct Overrides {
  std::string config_path;
  std::optional<std::string> alignment;
  std::optional<double> accel, separation, y_over_L, horizon, sample_step;
  std::vector<double> d1, d2;
  std::optional<std::string> initial_state, output, format;
  bool no_boundary = false;
  bool companion = false;
  bool oracle = false;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", config_path, "JSON run configuration");
    app->add_option("--alignment", alignment, "parallel | vertical");
    app->add_option("--accel", accel, "a/omega");
    app->add_option("--separation", separation, "omega*L");
    app->add_option("--y-over-L", y_over_L, "distance of the nearer atom over L");
    app->add_option("--d1", d1, "dipole orientation of atom 1 (3 numbers)")->expected(3);
    app->add_option("--d2", d2, "dipole orientation of atom 2 (3 numbers)")->expected(3);
    app->add_option("--initial-state", initial_state, "G | E | A | S");
    app->add_option("--horizon", horizon, "Gamma0*tau horizon");
    app->add_option("--sample-step", sample_step, "Gamma0*tau sampling step");
    app->add_option("-o,--output", output, "output file (stdout if omitted)");
    app->add_option("--format", format, "csv | json");
    app->add_flag("--no-boundary", no_boundary, "drop the boundary (free space)");
    app->add_flag("--companion", companion, "also compute the free-space companion");
    app->add_flag("--oracle", oracle, "also run the numerical Fourier oracle");
  }

  RunConfig resolve() const {
    RunConfig c = config_path.empty() ? RunConfig{} : load_run_config(config_path);
    if (alignment) c.alignment = alignment_from_string(*alignment);
    if (accel) c.accel = *accel;
    if (separation) c.separation = *separation;
    if (y_over_L) c.y_over_L = *y_over_L;
    if (!d1.empty()) c.d1 = Vec3(d1[0], d1[1], d1[2]);
    if (!d2.empty()) c.d2 = Vec3(d2[0], d2[1], d2[2]);
    if (initial_state) c.initial_state = *initial_state;
    if (horizon) c.horizon = *horizon;
    if (sample_step) c.sample_step = *sample_step;
    if (output) c.output_path = *output;
    if (format) c.output_format = *format;
    if (no_boundary) c.boundary = false;
    if (companion) c.include_free_space_companion = true;
    if (oracle) c.oracle_validation = true;
    c.validate();
    return c;
  }
};

json run_metadata(std::string_view sub, const RunConfig& c) {
  json cfg = to_json(c);
  cfg["resolved"] = physical_json(c.physical());
  return metadata(sub, cfg, c.horizon, c.sample_step);
}

int cmd_coeffs(const Overrides& o, bool expansion) {
  const RunConfig rc = o.resolve();
  const PhysicalConfig pc = rc.physical();
  std::vector<std::pair<CoefficientSet, bool>> rows{{assemble(pc), pc.boundary}};
  if (rc.include_free_space_companion && pc.boundary) rows.push_back({assemble(pc.without_boundary()), false});
  if (expansion) rows.push_back({near_boundary_expansion(pc), pc.boundary});
  if (rc.oracle_validation) rows.push_back({oracle_coefficients(pc), pc.boundary});

  const json meta = run_metadata("coeffs", rc);
  std::string out;
  if (rc.output_format == "json") {
    json arr = json::array();
    for (const auto& [c, b] : rows) arr.push_back(coefficient_json(c, b));
    out = json{{"metadata", meta}, {"coefficients", arr}}.dump(2) + "\n";
  } else {
    out = csv_metadata_line(meta) + kCoefficientColumns + "\n";
    for (const auto& [c, b] : rows) out += coefficient_csv_row(c, b);
  }
  write_output(rc.output_path, out);
  return kExitOk;
}

std::string companion_path(const std::string& path) {
  const std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + "_free_space" + p.extension().string())).string();
}

int cmd_evolve(const Overrides& o) {
  const RunConfig rc = o.resolve();
  const std::vector<double> grid = time_grid(rc.horizon, rc.sample_step);
  auto run = [&](const PhysicalConfig& pc) { return propagate(build_generator(assemble(pc)), rc.initial(), grid); };
  const PhysicalConfig pc = rc.physical();
  const Trajectory tr = run(pc);
  std::optional<Trajectory> free;
  if (rc.include_free_space_companion && pc.boundary) free = run(pc.without_boundary());

  const json meta = run_metadata("evolve", rc);
  if (rc.output_format == "json") {
    json doc{{"metadata", meta}, {"trajectory", trajectory_json(tr)}};
    if (free) doc["free_space_trajectory"] = trajectory_json(*free);
    write_output(rc.output_path, doc.dump(2) + "\n");
    return kExitOk;
  }
  write_output(rc.output_path, trajectory_csv(tr, meta));
  if (free) {
    json fmeta = meta;
    fmeta["series"] = "free_space_companion";
    if (rc.output_path.empty()) write_output("", "\n" + trajectory_csv(*free, fmeta));
    else write_output(companion_path(rc.output_path), trajectory_csv(*free, fmeta));
  }
  return kExitOk;
}

int cmd_events(const Overrides& o) {
  const RunConfig rc = o.resolve();
  const PhysicalConfig pc = rc.physical();
  std::vector<std::pair<std::string, EntanglementEvents>> reports{
      {"boundary", analyze_events(build_generator(assemble(pc)), rc.initial(), rc.horizon, rc.sample_step)}};
  if (rc.include_free_space_companion && pc.boundary)
    reports.push_back({"free_space", analyze_events(build_generator(assemble(pc.without_boundary())), rc.initial(),
                                                    rc.horizon, rc.sample_step)});
  const json meta = run_metadata("events", rc);
  std::string out;
  if (rc.output_format == "json") {
    json doc{{"metadata", meta}};
    for (const auto& [name, ev] : reports) doc[name == "boundary" ? "events" : "free_space_events"] = events_json(ev);
    out = doc.dump(2) + "\n";
  } else {
    out = csv_metadata_line(meta) + "series," + kEventColumns + "\n";
    for (const auto& [name, ev] : reports) out += events_csv_rows(ev, name + ",");
  }
  write_output(rc.output_path, out);
  return kExitOk;
}

int cmd_sweep(const Overrides& o, const std::string& preset, unsigned threads) {
  SweepSpec spec;
  std::string out_path, format = "csv";
  json cfg_json;
  if (!preset.empty()) {
    spec = figure_preset(preset);
    if (o.horizon) spec.horizon = *o.horizon;
    if (o.sample_step) spec.sample_step = *o.sample_step;
    if (o.output) out_path = *o.output;
    if (o.format) format = *o.format;
    if (format != "csv" && format != "json") throw InvalidInput("output_format: expected \"csv\" or \"json\"");
    cfg_json = {{"preset", preset}};
  } else {
    const RunConfig rc = o.resolve();
    if (!rc.sweep) throw InvalidInput("sweep: give --preset or a config with a \"sweep\" block");
    spec.name = "custom";
    spec.axis = sweep_axis_from_string(rc.sweep->axis);
    spec.values = rc.sweep->values;
    spec.series.push_back(Series{rc.initial_label(), rc.physical(), rc.initial_label(), rc.initial()});
    spec.horizon = rc.horizon;
    spec.sample_step = rc.sample_step;
    spec.include_free_space_companion = rc.include_free_space_companion && rc.boundary;
    out_path = rc.output_path;
    format = rc.output_format;
    cfg_json = to_json(rc);
  }
  const SweepResult r = run_sweep(spec, threads);
  json meta = metadata("sweep", cfg_json, spec.horizon, spec.sample_step);
  meta["sweep"] = sweep_spec_json(spec);
  if (format == "json") write_output(out_path, json{{"metadata", meta}, {"result", sweep_json(r)}}.dump(2) + "\n");
  else write_output(out_path, sweep_csv(r, meta));

  for (const SweepRow& row : r.rows)
    if (row.status == "numerical_failure") return kExitNumerical;
  return kExitOk;
}

int cmd_validate(const Overrides& o, int suite, unsigned long long seed, double window_factor) {
  std::vector<PhysicalConfig> configs;
  std::string out_path;
  if (!o.config_path.empty() || o.accel || o.separation || o.y_over_L || o.alignment) {
    const RunConfig rc = o.resolve();
    configs.push_back(rc.physical());
    out_path = rc.output_path;
  } else {
    configs = random_oracle_suite(suite, seed);
    if (o.output) out_path = *o.output;
  }

  QuadratureSettings q;
  q.window_factor = window_factor;
  std::vector<OracleCheck> checks(configs.size());
  parallel_for(configs.size(), [&](std::size_t i) { checks[i] = check_against_oracle(configs[i], q); });

  json cfg{{"suite", suite}, {"seed", seed}, {"configurations", json::array()}};
  for (const PhysicalConfig& c : configs) cfg["configurations"].push_back(physical_json(c));
  json meta = metadata("validate", cfg, 0.0, 0.0);
  meta["tolerances"]["oracle_window_factor"] = window_factor;
  meta["tolerances"].erase("horizon");
  meta["tolerances"].erase("sample_step");
  std::string out = csv_metadata_line(meta) + "alignment,accel,separation,y_over_L,pair,relative_error,status\n";
  double worst = 0.0;
  const OracleCheck* failing = nullptr;
  for (const OracleCheck& c : checks) {
    for (const PairCheck& p : c.pairs) {
      out += std::string(to_string(c.config.alignment)) + "," + fmt17(c.config.accel) + "," +
             fmt17(c.config.separation) + "," + fmt17(c.config.y_over_L()) + "," + std::to_string(p.pair.alpha) +
             std::to_string(p.pair.beta) + "," + fmt17(p.relative_error()) + "," + to_string(p.status) + "\n";
    }
    worst = std::max(worst, c.max_relative_error());
    if (!c.passed() && !failing) failing = &c;
  }
  out += "# max_relative_error: " + fmt17(worst) + "\n";
  write_output(out_path, out);
  std::fprintf(stderr, "max relative error %.3e over %zu configurations (limit %.0e)\n", worst, checks.size(),
               kOracleAgreement);
  if (failing) {
    std::fprintf(stderr, "failing configuration: %s\n", physical_json(failing->config).dump().c_str());
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_presets(const std::string& show) {
  if (!show.empty()) {
    std::cout << sweep_spec_json(figure_preset(show)).dump(2) << "\n";
    return kExitOk;
  }
  for (const SweepSpec& s : figure_presets()) std::cout << s.name << "\t" << s.description << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement dynamics of two uniformly accelerated atoms near a reflecting plane"};
  app.require_subcommand(1);
  app.set_version_flag("--version", accent::kVersion);

  Overrides o;
  bool expansion = false;
  std::string preset, show;
  unsigned threads = 0;
  int suite = 20;
  unsigned long long seed = 20240611ULL;
  double window_factor = QuadratureSettings{}.window_factor;

  auto* coeffs = app.add_subcommand("coeffs", "print A1..A3, B1..B3");
  o.attach(coeffs);
  coeffs->add_flag("--expansion", expansion, "also print the small-y/L expansion");
  auto* evolve = app.add_subcommand("evolve", "write the state and concurrence trajectory");
  o.attach(evolve);
  auto* events = app.add_subcommand("events", "report deaths, births, revivals and the maximum");
  o.attach(events);
  auto* sweep = app.add_subcommand("sweep", "run a sweep from a config or a named preset");
  o.attach(sweep);
  sweep->add_option("--preset", preset, "figure preset name (see `presets`)");
  sweep->add_option("--threads", threads, "worker threads (0 = all cores)");
  auto* validate = app.add_subcommand("validate", "compare closed-form spectra with the Fourier oracle");
  o.attach(validate);
  validate->add_option("--suite", suite, "number of random configurations")->check(CLI::PositiveNumber);
  validate->add_option("--seed", seed, "seed of the random suite");
  validate->add_option("--window-factor", window_factor, "integration window in units of 1/a")
      ->check(CLI::PositiveNumber);
  auto* presets = app.add_subcommand("presets", "list figure presets");
  presets->add_option("--show", show, "print one preset in full");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*coeffs) return cmd_coeffs(o, expansion);
    if (*evolve) return cmd_evolve(o);
    if (*events) return cmd_events(o);
    if (*sweep) return cmd_sweep(o, preset, threads);
    if (*validate) return cmd_validate(o, suite, seed, window_factor);
    if (*presets) return cmd_presets(show);
  } catch (const accent::InvalidInput& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalid;
  } catch (const accent::NumericalFailure& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitInvalid;
}
