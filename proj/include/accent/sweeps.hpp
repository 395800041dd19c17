#pragma once

// Parameter sweeps over acceleration, separation, boundary distance or time,
// with the figure presets.

#include "accent/entanglement.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace accent {

enum class SweepAxis { Acceleration, Separation, BoundaryDistance, Time };

inline std::string_view to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::Acceleration: return "accel";
    case SweepAxis::Separation: return "separation";
    case SweepAxis::BoundaryDistance: return "y_over_L";
    default: return "time";
  }
}

inline SweepAxis sweep_axis_from_string(std::string_view s) {
  if (s == "accel") return SweepAxis::Acceleration;
  if (s == "separation") return SweepAxis::Separation;
  if (s == "y_over_L") return SweepAxis::BoundaryDistance;
  if (s == "time") return SweepAxis::Time;
  throw InvalidInput("axis: expected accel, separation, y_over_L or time, got \"" + std::string(s) + "\"");
}

/// One curve of a figure: a configuration and its initial state.
struct Series {
  std::string label;
  PhysicalConfig config;
  std::string initial = "S";  // preset name, or "custom" when initial_state was given directly
  XState initial_state = XState::symmetric();
};

inline Series make_series(std::string label, const PhysicalConfig& c, std::string_view initial) {
  return {std::move(label), c, std::string(initial), XState::preset(initial)};
}

struct SweepSpec {
  std::string name;
  std::string description;
  SweepAxis axis = SweepAxis::Time;
  std::vector<double> values;  // ignored for the time axis
  std::vector<Series> series;
  double horizon = 40.0;
  double sample_step = 1e-2;
  bool include_free_space_companion = false;
  bool refine_windows = true;
  double window_resolution = 1e-3;

  void validate() const {
    if (series.empty()) throw InvalidInput("series: at least one series is required");
    if (!std::isfinite(horizon) || horizon <= 0.0) throw InvalidInput("horizon: must be finite and > 0");
    if (!std::isfinite(sample_step) || sample_step <= 0.0 || sample_step > horizon)
      throw InvalidInput("sample_step: must be finite, > 0 and <= horizon");
    if (!(window_resolution > 0.0)) throw InvalidInput("window_resolution: must be > 0");
    for (const Series& s : series) {
      s.config.validate();
      s.initial_state.validate(1e-10);
    }
    if (axis == SweepAxis::Time) return;
    if (values.empty()) throw InvalidInput("values: must be nonempty");
    for (double v : values) {
      if (!std::isfinite(v)) throw InvalidInput("values: must be finite");
      if (axis == SweepAxis::Acceleration ? v < 0.0 : v <= 0.0)
        throw InvalidInput(std::string("values: out of range for axis ") + std::string(to_string(axis)));
    }
  }
};

/// Moves `base` to position v on the axis. Separation keeps y/L fixed;
/// boundary distance keeps L fixed.
inline PhysicalConfig apply_axis(const PhysicalConfig& base, SweepAxis axis, double v) {
  PhysicalConfig c = base;
  switch (axis) {
    case SweepAxis::Acceleration: c.accel = v; break;
    case SweepAxis::Separation: c.distance = base.y_over_L() * v; c.separation = v; break;
    case SweepAxis::BoundaryDistance: c.distance = v * base.separation; break;
    case SweepAxis::Time: break;
  }
  return c;
}

struct SweepRow {
  std::size_t series_index = 0;
  std::string label;
  bool companion = false;  // boundary terms dropped
  double axis_value = 0.0;
  PhysicalConfig config;
  CoefficientSet coefficients;
  EntanglementEvents events;
  Trajectory trajectory;  // filled for the time axis only
  bool ever_entangled = false;
  std::string status = "ok";  // ok | invalid | numerical_failure
  std::string message;
};

/// Bracket [lo, hi] on the sweep axis across which a curve switches between
/// "never entangled" and "entangled at some time".
struct WindowEdge {
  std::size_t series_index = 0;
  bool companion = false;
  double lo = 0.0;
  double hi = 0.0;
  bool entangled_at_hi = false;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;
  std::vector<WindowEdge> edges;
};

/// Runs fn(0..n-1) on up to `threads` workers; each index is written by
/// exactly one worker, so the output order is the index order.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, unsigned threads = 0) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

namespace detail {

inline void evaluate_row(SweepRow& row, const SweepSpec& spec, const XState& s0) {
  try {
    row.coefficients = assemble(row.config);
    const Propagator p(build_generator(row.coefficients));
    row.events = analyze_events(p, s0, spec.horizon, spec.sample_step);
    row.ever_entangled = row.events.entangled_at_start || !row.events.birthTimes.empty();
    if (spec.axis == SweepAxis::Time) {
      const std::vector<double> grid = time_grid(spec.horizon, spec.sample_step);
      row.trajectory = propagate(p, s0, grid);
    }
  } catch (const InvalidInput& e) {
    row.status = "invalid";
    row.message = e.what();
  } catch (const NumericalFailure& e) {
    row.status = "numerical_failure";
    row.message = e.what();
  }
}

inline bool point_entangled(const SweepSpec& spec, const Series& s, bool companion, double v) {
  PhysicalConfig c = apply_axis(s.config, spec.axis, v);
  if (companion) c.boundary = false;
  const EntanglementEvents ev =
      analyze_events(build_generator(assemble(c)), s.initial_state, spec.horizon, spec.sample_step);
  return ev.entangled_at_start || !ev.birthTimes.empty();
}

}  // namespace detail

inline SweepResult run_sweep(const SweepSpec& spec, unsigned threads = 0) {
  spec.validate();
  SweepResult out;
  out.spec = spec;

  const std::vector<double> points = spec.axis == SweepAxis::Time ? std::vector<double>{0.0} : spec.values;
  const int variants = spec.include_free_space_companion ? 2 : 1;
  for (std::size_t si = 0; si < spec.series.size(); ++si) {
    for (int comp = 0; comp < variants; ++comp) {
      for (double v : points) {
        SweepRow r;
        r.series_index = si;
        r.label = spec.series[si].label;
        r.companion = comp == 1;
        r.axis_value = v;
        r.config = apply_axis(spec.series[si].config, spec.axis, v);
        if (r.companion) r.config.boundary = false;
        out.rows.push_back(std::move(r));
      }
    }
  }
  parallel_for(
      out.rows.size(),
      [&](std::size_t i) {
        SweepRow& r = out.rows[i];
        detail::evaluate_row(r, spec, spec.series[r.series_index].initial_state);
      },
      threads);

  if (spec.axis == SweepAxis::Time || !spec.refine_windows) return out;

  // Window edges: rows of one (series, variant) are contiguous and in value order.
  for (std::size_t i = 0; i + 1 < out.rows.size(); ++i) {
    const SweepRow& a = out.rows[i];
    const SweepRow& b = out.rows[i + 1];
    if (a.series_index != b.series_index || a.companion != b.companion) continue;
    if (a.status != "ok" || b.status != "ok" || a.ever_entangled == b.ever_entangled) continue;
    out.edges.push_back({a.series_index, a.companion, a.axis_value, b.axis_value, b.ever_entangled});
  }
  parallel_for(
      out.edges.size(),
      [&](std::size_t i) {
        WindowEdge& e = out.edges[i];
        const Series& s = spec.series[e.series_index];
        try {
          while (std::abs(e.hi - e.lo) > spec.window_resolution) {
            const double mid = 0.5 * (e.lo + e.hi);
            if (detail::point_entangled(spec, s, e.companion, mid) == e.entangled_at_hi) e.hi = mid;
            else e.lo = mid;
          }
        } catch (const Error&) {
          // leave the coarse bracket
        }
      },
      threads);
  return out;
}

// ---------------------------------------------------------------------------
// Figure presets
// ---------------------------------------------------------------------------

inline std::vector<double> linear_values(double lo, double hi, double step) {
  std::vector<double> v;
  const auto n = static_cast<long>(std::llround((hi - lo) / step));
  for (long i = 0; i <= n; ++i) v.push_back(lo + static_cast<double>(i) * step);
  return v;
}

inline constexpr double kTimePresetHorizon = 20.0;
inline const std::vector<double> kPresetAccelFamily{0.1, 0.5, 1.0};

namespace detail {

inline std::string fmt_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

inline SweepSpec time_preset(std::string name, std::string description, std::vector<Series> series,
                             bool companion) {
  SweepSpec s;
  s.name = std::move(name);
  s.description = std::move(description);
  s.axis = SweepAxis::Time;
  s.series = std::move(series);
  s.horizon = kTimePresetHorizon;
  s.include_free_space_companion = companion;
  return s;
}

inline SweepSpec max_preset(std::string name, std::string description, SweepAxis axis, std::vector<double> values,
                            std::vector<Series> series, bool companion) {
  SweepSpec s;
  s.name = std::move(name);
  s.description = std::move(description);
  s.axis = axis;
  s.values = std::move(values);
  s.series = std::move(series);
  s.include_free_space_companion = companion;
  return s;
}

inline const char* short_name(Alignment a) { return a == Alignment::Parallel ? "par" : "ver"; }

// Both alignments at each y/L, fixed acceleration.
inline std::vector<Series> alignment_by_distance(double a, double L, const std::vector<double>& yl, const Vec3& d1,
                                                 const Vec3& d2, std::string_view init) {
  std::vector<Series> out;
  for (Alignment al : {Alignment::Parallel, Alignment::Vertical})
    for (double r : yl)
      out.push_back(make_series(std::string(short_name(al)) + " y/L=" + fmt_value(r), make_config(al, a, L, r, d1, d2),
                                init));
  return out;
}

// Both alignments across the acceleration family plus the inertial curve.
inline std::vector<Series> alignment_by_accel(const std::vector<double>& accels, double L, double yl, const Vec3& d1,
                                              const Vec3& d2, std::string_view init) {
  std::vector<Series> out;
  for (Alignment al : {Alignment::Parallel, Alignment::Vertical})
    for (double a : accels)
      out.push_back(make_series(std::string(short_name(al)) + " a=" + fmt_value(a), make_config(al, a, L, yl, d1, d2),
                                init));
  return out;
}

}  // namespace detail

/// One sweep per figure family, fig2..fig21.
inline std::vector<SweepSpec> figure_presets() {
  using detail::alignment_by_accel;
  using detail::alignment_by_distance;
  using detail::max_preset;
  using detail::time_preset;
  const Vec3 X = Vec3::UnitX(), Y = Vec3::UnitY(), Z = Vec3::UnitZ();
  std::vector<double> fam{0.0};
  fam.insert(fam.end(), kPresetAccelFamily.begin(), kPresetAccelFamily.end());
  const std::vector<double> fam3{0.0, 0.5, 1.0};
  const std::vector<double> a_axis = linear_values(0.0, 2.0, 0.02);
  const std::vector<double> wl_axis = linear_values(0.05, 3.0, 0.025);
  const std::vector<double> yl_axis = linear_values(0.01, 3.0, 0.01);
  const double y100 = 0.01;

  std::vector<SweepSpec> p;
  p.push_back(time_preset("fig2", "C(t), |S>, x/x, wL=1, a=1/2, y/L in {1/10, 7/10, 6/5}",
                          alignment_by_distance(0.5, 1.0, {0.1, 0.7, 1.2}, X, X, "S"), true));
  p.push_back(time_preset("fig3", "C(t), |S>, x/x, wL=1, y/L=1/2, a in {0, 1/10, 1/2, 1}",
                          alignment_by_accel(fam, 1.0, 0.5, X, X, "S"), false));
  p.push_back(time_preset("fig4", "C(t), |S>, y/y, wL=1, a=1/2, y/L in {1/10, 7/10, 6/5}",
                          alignment_by_distance(0.5, 1.0, {0.1, 0.7, 1.2}, Y, Y, "S"), true));
  p.push_back(time_preset("fig5", "C(t), |S>, nearer atom x, other y, wL=1, y/L=1/2, a in {0, 1/10, 1/2, 1}",
                          alignment_by_accel(fam, 1.0, 0.5, X, Y, "S"), false));
  {
    std::vector<Series> s;
    for (const auto& [tag, d2] : {std::pair{"z/x", X}, std::pair{"z/y", Y}})
      for (double a : fam)
        s.push_back(make_series(std::string("par ") + tag + " a=" + detail::fmt_value(a),
                                make_config(Alignment::Parallel, a, 1.0, 0.5, Z, d2), "S"));
    p.push_back(time_preset("fig6", "C(t), |S>, parallel, z/x and z/y, wL=1, y/L=1/2, a in {0, 1/10, 1/2, 1}",
                            std::move(s), false));
  }
  p.push_back(time_preset("fig7", "C(t), |E>, x/x, wL=2/3, a=1/2, y/L in {3/10, 7/10, 6/5}",
                          alignment_by_distance(0.5, 2.0 / 3.0, {0.3, 0.7, 1.2}, X, X, "E"), true));
  p.push_back(time_preset("fig11", "C(t), |E>, x/x, wL=1, y/L=1/2, a in {0, 1/10, 1/2, 1}",
                          alignment_by_accel(fam, 1.0, 0.5, X, X, "E"), false));
  p.push_back(time_preset("fig9", "C(t), |E>, y/y, wL=2/3, a=1/2, y/L in {3/10, 7/10, 6/5}",
                          alignment_by_distance(0.5, 2.0 / 3.0, {0.3, 0.7, 1.2}, Y, Y, "E"), true));
  {
    std::vector<Series> s;
    for (double r : {0.3, 0.7, 1.2})
      s.push_back(make_series("par x/z y/L=" + detail::fmt_value(r),
                              make_config(Alignment::Parallel, 0.5, 2.0 / 3.0, r, X, Z), "E"));
    for (double r : {0.3, 0.7, 1.2})
      s.push_back(make_series("ver x/y y/L=" + detail::fmt_value(r),
                              make_config(Alignment::Vertical, 0.5, 2.0 / 3.0, r, X, Y), "E"));
    p.push_back(time_preset("fig10", "C(t), |E>, x/z (parallel) and x/y (vertical), wL=2/3, a=1/2", std::move(s), true));
  }
  p.push_back(time_preset("fig8", "C(t), |E>, x/y, wL=1, y/L=1/2, a in {0, 1/10, 1/2, 1}",
                          alignment_by_accel(fam, 1.0, 0.5, X, Y, "E"), false));
  for (const auto& [name, al] : {std::pair{"fig12", Alignment::Parallel}, std::pair{"fig19", Alignment::Vertical}}) {
    std::vector<Series> s;
    for (const char* init : {"S", "E"})
      for (double a : {0.0, 0.5, 0.8, 1.2})
        s.push_back(make_series(std::string(init) + " a=" + detail::fmt_value(a),
                                make_config(al, a, 1.0, 1e-3, Y, Y), init));
    p.push_back(time_preset(name,
                            std::string("C(t), ") + detail::short_name(al) +
                                ", y/L=1e-3, y/y, wL=1, a in {0, 1/2, 4/5, 6/5}, |S> and |E>",
                            std::move(s), false));
  }

  auto both = [](double a, double L, double yl, const Vec3& d1, const Vec3& d2, std::string tag) {
    std::vector<Series> s;
    for (Alignment al : {Alignment::Parallel, Alignment::Vertical})
      s.push_back(make_series(std::string(detail::short_name(al)) + " " + tag, make_config(al, a, L, yl, d1, d2), "E"));
    return s;
  };
  auto concat = [](std::vector<Series> a, const std::vector<Series>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  p.push_back(max_preset("fig14", "maxC vs a, |E>, x/x and y/y, wL=1, y/L=1/100", SweepAxis::Acceleration, a_axis,
                         concat(both(0.0, 1.0, y100, X, X, "x/x"), both(0.0, 1.0, y100, Y, Y, "y/y")), true));
  p.push_back(max_preset("fig15", "maxC vs wL, |E>, x/x, a=2/3, y/L=1/100", SweepAxis::Separation, wl_axis,
                         both(2.0 / 3.0, 1.0, y100, X, X, "x/x"), true));
  p.push_back(max_preset("fig16", "maxC vs a, |E>, x/y and x/z, wL=1/2, y/L=1/100", SweepAxis::Acceleration, a_axis,
                         concat(both(0.0, 0.5, y100, X, Y, "x/y"), both(0.0, 0.5, y100, X, Z, "x/z")), true));
  p.push_back(max_preset("fig17", "maxC vs wL, |E>, x/y, a=2/3, y/L=1/100", SweepAxis::Separation, wl_axis,
                         both(2.0 / 3.0, 1.0, y100, X, Y, "x/y"), true));
  p.push_back(max_preset("fig18", "maxC vs wL, |E>, x/x, y/L=1/2, a in {0, 1/2, 1}", SweepAxis::Separation, wl_axis,
                         alignment_by_accel(fam3, 1.0, 0.5, X, X, "E"), false));
  p.push_back(max_preset("fig13", "maxC vs y/L, |E>, x/x, wL=1, a in {0, 1/2, 1}", SweepAxis::BoundaryDistance, yl_axis,
                         alignment_by_accel(fam3, 1.0, 0.5, X, X, "E"), false));
  p.push_back(max_preset("fig20", "maxC vs wL, |E>, x/y, y/L=1/2, a in {0, 1/2, 1}", SweepAxis::Separation, wl_axis,
                         alignment_by_accel(fam3, 1.0, 0.5, X, Y, "E"), false));
  p.push_back(max_preset("fig21", "maxC vs y/L, |E>, x/y, wL=1, a in {0, 1/2, 1}", SweepAxis::BoundaryDistance,
                         yl_axis, alignment_by_accel(fam3, 1.0, 0.5, X, Y, "E"), false));
  std::ranges::sort(p, {}, [](const SweepSpec& s) { return std::stoi(s.name.substr(3)); });
  return p;
}

inline SweepSpec figure_preset(std::string_view name) {
  for (SweepSpec& s : figure_presets())
    if (s.name == name) return s;
  throw InvalidInput("preset: unknown name \"" + std::string(name) + "\"");
}

}  // namespace accent
