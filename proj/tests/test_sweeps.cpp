#include "accent/accent.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace accent;

namespace {

const Vec3 X = Vec3::UnitX(), Y = Vec3::UnitY();

SweepSpec generation_window() {
  SweepSpec s;
  s.name = "window";
  s.axis = SweepAxis::Separation;
  s.values = linear_values(0.05, 3.0, 0.05);
  s.series = {make_series("par x/y", make_config(Alignment::Parallel, 2.0 / 3.0, 1.0, 0.01, X, Y), "E")};
  s.include_free_space_companion = true;
  return s;
}

std::set<double> config_values(const SweepSpec& s, double (*get)(const PhysicalConfig&)) {
  std::set<double> out;
  for (const Series& x : s.series) out.insert(get(x.config));
  return out;
}

}  // namespace

TEST(Presets, CoverFigureFamilies) {
  const auto all = figure_presets();
  std::set<std::string> names;
  for (const SweepSpec& s : all) {
    names.insert(s.name);
    EXPECT_NO_THROW(s.validate()) << s.name;
  }
  for (int i = 2; i <= 21; ++i) EXPECT_TRUE(names.count("fig" + std::to_string(i))) << i;
  EXPECT_EQ(all.front().name, "fig2");
  EXPECT_THROW(figure_preset("fig99"), InvalidInput);
}

TEST(Presets, CaptionParameters) {
  const SweepSpec f2 = figure_preset("fig2");
  EXPECT_EQ(f2.axis, SweepAxis::Time);
  EXPECT_EQ(config_values(f2, [](const PhysicalConfig& c) { return c.y_over_L(); }),
            (std::set<double>{0.1, 0.7, 1.2}));
  EXPECT_EQ(config_values(f2, [](const PhysicalConfig& c) { return c.accel; }), std::set<double>{0.5});
  EXPECT_TRUE(f2.include_free_space_companion);

  const SweepSpec f7 = figure_preset("fig7");
  EXPECT_EQ(config_values(f7, [](const PhysicalConfig& c) { return c.separation; }), std::set<double>{2.0 / 3.0});
  EXPECT_EQ(config_values(f7, [](const PhysicalConfig& c) { return c.y_over_L(); }),
            (std::set<double>{0.3, 0.7, 1.2}));

  const SweepSpec f13 = figure_preset("fig13");
  EXPECT_EQ(f13.axis, SweepAxis::BoundaryDistance);
  EXPECT_EQ(config_values(f13, [](const PhysicalConfig& c) { return c.separation; }), std::set<double>{1.0});
  EXPECT_EQ(config_values(f13, [](const PhysicalConfig& c) { return c.accel; }), (std::set<double>{0.0, 0.5, 1.0}));
}

TEST(Sweep, FigureTwoRevivalOnlyWhenVertical) {
  const SweepResult r = run_sweep(figure_preset("fig2"));
  bool vertical_revival = false;
  for (const SweepRow& row : r.rows) {
    ASSERT_EQ(row.status, "ok");
    if (row.config.alignment == Alignment::Parallel) EXPECT_FALSE(row.events.has_revival()) << row.label;
    if (row.config.alignment == Alignment::Vertical && !row.companion && row.config.y_over_L() == 0.1)
      vertical_revival = row.events.has_revival();
    EXPECT_EQ(row.trajectory.size(), time_grid(20.0, 0.01).size());
  }
  EXPECT_TRUE(vertical_revival);
}

TEST(Sweep, InertialAtomsStaySeparable) {
  const SweepResult r = run_sweep(figure_preset("fig8"));
  int checked = 0;
  for (const SweepRow& row : r.rows) {
    if (row.config.accel == 0.0) {
      EXPECT_LE(row.events.maxC.value, 1e-6) << row.label;
      ++checked;
    }
    if (row.config.accel == 0.5) {
      EXPECT_FALSE(row.events.birthTimes.empty()) << row.label;
      ++checked;
    }
  }
  EXPECT_EQ(checked, 4);
}

TEST(Sweep, BoundaryOpensGenerationWindow) {
  const SweepResult r = run_sweep(generation_window());
  bool window = false;
  for (const SweepRow& row : r.rows) {
    ASSERT_EQ(row.status, "ok");
    if (row.companion) EXPECT_LE(row.events.maxC.value, 1e-6) << row.axis_value;
    else window = window || row.events.maxC.value > 0.0;
  }
  EXPECT_TRUE(window);
  ASSERT_FALSE(r.edges.empty());
  for (const WindowEdge& e : r.edges) {
    EXPECT_FALSE(e.companion);
    EXPECT_LE(std::abs(e.hi - e.lo), 1e-3);
  }
}

TEST(Sweep, SerialAndParallelAgree) {
  SweepSpec s = generation_window();
  s.values = linear_values(0.1, 2.0, 0.1);
  const SweepResult a = run_sweep(s, 1), b = run_sweep(s, 8);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].axis_value, b.rows[i].axis_value);
    EXPECT_EQ(a.rows[i].companion, b.rows[i].companion);
    EXPECT_EQ(a.rows[i].events.maxC.value, b.rows[i].events.maxC.value);
    EXPECT_EQ(a.rows[i].events.birthTimes, b.rows[i].events.birthTimes);
    EXPECT_EQ(a.rows[i].coefficients.values(), b.rows[i].coefficients.values());
  }
  ASSERT_EQ(a.edges.size(), b.edges.size());
  for (std::size_t i = 0; i < a.edges.size(); ++i) EXPECT_EQ(a.edges[i].lo, b.edges[i].lo);
}

TEST(Sweep, CompanionMatchesFarFromBoundary) {
  SweepSpec s;
  s.axis = SweepAxis::Time;
  s.horizon = 20.0;
  for (double a : {0.5, 1.0})
    for (Alignment al : {Alignment::Parallel, Alignment::Vertical})
      s.series.push_back(make_series("far", make_config(al, a, 1.0, 1e3, X, X), "S"));
  s.include_free_space_companion = true;
  const SweepResult r = run_sweep(s);
  ASSERT_EQ(r.rows.size(), 8u);
  for (std::size_t i = 0; i < r.rows.size(); i += 2) {
    const Trajectory& b = r.rows[i].trajectory;
    const Trajectory& f = r.rows[i + 1].trajectory;
    ASSERT_TRUE(r.rows[i + 1].companion);
    for (std::size_t k = 0; k < b.size(); ++k) EXPECT_LE(std::abs(b.concurrence[k] - f.concurrence[k]), 1e-5);
  }
}

TEST(Sweep, PointFailuresStayInTheirRow) {
  SweepSpec s;
  s.axis = SweepAxis::Acceleration;
  s.values = {0.5, 1e300, 1.0};
  s.series = {make_series("x/x", make_config(Alignment::Parallel, 0.5, 1.0, 0.5, X, X), "S")};
  const SweepResult r = run_sweep(s);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_EQ(r.rows[0].status, "ok");
  EXPECT_NE(r.rows[1].status, "ok");
  EXPECT_FALSE(r.rows[1].message.empty());
  EXPECT_EQ(r.rows[2].status, "ok");
}

TEST(Sweep, AxisMoves) {
  const PhysicalConfig base = make_config(Alignment::Vertical, 0.5, 2.0, 0.25, X, X);
  const PhysicalConfig sep = apply_axis(base, SweepAxis::Separation, 4.0);
  EXPECT_EQ(sep.separation, 4.0);
  EXPECT_EQ(sep.y_over_L(), 0.25);
  const PhysicalConfig dist = apply_axis(base, SweepAxis::BoundaryDistance, 0.5);
  EXPECT_EQ(dist.separation, 2.0);
  EXPECT_EQ(dist.distance, 1.0);
  EXPECT_EQ(apply_axis(base, SweepAxis::Acceleration, 0.0).accel, 0.0);
}

TEST(Sweep, RejectsBadSpecs) {
  SweepSpec s = generation_window();
  s.values.clear();
  EXPECT_THROW(run_sweep(s), InvalidInput);
  s = generation_window();
  s.values.push_back(-1.0);
  EXPECT_THROW(run_sweep(s), InvalidInput);
  s = generation_window();
  s.series.clear();
  EXPECT_THROW(run_sweep(s), InvalidInput);
  s = generation_window();
  s.horizon = 0.0;
  EXPECT_THROW(run_sweep(s), InvalidInput);
  EXPECT_THROW(sweep_axis_from_string("depth"), InvalidInput);
  EXPECT_EQ(sweep_axis_from_string("y_over_L"), SweepAxis::BoundaryDistance);
}
