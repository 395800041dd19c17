#include "accent/accent.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace accent;

namespace {

Generator figure_two(Alignment al) {
  return build_generator(assemble(make_config(al, 0.5, 1.0, 0.1, Vec3::UnitX(), Vec3::UnitX())));
}

}  // namespace

TEST(Concurrence, Presets) {
  EXPECT_EQ(concurrence_x(XState::symmetric()), 1.0);
  EXPECT_EQ(concurrence_x(XState::antisymmetric()), 1.0);
  EXPECT_EQ(concurrence_x(XState::excited()), 0.0);
  EXPECT_EQ(concurrence_x(XState::ground()), 0.0);
  const XState mix{0.0, 0.0, 0.5, 0.5, 0.0, 0.0};
  EXPECT_EQ(concurrence_x(mix), 0.0);
  EXPECT_EQ(k_values(mix).K1, 0.0);
  EXPECT_EQ(k_values(mix).K2, -1.0);
}

TEST(Concurrence, OracleOnKnownStates) {
  EXPECT_NEAR(concurrence_oracle(Mat4c::Identity() / 4.0), 0.0, 1e-15);
  Eigen::Matrix<cplx, 4, 1> bell(0.0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0);
  EXPECT_NEAR(concurrence_oracle(bell * bell.adjoint()), 1.0, 1e-14);
  Mat4c bad = Mat4c::Identity();
  EXPECT_THROW(concurrence_oracle(bad), InvalidInput);
  bad = Mat4c::Identity() / 4.0;
  bad(0, 1) = 0.1;
  EXPECT_THROW(concurrence_oracle(bad), InvalidInput);
}

TEST(Concurrence, MatchesSpinFlipOracle) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const XState s = ref::random_xstate(rng);
    EXPECT_NEAR(concurrence_x(s), concurrence_oracle(density_matrix(s)), 1e-12) << i;
  }
}

TEST(Concurrence, NegativeRadicandIsRejected) {
  const XState s{-0.1, 0.5, 0.3, 0.3, 0.0, 0.0};
  EXPECT_THROW(concurrence_x(s), NumericalFailure);
  const XState tiny{-1e-13, 0.5, 0.25, 0.25 + 1e-13, 0.0, 0.0};
  EXPECT_NO_THROW(concurrence_x(tiny));
}

TEST(Events, FrozenDynamicsKeepsFullEntanglement) {
  const EntanglementEvents ev = analyze_events(build_generator(CoefficientSet{}), XState::symmetric(), 10.0);
  EXPECT_TRUE(ev.deathTimes.empty());
  EXPECT_TRUE(ev.birthTimes.empty());
  EXPECT_EQ(ev.maxC.value, 1.0);
  EXPECT_EQ(ev.maxC.time, 0.0);
  EXPECT_TRUE(ev.truncated);
  EXPECT_TRUE(ev.entangled_at_start);
}

TEST(Events, VerticalRevival) {
  const Propagator p(figure_two(Alignment::Vertical));
  const EntanglementEvents ev = analyze_events(p, XState::symmetric(), 20.0);
  ASSERT_GE(ev.deathTimes.size(), 1u);
  ASSERT_TRUE(ev.has_revival());
  EXPECT_NEAR(ev.deathTimes[0], 3.882, 1e-3);
  EXPECT_NEAR(ev.birthTimes[0], 3.948, 1e-3);
  EXPECT_LT(ev.deathTimes[0], ev.revivalIntervals[0].start);
  for (double t : ev.deathTimes) EXPECT_LE(concurrence_x(p.at(XState::symmetric(), t)), 1e-8);
  for (std::size_t i = 1; i < ev.birthTimes.size(); ++i) EXPECT_GT(ev.birthTimes[i], ev.birthTimes[i - 1]);
  EXPECT_EQ(ev.maxC.value, 1.0);
}

TEST(Events, ParallelHasNoRevival) {
  const EntanglementEvents ev = analyze_events(figure_two(Alignment::Parallel), XState::symmetric(), 20.0);
  EXPECT_FALSE(ev.has_revival());
}

TEST(Events, FreeSpaceDecaysMonotonically) {
  const Generator g = build_generator(
      assemble(make_config(Alignment::Parallel, 0.5, 1.0, 0.1, Vec3::UnitX(), Vec3::UnitX()).without_boundary()));
  const EntanglementEvents ev = analyze_events(g, XState::symmetric(), 20.0);
  EXPECT_FALSE(ev.has_revival());
  EXPECT_TRUE(ev.birthTimes.empty());
  const Trajectory tr = propagate(g, XState::symmetric(), time_grid(20.0, 0.05));
  for (std::size_t i = 1; i < tr.size(); ++i) EXPECT_LE(tr.concurrence[i], tr.concurrence[i - 1] + 1e-15);
}

TEST(Events, DelayedBirthFromExcitedState) {
  const Generator g =
      build_generator(assemble(make_config(Alignment::Parallel, 0.5, 1.0, 0.5, Vec3::UnitX(), Vec3::UnitY())));
  const EntanglementEvents ev = analyze_events(g, XState::excited(), 20.0);
  ASSERT_FALSE(ev.birthTimes.empty());
  EXPECT_FALSE(ev.entangled_at_start);
  EXPECT_NEAR(ev.birthTimes[0], 2.16, 1e-2);
  EXPECT_GT(ev.maxC.value, 0.0);
}

TEST(Events, TimeRescaling) {
  const CoefficientSet c = assemble(make_config(Alignment::Vertical, 0.5, 1.0, 0.1, Vec3::UnitX(), Vec3::UnitX()));
  const Propagator p1(build_generator(c)), p2(build_generator(c.scaled(2.0)));
  for (double t = 0.0; t <= 10.0; t += 0.25)
    EXPECT_NEAR(concurrence_x(p2.at(XState::symmetric(), t)), concurrence_x(p1.at(XState::symmetric(), 2.0 * t)),
                1e-10);
}

TEST(Events, HorizonTruncationIsFlagged) {
  const EntanglementEvents ev = analyze_events(figure_two(Alignment::Vertical), XState::symmetric(), 1.0);
  EXPECT_TRUE(ev.truncated);
  EXPECT_TRUE(ev.deathTimes.empty());
  EXPECT_EQ(ev.truncationTime, 1.0);
}

TEST(Events, RejectsBadHorizon) {
  EXPECT_THROW(analyze_events(figure_two(Alignment::Vertical), XState::symmetric(), -1.0), InvalidInput);
  EXPECT_THROW(analyze_events(figure_two(Alignment::Vertical), XState::symmetric(), 1.0, 0.0), InvalidInput);
}
