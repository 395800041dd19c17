#pragma once

// Concurrence of general two-qubit states and entanglement event extraction
// (sudden death, delayed birth, revival, global maximum) along exact
// trajectories.

#include "accent/dynamics.hpp"
#include "accent/xstate.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <vector>

namespace accent {

/// Wootters concurrence of an arbitrary 4x4 density matrix (product basis).
/// The spin-flip spectrum is taken from the singular values of
/// X^T (sy x sy) X with rho = X X^H, which avoids the square root of a
/// non-Hermitian product.
inline double concurrence_oracle(const Mat4c& rho, double tol = kPositivitySlack) {
  if (!rho.allFinite()) throw InvalidInput("density matrix: non-finite entry");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) throw InvalidInput("density matrix: not Hermitian");
  if (std::abs(rho.trace() - 1.0) > tol) throw InvalidInput("density matrix: trace must be 1");
  Eigen::SelfAdjointEigenSolver<Mat4c> es(rho);
  if (es.eigenvalues().minCoeff() < -tol) throw InvalidInput("density matrix: not positive semidefinite");

  Eigen::Vector4d w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Mat4c X = es.eigenvectors() * w.asDiagonal();
  Mat4c flip = Mat4c::Zero();  // sigma_y (x) sigma_y
  flip(0, 3) = -1.0;
  flip(1, 2) = 1.0;
  flip(2, 1) = 1.0;
  flip(3, 0) = -1.0;
  const Mat4c tau = X.transpose() * flip * X;
  Eigen::JacobiSVD<Mat4c> svd(tau);
  const Eigen::Vector4d l = svd.singularValues();  // descending
  return std::clamp(l[0] - l[1] - l[2] - l[3], 0.0, 1.0);
}

inline constexpr double kEventResolution = 1e-6;
/// max(K1, K2) must exceed this for a state to count as entangled; it keeps
/// round-off around exactly-separable states from producing spurious events.
inline constexpr double kEntanglementFloor = 1e-12;

struct Interval {
  double start = 0.0;
  double end = 0.0;
  bool open_ended = false;  // still entangled at the horizon
};

struct MaxConcurrence {
  double value = 0.0;
  double time = 0.0;
};

struct EntanglementEvents {
  std::vector<double> deathTimes;
  std::vector<double> birthTimes;
  std::vector<Interval> revivalIntervals;
  MaxConcurrence maxC;
  double truncationTime = 0.0;
  bool truncated = false;  // entangled at the horizon
  bool entangled_at_start = false;

  bool has_revival() const { return !revivalIntervals.empty(); }
};

namespace detail {

inline double k_max(const XState& s) {
  const KValues k = k_values(s);
  return std::max(k.K1, k.K2);
}

inline bool alive(const XState& s) { return k_max(s) > kEntanglementFloor; }

// Shrinks [lo, hi] around the alive/dead switch until it is narrower than
// kEventResolution; returns the endpoint on the dead side.
inline double refine_switch(const Propagator& p, const XState& s0, double lo, double hi, bool alive_at_lo) {
  while (hi - lo > kEventResolution) {
    const double mid = 0.5 * (lo + hi);
    if (alive(p.at(s0, mid)) == alive_at_lo) lo = mid;
    else hi = mid;
  }
  return alive_at_lo ? hi : lo;
}

inline MaxConcurrence golden_max(const Propagator& p, const XState& s0, double lo, double hi) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  auto C = [&](double t) { return concurrence_x(p.at(s0, t)); };
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = C(x1), f2 = C(x2);
  while (hi - lo > 1e-9) {
    if (f1 < f2) {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + g * (hi - lo); f2 = C(x2);
    } else {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - g * (hi - lo); f1 = C(x1);
    }
  }
  const double t = 0.5 * (lo + hi);
  return {C(t), t};
}

}  // namespace detail

/// Scans C on a grid of `step` over [0, horizon], brackets every change
/// between entangled and separable and bisects it on freshly propagated
/// states; the maximum is refined by golden-section search around the best
/// sample.
inline EntanglementEvents analyze_events(const Propagator& p, const XState& s0, double horizon, double step = 1e-2) {
  const std::vector<double> grid = time_grid(horizon, step);
  EntanglementEvents ev;
  ev.truncationTime = horizon;

  std::vector<XState> states;
  states.reserve(grid.size());
  for (double t : grid) states.push_back(t == 0.0 ? s0 : p.at(s0, t));

  ev.entangled_at_start = detail::alive(states.front());
  bool was_alive = ev.entangled_at_start;
  std::size_t best = 0;
  double best_c = concurrence_x(states.front());
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const bool now = detail::alive(states[i]);
    const double c = concurrence_x(states[i]);
    if (c > best_c) {
      best_c = c;
      best = i;
    }
    if (now == was_alive) continue;
    const double t = detail::refine_switch(p, s0, grid[i - 1], grid[i], was_alive);
    if (was_alive) {
      ev.deathTimes.push_back(t);
      if (!ev.revivalIntervals.empty() && ev.revivalIntervals.back().open_ended) {
        ev.revivalIntervals.back().end = t;
        ev.revivalIntervals.back().open_ended = false;
      }
    } else {
      ev.birthTimes.push_back(t);
      if (!ev.deathTimes.empty()) ev.revivalIntervals.push_back({t, horizon, true});
    }
    was_alive = now;
  }
  ev.truncated = was_alive;

  ev.maxC = {best_c, grid[best]};
  if (best_c > 0.0 && grid.size() > 1) {
    const double lo = grid[best == 0 ? 0 : best - 1];
    const double hi = grid[std::min(best + 1, grid.size() - 1)];
    const MaxConcurrence refined = detail::golden_max(p, s0, lo, hi);
    if (refined.value > ev.maxC.value) ev.maxC = refined;
  }
  return ev;
}

inline EntanglementEvents analyze_events(const Generator& g, const XState& s0, double horizon, double step = 1e-2) {
  return analyze_events(Propagator(g), s0, horizon, step);
}

}  // namespace accent
