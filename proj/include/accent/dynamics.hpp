#pragma once

// Linear evolution of the X-state elements under the six rates.
//
// The population sector is the real vector (pG, pE, pA, pS, Re rhoAS, Im rhoAS);
// rhoGE decays on its own. Since rho_AS + rho_SA = 2 Re rhoAS, the sources
// of the rho_AS equation act on the real part only.

#include "accent/coefficients.hpp"
#include "accent/xstate.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <span>
#include <vector>

namespace accent {

using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

inline Vec6 to_vector(const XState& s) {
  Vec6 v;
  v << s.pG, s.pE, s.pA, s.pS, s.rhoAS.real(), s.rhoAS.imag();
  return v;
}

inline XState from_vector(const Vec6& v, cplx rhoGE) {
  return {v[0], v[1], v[2], v[3], cplx(v[4], v[5]), rhoGE};
}

struct Generator {
  Mat6 blockPop = Mat6::Zero();
  cplx blockGE = 0.0;

  /// Time derivative of a state.
  XState apply(const XState& s) const {
    return from_vector(blockPop * to_vector(s), blockGE * s.rhoGE);
  }
};

inline Generator build_generator(const CoefficientSet& c) {
  if (!c.all_finite()) throw InvalidInput("coefficients: non-finite rate");
  const double A1 = c.A1, A2 = c.A2, A3 = c.A3, B1 = c.B1, B2 = c.B2, B3 = c.B3;
  Generator g;
  Mat6& M = g.blockPop;
  // clang-format off
  M << -2 * (A1 - B1 + A2 - B2), 0, A1 + B1 + A2 + B2 - 2 * A3 - 2 * B3, A1 + B1 + A2 + B2 + 2 * A3 + 2 * B3, 2 * (A1 + B1 - A2 - B2), 0,
       0, -2 * (A1 + B1 + A2 + B2), A1 - B1 + A2 - B2 - 2 * A3 + 2 * B3, A1 - B1 + A2 - B2 + 2 * A3 - 2 * B3, 2 * (-A1 + B1 + A2 - B2), 0,
       A1 - B1 + A2 - B2 - 2 * A3 + 2 * B3, A1 + B1 + A2 + B2 - 2 * A3 - 2 * B3, -2 * (A1 + A2 - 2 * A3), 0, 2 * (-B1 + B2), 0,
       A1 - B1 + A2 - B2 + 2 * A3 - 2 * B3, A1 + B1 + A2 + B2 + 2 * A3 + 2 * B3, 0, -2 * (A1 + A2 + 2 * A3), 2 * (-B1 + B2), 0,
       A1 - B1 - A2 + B2, -A1 - B1 + A2 + B2, -B1 + B2, -B1 + B2, -2 * (A1 + A2), 0,
       0, 0, 0, 0, 0, -2 * (A1 + A2);
  // clang-format on
  g.blockGE = -2.0 * (A1 + A2);
  return g;
}

enum class PropagationMethod { Eigendecomposition, ScalingAndSquaring };

inline constexpr double kEigenConditionLimit = 1e12;

/// exp(blockPop * t) through the eigendecomposition of blockPop, or through
/// Eigen's scaling-and-squaring exponential when the eigenvector matrix is
/// too ill-conditioned (near-defective generators).
class Propagator {
public:
  explicit Propagator(const Generator& g, double condition_limit = kEigenConditionLimit) : gen_(g) {
    Eigen::EigenSolver<Mat6> es(g.blockPop, true);
    if (es.info() == Eigen::Success) {
      V_ = es.eigenvectors();
      lambda_ = es.eigenvalues();
      Eigen::JacobiSVD<Eigen::Matrix<cplx, 6, 6>> svd(V_);
      const auto sv = svd.singularValues();
      condition_ = sv[5] > 0.0 ? sv[0] / sv[5] : INFINITY;
      if (condition_ <= condition_limit) {
        Vinv_ = V_.inverse();
        method_ = PropagationMethod::Eigendecomposition;
        return;
      }
    } else {
      condition_ = INFINITY;
    }
    method_ = PropagationMethod::ScalingAndSquaring;
  }

  PropagationMethod method() const { return method_; }
  double condition() const { return condition_; }
  const Generator& generator() const { return gen_; }

  Mat6 transfer(double t) const {
    if (method_ == PropagationMethod::Eigendecomposition) {
      Eigen::Matrix<cplx, 6, 1> e;
      for (int i = 0; i < 6; ++i) e[i] = std::exp(lambda_[i] * t);
      return (V_ * e.asDiagonal() * Vinv_).real();
    }
    return Mat6((gen_.blockPop * t).exp());
  }

  XState at(const XState& s0, double t) const {
    return from_vector(transfer(t) * to_vector(s0), s0.rhoGE * std::exp(gen_.blockGE * t));
  }

private:
  Generator gen_;
  Eigen::Matrix<cplx, 6, 6> V_, Vinv_;
  Eigen::Matrix<cplx, 6, 1> lambda_;
  double condition_ = 1.0;
  PropagationMethod method_ = PropagationMethod::Eigendecomposition;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<XState> states;
  std::vector<double> concurrence;
  PropagationMethod method = PropagationMethod::Eigendecomposition;

  std::size_t size() const { return times.size(); }
};

inline void validate_times(std::span<const double> times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || times[i] < 0.0) throw InvalidInput("times: must be finite and >= 0");
    if (i > 0 && times[i] < times[i - 1]) throw InvalidInput("times: must be ascending");
  }
}

inline Trajectory propagate(const Propagator& p, const XState& s0, std::span<const double> times) {
  validate_times(times);
  s0.validate(1e-10);
  Trajectory tr;
  tr.method = p.method();
  tr.times.assign(times.begin(), times.end());
  tr.states.reserve(times.size());
  tr.concurrence.reserve(times.size());
  for (double t : times) {
    const XState s = t == 0.0 ? s0 : p.at(s0, t);
    if (!s.all_finite()) throw NumericalFailure("propagate: non-finite state");
    tr.states.push_back(s);
    tr.concurrence.push_back(concurrence_x(s));
  }
  return tr;
}

inline Trajectory propagate(const Generator& g, const XState& s0, std::span<const double> times) {
  return propagate(Propagator(g), s0, times);
}

/// 0, step, 2 step, ... up to and including horizon.
inline std::vector<double> time_grid(double horizon, double step) {
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw InvalidInput("horizon: must be finite and >= 0");
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidInput("sample_step: must be finite and > 0");
  const auto n = static_cast<std::size_t>(std::llround(std::floor(horizon / step + 1e-9)));
  std::vector<double> t(n + 1);
  for (std::size_t i = 0; i <= n; ++i) t[i] = static_cast<double>(i) * step;
  if (horizon - t.back() > 1e-12 * std::max(1.0, horizon)) t.push_back(horizon);
  return t;
}

/// Normalized kernel vector of blockPop with rhoGE = 0.
inline XState steady_state(const Generator& g) {
  const double scale = g.blockPop.cwiseAbs().maxCoeff();
  if (scale == 0.0) throw DynamicsFrozen();
  Eigen::JacobiSVD<Mat6> svd(g.blockPop, Eigen::ComputeFullV);
  const auto sv = svd.singularValues();
  int null_dim = 0;
  for (int i = 0; i < 6; ++i)
    if (sv[i] <= 1e-12 * scale) ++null_dim;
  if (null_dim != 1) throw DynamicsFrozen();
  Vec6 v = svd.matrixV().col(5);
  const double tr = v[0] + v[1] + v[2] + v[3];
  if (std::abs(tr) < 1e-300) throw NumericalFailure("steady_state: kernel vector has zero trace");
  v /= tr;
  if ((g.blockPop * v).norm() > 1e-10) throw NumericalFailure("steady_state: residual above 1e-10");
  return from_vector(v, 0.0);
}

}  // namespace accent
