#pragma once

// X-form two-qubit states in the coupled basis {G, A, S, E} and the X-state
// concurrence formula.
//
// Product basis order is |gg>, |ge>, |eg>, |ee> (first label = atom 1), with
// |S> = (|eg> + |ge>)/sqrt2 and |A> = (|eg> - |ge>)/sqrt2.

#include "accent/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>

namespace accent {

inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kPositivitySlack = 1e-10;
inline constexpr double kRadicandSlack = 1e-12;

struct XState {
  double pG = 1.0, pE = 0.0, pA = 0.0, pS = 0.0;
  cplx rhoAS = 0.0;  // <A|rho|S>
  cplx rhoGE = 0.0;  // <G|rho|E>

  double trace() const { return pG + pE + pA + pS; }

  /// Smallest eigenvalue of the 4x4 matrix; it splits into the GE and AS blocks.
  double min_eigenvalue() const {
    auto block_min = [](double p, double q, cplx c) {
      return 0.5 * (p + q) - std::sqrt(0.25 * (p - q) * (p - q) + std::norm(c));
    };
    return std::min(block_min(pG, pE, rhoGE), block_min(pA, pS, rhoAS));
  }

  bool all_finite() const {
    return std::isfinite(pG) && std::isfinite(pE) && std::isfinite(pA) && std::isfinite(pS) &&
           std::isfinite(rhoAS.real()) && std::isfinite(rhoAS.imag()) && std::isfinite(rhoGE.real()) &&
           std::isfinite(rhoGE.imag());
  }

  void validate(double trace_tol = kTraceTolerance) const {
    if (!all_finite()) throw InvalidInput("initial_state: non-finite entry");
    if (std::abs(trace() - 1.0) > trace_tol) throw InvalidInput("initial_state: trace must be 1");
    if (std::min({pG, pE, pA, pS}) < -kPositivitySlack)
      throw InvalidInput("initial_state: negative population");
    if (min_eigenvalue() < -kPositivitySlack) throw InvalidInput("initial_state: matrix is not positive semidefinite");
  }

  static XState ground() { return {1.0, 0.0, 0.0, 0.0, 0.0, 0.0}; }
  static XState excited() { return {0.0, 1.0, 0.0, 0.0, 0.0, 0.0}; }
  static XState antisymmetric() { return {0.0, 0.0, 1.0, 0.0, 0.0, 0.0}; }
  static XState symmetric() { return {0.0, 0.0, 0.0, 1.0, 0.0, 0.0}; }

  /// "G", "E", "A" or "S".
  static XState preset(std::string_view name) {
    if (name == "G") return ground();
    if (name == "E") return excited();
    if (name == "A") return antisymmetric();
    if (name == "S") return symmetric();
    throw InvalidInput("initial_state: unknown preset \"" + std::string(name) + "\" (expected G, E, A or S)");
  }
};

/// Columns are |G>, |A>, |S>, |E> written in the product basis.
inline Mat4c coupled_to_product() {
  const double r = 1.0 / std::sqrt(2.0);
  Mat4c U = Mat4c::Zero();
  U(0, 0) = 1.0;
  U(1, 1) = -r;
  U(2, 1) = r;
  U(1, 2) = r;
  U(2, 2) = r;
  U(3, 3) = 1.0;
  return U;
}

/// 4x4 density matrix in the product basis.
inline Mat4c density_matrix(const XState& s) {
  Mat4c c = Mat4c::Zero();
  c(0, 0) = s.pG;
  c(1, 1) = s.pA;
  c(2, 2) = s.pS;
  c(3, 3) = s.pE;
  c(1, 2) = s.rhoAS;
  c(2, 1) = std::conj(s.rhoAS);
  c(0, 3) = s.rhoGE;
  c(3, 0) = std::conj(s.rhoGE);
  const Mat4c U = coupled_to_product();
  return U * c * U.adjoint();
}

/// Inverse of density_matrix. Rejects matrices that are not Hermitian or
/// have weight outside the X pattern beyond `tol`.
inline XState from_density_matrix(const Mat4c& rho, double tol = 1e-12) {
  if (!rho.allFinite()) throw InvalidInput("initial_state: non-finite matrix entry");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) throw InvalidInput("initial_state: matrix is not Hermitian");
  const Mat4c U = coupled_to_product();
  const Mat4c c = U.adjoint() * rho * U;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const bool x_slot = i == j || (i == 1 && j == 2) || (i == 2 && j == 1) || (i == 0 && j == 3) ||
                          (i == 3 && j == 0);
      if (!x_slot && std::abs(c(i, j)) > tol)
        throw InvalidInput("initial_state: matrix is not of X form in the coupled basis");
    }
  }
  return {c(0, 0).real(), c(3, 3).real(), c(1, 1).real(), c(2, 2).real(), c(1, 2), c(0, 3)};
}

struct KValues {
  double K1 = 0.0;
  double K2 = 0.0;
};

namespace detail {
inline double checked_sqrt(double r, const char* what) {
  if (r < -kRadicandSlack) throw NumericalFailure(std::string("concurrence: negative radicand in ") + what);
  return std::sqrt(std::max(r, 0.0));
}
}  // namespace detail

/// K1 = sqrt((pA - pS)^2 + 4 Im(rhoAS)^2) - 2 sqrt(pG pE),
/// K2 = 2 |rhoGE| - sqrt((pA + pS)^2 - 4 Re(rhoAS)^2).
inline KValues k_values(const XState& s) {
  const double im = s.rhoAS.imag(), re = s.rhoAS.real();
  KValues k;
  k.K1 = std::sqrt((s.pA - s.pS) * (s.pA - s.pS) + 4.0 * im * im) - 2.0 * detail::checked_sqrt(s.pG * s.pE, "K1");
  k.K2 = 2.0 * std::abs(s.rhoGE) - detail::checked_sqrt((s.pA + s.pS) * (s.pA + s.pS) - 4.0 * re * re, "K2");
  return k;
}

inline double concurrence_x(const XState& s) {
  const KValues k = k_values(s);
  return std::clamp(std::max({0.0, k.K1, k.K2}), 0.0, 1.0);
}

}  // namespace accent
