#pragma once

// Shared value types, unit conventions and error classes.
//
// Units: the atomic transition frequency omega and the free-space emission
// rate Gamma0 are both 1. Accelerations are a/omega, lengths omega*L and
// omega*y, times Gamma0*tau.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace accent {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat3c = Eigen::Matrix3cd;
using Mat4c = Eigen::Matrix4cd;

inline constexpr double pi = std::numbers::pi;

/// Base class of everything the library throws.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range input. Maps to CLI exit status 1.
class InvalidInput : public Error {
public:
  using Error::Error;
};

/// A numerical procedure could not certify its result. Maps to exit status 2.
class NumericalFailure : public Error {
public:
  using Error::Error;
};

/// All dissipative rates vanish: there is no unique steady state.
class DynamicsFrozen : public NumericalFailure {
public:
  DynamicsFrozen() : NumericalFailure("dynamics frozen: generator kernel is degenerate") {}
  using NumericalFailure::NumericalFailure;
};

enum class Alignment { Parallel, Vertical };

inline std::string_view to_string(Alignment a) {
  return a == Alignment::Parallel ? "parallel" : "vertical";
}

inline Alignment alignment_from_string(std::string_view s) {
  if (s == "parallel") return Alignment::Parallel;
  if (s == "vertical") return Alignment::Vertical;
  throw InvalidInput("alignment: expected \"parallel\" or \"vertical\", got \"" +
                     std::string(s) + "\"");
}

inline constexpr double kUnitDipoleTolerance = 1e-12;

/// Dimensionless physical inputs of one two-atom configuration.
///
/// Axis convention: x is the acceleration direction, y the boundary normal
/// (boundary at y = 0), z the separation direction for Parallel alignment.
/// For Vertical alignment the separation runs along y and `distance` is the
/// height of the nearer atom (atom 1).
struct PhysicalConfig {
  double accel = 0.5;       // a/omega
  double separation = 1.0;  // omega*L
  double distance = 0.5;    // omega*y
  Alignment alignment = Alignment::Parallel;
  Vec3 d1 = Vec3::UnitX();
  Vec3 d2 = Vec3::UnitX();
  bool boundary = true;     // false drops every image term (free-space companion)
  double gamma0 = 1.0;

  double y_over_L() const { return distance / separation; }

  void validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(accel) || accel < 0.0)
      throw InvalidInput("accel: must be finite and >= 0");
    if (!finite(separation) || separation <= 0.0)
      throw InvalidInput("separation: must be finite and > 0");
    if (!finite(distance) || distance <= 0.0)
      throw InvalidInput("distance: must be finite and > 0");
    if (!d1.allFinite() || std::abs(d1.norm() - 1.0) > kUnitDipoleTolerance)
      throw InvalidInput("d1: dipole orientation must be a unit vector");
    if (!d2.allFinite() || std::abs(d2.norm() - 1.0) > kUnitDipoleTolerance)
      throw InvalidInput("d2: dipole orientation must be a unit vector");
    if (gamma0 != 1.0)
      throw InvalidInput("gamma0: rates are expressed in units of Gamma0, which is fixed to 1");
  }

  PhysicalConfig without_boundary() const {
    PhysicalConfig c = *this;
    c.boundary = false;
    return c;
  }
};

/// Builds a configuration from the ratios used on every figure axis.
inline PhysicalConfig make_config(Alignment alignment, double accel, double separation,
                                  double y_over_L, const Vec3& d1, const Vec3& d2) {
  PhysicalConfig c;
  c.alignment = alignment;
  c.accel = accel;
  c.separation = separation;
  c.distance = y_over_L * separation;
  c.d1 = d1;
  c.d2 = d2;
  return c;
}

}  // namespace accent
