#pragma once

// Electric-field two-point functions along uniformly accelerated orbits near
// a perfectly conducting plane at y = 0, and a numerical Fourier transform of
// them that serves as an independent check on the closed-form coefficients.
//
// Fields are measured in the atoms' comoving frame, E_m = F_{mu nu} e_m^mu u^nu,
// with tetrad u = (cosh a tau, sinh a tau, 0, 0) and spatial axes
// e_1 = -(sinh a tau, cosh a tau, 0, 0), e_2 = y-hat, e_3 = z-hat. Axis 1 points
// against the acceleration; this is the orientation in which the closed forms
// of the coefficients module are written (it fixes the sign of every
// component odd in a).
//
// The Wightman regulator is applied as a shift of proper time,
// tau - tau' -> tau - tau' - i*eps, which keeps the regulated correlator
// stationary along the orbit.

#include "accent/quadrature.hpp"
#include "accent/types.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace accent {

using Vec4c = Eigen::Matrix<cplx, 4, 1>;

inline constexpr double kAxis1Orientation = -1.0;

/// Proper acceleration and (possibly complex) proper time of an orbit point.
/// For a > 0, t = sinh(a tau)/a and x = cosh(a tau)/a, so x^2 - t^2 = 1/a^2;
/// a = 0 is the straight worldline t = tau, x = 0.
struct TrajectoryParams {
  double accel = 0.0;
  cplx tau = 0.0;

  cplx t() const { return accel == 0.0 ? tau : std::sinh(accel * tau) / accel; }
  cplx x() const { return accel == 0.0 ? cplx(0.0) : std::cosh(accel * tau) / accel; }
  Vec4c velocity() const {
    if (accel == 0.0) return Vec4c(1.0, 0.0, 0.0, 0.0);
    return Vec4c(std::cosh(accel * tau), std::sinh(accel * tau), 0.0, 0.0);
  }
  /// Comoving spatial axis m in {1, 2, 3}.
  Vec4c axis(int m) const {
    switch (m) {
      case 1:
        if (accel == 0.0) return Vec4c(0.0, kAxis1Orientation, 0.0, 0.0);
        return kAxis1Orientation * Vec4c(std::sinh(accel * tau), std::cosh(accel * tau), 0.0, 0.0);
      case 2: return Vec4c(0.0, 0.0, 1.0, 0.0);
      default: return Vec4c(0.0, 0.0, 0.0, 1.0);
    }
  }
};

enum class KernelKind { FreeSpace, BoundaryImage };

/// Transverse placement of the two field points: heights y (unprimed point)
/// and y_prime (primed point) above the plane, and z - z'.
struct Geometry {
  double y = 1.0;
  double y_prime = 1.0;
  double dz = 0.0;
};

struct CorrelationKernel {
  KernelKind kind = KernelKind::FreeSpace;
  Geometry geometry;
  double epsilon = 1e-3;
};

/// Minkowski product with signature (+,-,-,-); bilinear, no conjugation.
inline cplx mdot(const Vec4c& v, const Vec4c& w) {
  return v[0] * w[0] - v[1] * w[1] - v[2] * w[2] - v[3] * w[3];
}

namespace detail {

// Separation X(tau1) - X(tau2) on two orbits of the same acceleration, using
// product forms that do not cancel at large tau.
inline Vec4c orbit_separation(double a, cplx tau1, cplx tau2, double dy, double dz) {
  if (a == 0.0) return Vec4c(tau1 - tau2, 0.0, dy, dz);
  const cplx mean = 0.5 * a * (tau1 + tau2);
  const cplx half = std::sinh(0.5 * a * (tau1 - tau2));
  return Vec4c(2.0 / a * std::cosh(mean) * half, 2.0 / a * std::sinh(mean) * half, dy, dz);
}

// Free-space <E_m(X1) E_n(X2)> for comoving observers, contracted from
// <F_{mu nu} F'_{rho sigma}> with D_{nu sigma} = eta_{nu sigma} Phi and
// Phi = -1/(4 pi^2 sigma), sigma = -(X1-X2).(X1-X2). The second derivative
// d_mu d'_rho Phi = (2 eta_{mu rho} sigma^-2 + 8 Delta_mu Delta_rho sigma^-3)/(4 pi^2).
inline Mat3c contract_free(const Vec4c& delta, const TrajectoryParams& p1, const TrajectoryParams& p2) {
  const cplx sigma = -mdot(delta, delta);
  const cplx s2 = 1.0 / (sigma * sigma);
  const cplx s3 = s2 / sigma;
  const double norm = 1.0 / (4.0 * pi * pi);

  const Vec4c u1 = p1.velocity();
  const Vec4c u2 = p2.velocity();
  std::array<Vec4c, 3> e1{p1.axis(1), p1.axis(2), p1.axis(3)};
  std::array<Vec4c, 3> e2{p2.axis(1), p2.axis(2), p2.axis(3)};

  auto K = [&](const Vec4c& v, const Vec4c& w) {
    return norm * (2.0 * mdot(v, w) * s2 + 8.0 * mdot(delta, v) * mdot(delta, w) * s3);
  };
  const cplx uu = mdot(u1, u2);
  const cplx Kuu = K(u1, u2);

  Mat3c out;
  for (int m = 0; m < 3; ++m) {
    for (int n = 0; n < 3; ++n) {
      out(m, n) = uu * K(e1[m], e2[n]) - mdot(u1, e2[n]) * K(e1[m], u2) -
                  mdot(e1[m], u2) * K(u1, e2[n]) + mdot(e1[m], e2[n]) * Kuu;
    }
  }
  return out;
}

}  // namespace detail

namespace detail {

inline void check_kernel(const CorrelationKernel& kernel, double accel) {
  if (!(kernel.epsilon > 0.0)) throw InvalidInput("epsilon: regulator must be > 0");
  if (!(accel >= 0.0)) throw InvalidInput("accel: must be >= 0");
}

// The image kernel equals minus the free kernel between the point and the
// mirror image of the primed point, with the primed y-axis reversed
// (-(eta + 2 n n) on the vector potential).
inline Mat3c correlate(const CorrelationKernel& kernel, const TrajectoryParams& p1, const TrajectoryParams& p2) {
  const Geometry& g = kernel.geometry;
  const double a = p1.accel;
  if (kernel.kind == KernelKind::FreeSpace)
    return contract_free(orbit_separation(a, p1.tau, p2.tau, g.y - g.y_prime, g.dz), p1, p2);
  Mat3c c = contract_free(orbit_separation(a, p1.tau, p2.tau, g.y + g.y_prime, g.dz), p1, p2);
  c.col(0) *= -1.0;
  c.col(2) *= -1.0;
  return c;
}

}  // namespace detail

/// Full 3x3 tensor <E_m(x(tau)) E_n(x'(tau'))> for the requested kernel.
inline Mat3c electric_correlation_tensor(const CorrelationKernel& kernel, double tau, double tau_prime,
                                         double accel) {
  detail::check_kernel(kernel, accel);
  return detail::correlate(kernel, {accel, cplx(tau, -kernel.epsilon)}, {accel, cplx(tau_prime, 0.0)});
}

/// Same tensor as a function of dtau = tau - tau' only, evaluated at the
/// proper times +-(dtau - i eps)/2 where the midpoint of the two events is at
/// rest. Lab components there stay O(exp(a |dtau| / 2)) instead of
/// O(exp(a |tau|)), so far tails do not cancel catastrophically.
inline Mat3c electric_correlation_stationary(const CorrelationKernel& kernel, double dtau, double accel) {
  detail::check_kernel(kernel, accel);
  const cplx half = 0.5 * cplx(dtau, -kernel.epsilon);
  return detail::correlate(kernel, {accel, half}, {accel, -half});
}

/// Single component, m and n in {1, 2, 3}.
inline cplx electric_correlation(const CorrelationKernel& kernel, int m, int n, double tau, double tau_prime,
                                 double accel) {
  if (m < 1 || m > 3 || n < 1 || n > 3) throw InvalidInput("axis index must be 1, 2 or 3");
  return electric_correlation_tensor(kernel, tau, tau_prime, accel)(m - 1, n - 1);
}

/// Scalar part of the vector-potential two-point function, D_{nu sigma} =
/// coefficient(nu, sigma) * value, between arbitrary complex lab points.
/// The Fourier-space code never uses this; it is the raw kernel that the
/// closed-form derivatives above are checked against.
inline cplx potential_correlation(KernelKind kind, int nu, int sigma, const Vec4c& x, const Vec4c& xp) {
  if (nu != sigma) return 0.0;
  Vec4c d = x - xp;
  double coeff = (nu == 0) ? 1.0 : -1.0;
  if (kind == KernelKind::BoundaryImage) {
    d[2] = x[2] + xp[2];
    // -(eta + 2 n n), n = (0, 0, 1, 0)
    coeff = (nu == 2) ? -1.0 : -coeff;
  }
  const cplx interval = d[0] * d[0] - d[1] * d[1] - d[2] * d[2] - d[3] * d[3];
  return coeff / (4.0 * pi * pi * interval);
}

// ---------------------------------------------------------------------------
// Fourier oracle
// ---------------------------------------------------------------------------

struct QuadratureSettings {
  std::array<double, 3> epsilons{4e-3, 2e-3, 1e-3};  // decreasing, constant ratio
  double window_factor = 40.0;    // |dtau| <= window_factor / a  (or / omega when a = 0)
  double tolerance = 1e-3;        // relative bound on extrapolation error and tail
  quad::Options quadrature{1e-10, 1e-9, 6000};
};

/// Ordered pair of atoms (1 or 2): first index belongs to E_m at tau.
struct AtomPair {
  int alpha = 1;
  int beta = 1;
};

enum class OracleStatus { Converged, ExtrapolationDisagreement, WindowTruncation, QuadratureLimit };

inline std::string to_string(OracleStatus s) {
  switch (s) {
    case OracleStatus::Converged: return "converged";
    case OracleStatus::ExtrapolationDisagreement: return "eps-extrapolation disagreement";
    case OracleStatus::WindowTruncation: return "window truncation";
    default: return "quadrature subdivision limit";
  }
}

/// Spectral tensors G_mn(+omega0) and G_mn(-omega0), split into free-space
/// and image contributions, extrapolated to eps -> 0.
struct OracleSpectrum {
  Mat3 free_plus = Mat3::Zero();
  Mat3 free_minus = Mat3::Zero();
  Mat3 image_plus = Mat3::Zero();
  Mat3 image_minus = Mat3::Zero();
  bool boundary = true;

  double extrapolation_error = 0.0;  // max |R2 - R1| over components
  double quadrature_error = 0.0;
  double tail_estimate = 0.0;
  double max_imaginary = 0.0;        // imaginary remainder after extrapolation
  double window = 0.0;
  int evaluations = 0;
  OracleStatus status = OracleStatus::Converged;

  Mat3 total_plus() const { return boundary ? Mat3(free_plus + image_plus) : free_plus; }
  Mat3 total_minus() const { return boundary ? Mat3(free_minus + image_minus) : free_minus; }
  bool converged() const { return status == OracleStatus::Converged; }
};

/// Heights and z offset of atom alpha for a configuration.
inline Vec3 atom_position(const PhysicalConfig& c, int alpha) {
  if (alpha == 1) return Vec3(0.0, c.distance, 0.0);
  if (c.alignment == Alignment::Parallel) return Vec3(0.0, c.distance, c.separation);
  return Vec3(0.0, c.distance + c.separation, 0.0);
}

inline Geometry pair_geometry(const PhysicalConfig& c, AtomPair pair) {
  const Vec3 r1 = atom_position(c, pair.alpha);
  const Vec3 r2 = atom_position(c, pair.beta);
  return Geometry{r1.y(), r2.y(), r1.z() - r2.z()};
}

/// Proper time at which a transverse separation d is light-like on the orbit.
inline double lightcone_time(double accel, double d) {
  return accel == 0.0 ? d : 2.0 / accel * std::asinh(0.5 * accel * d);
}

namespace detail {

inline std::vector<double> oracle_knots(double accel, const Geometry& g, double eps, double window) {
  std::vector<double> singular;
  const double d_free = std::hypot(g.y - g.y_prime, g.dz);
  const double d_image = std::hypot(g.y + g.y_prime, g.dz);
  for (double d : {d_free, d_image}) {
    const double t = lightcone_time(accel, d);
    singular.push_back(t);
    singular.push_back(-t);
  }
  std::vector<double> knots{-window, window};
  for (double s : singular) {
    knots.push_back(s);
    for (double off = eps; off <= 1.0; off *= 2.0) {
      knots.push_back(s - off);
      knots.push_back(s + off);
    }
  }
  std::erase_if(knots, [&](double k) { return k < -window || k > window; });
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  return knots;
}

}  // namespace detail

/// Numerically Fourier-transforms <E_m E_n> for the pair over a truncated
/// window at each eps of the sequence, then Richardson-extrapolates to
/// eps -> 0. Both image and free parts are always computed;
/// `config.boundary` only decides what total_plus/total_minus include.
inline OracleSpectrum fourier_oracle_spectrum(const PhysicalConfig& config, AtomPair pair, double omega0 = 1.0,
                                              const QuadratureSettings& q = {}) {
  config.validate();
  if (pair.alpha < 1 || pair.alpha > 2 || pair.beta < 1 || pair.beta > 2)
    throw InvalidInput("atom pair indices must be 1 or 2");
  const double w = std::abs(omega0);
  if (!(w > 0.0)) throw InvalidInput("omega0 must be nonzero");
  for (std::size_t i = 0; i < q.epsilons.size(); ++i) {
    if (!(q.epsilons[i] > 0.0)) throw InvalidInput("epsilon sequence must be positive");
    if (i > 0 && !(q.epsilons[i] < q.epsilons[i - 1])) throw InvalidInput("epsilon sequence must decrease");
  }

  const double a = config.accel;
  const Geometry g = pair_geometry(config, pair);
  double window = a > 0.0 ? q.window_factor / a : q.window_factor / w;
  window = std::max(window, 2.0 * lightcone_time(a, std::hypot(g.y + g.y_prime, g.dz)) + 0.5 * q.window_factor);

  // Layout: [free(+w), image(+w), free(-w), image(-w)], 9 entries each, column-major.
  using V36 = Eigen::Matrix<cplx, 36, 1>;
  auto sample = [&](double s, double eps) {
    const Mat3c f = electric_correlation_stationary({KernelKind::FreeSpace, g, eps}, s, a);
    const Mat3c h = electric_correlation_stationary({KernelKind::BoundaryImage, g, eps}, s, a);
    const cplx up = std::exp(cplx(0.0, w * s));
    const cplx down = std::conj(up);
    V36 v;
    for (int k = 0; k < 9; ++k) {
      const cplx fk = f.data()[k];
      const cplx hk = h.data()[k];
      v[k] = up * fk;
      v[9 + k] = up * hk;
      v[18 + k] = down * fk;
      v[27 + k] = down * hk;
    }
    return v;
  };

  OracleSpectrum out;
  out.boundary = config.boundary;
  out.window = window;

  std::array<V36, 3> raw;
  bool subdivision_ok = true;
  for (std::size_t i = 0; i < 3; ++i) {
    const double eps = q.epsilons[i];
    const std::vector<double> knots = detail::oracle_knots(a, g, eps, window);
    auto r = quad::integrate<36>([&](double s) { return sample(s, eps); }, knots, q.quadrature);
    raw[i] = r.value;
    out.quadrature_error = std::max(out.quadrature_error, r.error);
    out.evaluations += r.evaluations;
    subdivision_ok = subdivision_ok && r.converged;
  }

  // Richardson on G(eps) = G0 + c1 eps + c2 eps^2 + ...
  const double r = q.epsilons[0] / q.epsilons[1];
  const V36 r1_coarse = (r * raw[1] - raw[0]) / (r - 1.0);
  const V36 r1_fine = (r * raw[2] - raw[1]) / (r - 1.0);
  const V36 r2 = (r * r * r1_fine - r1_coarse) / (r * r - 1.0);
  out.extrapolation_error = (r2 - r1_fine).cwiseAbs().maxCoeff();

  auto block = [&](int offset) {
    Mat3 m;
    for (int k = 0; k < 9; ++k) m.data()[k] = r2[offset + k].real();
    return m;
  };
  out.free_plus = block(0);
  out.image_plus = block(9);
  out.free_minus = block(18);
  out.image_minus = block(27);
  for (int k = 0; k < 36; ++k) out.max_imaginary = std::max(out.max_imaginary, std::abs(r2[k].imag()));

  // Tail beyond the window: the correlator decays at least like exp(-a|s|)
  // for a > 0 and like s^-4 for inertial orbits.
  double edge = 0.0;
  for (double s : {-window, window}) {
    const Mat3c f = electric_correlation_stationary({KernelKind::FreeSpace, g, q.epsilons[2]}, s, a);
    const Mat3c h = electric_correlation_stationary({KernelKind::BoundaryImage, g, q.epsilons[2]}, s, a);
    edge = std::max({edge, f.cwiseAbs().maxCoeff(), h.cwiseAbs().maxCoeff()});
  }
  out.tail_estimate = 2.0 * edge * (a > 0.0 ? 1.0 / a : window / 3.0);

  const double scale = std::max(out.free_plus.cwiseAbs().maxCoeff(), out.image_plus.cwiseAbs().maxCoeff());
  if (out.tail_estimate > q.tolerance * scale) {
    out.status = OracleStatus::WindowTruncation;
  } else if (out.extrapolation_error > q.tolerance * scale) {
    out.status = OracleStatus::ExtrapolationDisagreement;
  } else if (!subdivision_ok && out.quadrature_error > q.tolerance * scale) {
    out.status = OracleStatus::QuadratureLimit;
  }
  return out;
}

/// One component G_mn^{(alpha beta)}(omega0) of the total spectrum (free part
/// plus image part when config.boundary is set). Negative omega0 selects the
/// absorption side. Throws NumericalFailure when the oracle cannot certify
/// its value.
inline double fourier_oracle(const PhysicalConfig& config, AtomPair pair, int m, int n, double omega0,
                             const QuadratureSettings& q = {}) {
  if (m < 1 || m > 3 || n < 1 || n > 3) throw InvalidInput("axis index must be 1, 2 or 3");
  const OracleSpectrum s = fourier_oracle_spectrum(config, pair, omega0, q);
  if (!s.converged()) throw NumericalFailure("fourier oracle: " + to_string(s.status));
  const Mat3 t = omega0 > 0.0 ? s.total_plus() : s.total_minus();
  return t(m - 1, n - 1);
}

}  // namespace accent
