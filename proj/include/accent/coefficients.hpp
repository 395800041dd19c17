#pragma once

// Closed-form field spectra and the six master-equation rates A1..A3, B1..B3.
//
// Every tensor T below is normalized so that the spectral function of the
// pair (alpha, beta) is
//   G(+omega) = T / (3 pi (1 - exp(-2 pi / a))),
//   G(-omega) = T / (3 pi (exp(2 pi / a) - 1)),
// with omega = 1. The total tensor is free part minus boundary part.
//
// The closed forms lose about 1/R^3 to 1/R^5 of their precision to
// cancellation as the source-image distance R shrinks, so they are evaluated
// in long double.

#include "accent/types.hpp"

#include <array>
#include <cmath>
#include <string>

namespace accent {

enum class TensorKind { FSingle, FCross, HSelf, HCross, GVertical, SVertical };

inline std::string_view to_string(TensorKind k) {
  switch (k) {
    case TensorKind::FSingle: return "f_single";
    case TensorKind::FCross: return "f_cross";
    case TensorKind::HSelf: return "h_self";
    case TensorKind::HCross: return "h_cross";
    case TensorKind::GVertical: return "g_vertical";
    default: return "s_vertical";
  }
}

struct CorrelationTensor {
  Mat3 entries = Mat3::Zero();
  TensorKind kind = TensorKind::FSingle;

  double operator()(int m, int n) const { return entries(m, n); }
};

enum class Provenance { ClosedForm, NearBoundaryExpansion, Oracle };

inline std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::ClosedForm: return "closed_form";
    case Provenance::NearBoundaryExpansion: return "near_boundary_expansion";
    default: return "oracle";
  }
}

struct CoefficientSet {
  double A1 = 0, A2 = 0, A3 = 0;
  double B1 = 0, B2 = 0, B3 = 0;
  Provenance provenance = Provenance::ClosedForm;

  std::array<double, 6> values() const { return {A1, A2, A3, B1, B2, B3}; }
  bool all_finite() const {
    for (double v : values())
      if (!std::isfinite(v)) return false;
    return true;
  }
  CoefficientSet scaled(double k) const {
    CoefficientSet c = *this;
    c.A1 *= k; c.A2 *= k; c.A3 *= k;
    c.B1 *= k; c.B2 *= k; c.B3 *= k;
    return c;
  }
};

/// coth(pi/a), 1 at a = 0.
inline double thermal_coth(double a) { return a == 0.0 ? 1.0 : 1.0 / std::tanh(pi / a); }
/// tanh(pi/a), 1 at a = 0.
inline double thermal_tanh(double a) { return a == 0.0 ? 1.0 : std::tanh(pi / a); }

namespace detail {

// Phase accumulated between two points a proper distance R apart on
// neighbouring Rindler orbits: (2/a) asinh(a R / 2), R at a = 0.
template <class Real>
Real rindler_phase(Real a, Real R) {
  if (a == 0) return R;
  return Real(2) / a * std::asinh(a * R / Real(2));
}

template <class Real>
using M3 = Eigen::Matrix<Real, 3, 3>;

template <class Real>
M3<Real> h_cross_raw(Real a, Real y, Real L) {
  using std::cos;
  using std::pow;
  using std::sin;
  using std::sqrt;
  const Real R = sqrt(L * L + 4 * y * y);
  const Real a2 = a * a, R2 = R * R, L2 = L * L, y2 = y * y;
  const Real q = sqrt(4 + a2 * R2);
  const Real ph = rindler_phase(a, R);
  const Real c = cos(ph), s = sin(ph);
  const Real den5 = pow(4 + a2 * R2, Real(2.5));
  const Real R3 = R2 * R, R5 = R3 * R2;
  const Real common = 4 + R2 * (4 + 4 * a2 + a2 * R2);  // omega = 1

  M3<Real> h;
  h(0, 0) = 12 / (R3 * den5) *
            (2 * R * q * (1 + a2 * R2) * c + (-4 - R2 * (2 * a2 + a2 * a2 * R2 - 4 - a2 * R2)) * s);
  const Real P = 4 * L2 + a2 * L2 * L2 - 16 * a2 * y2 * y2;
  h(1, 1) = 3 / (R5 * den5) *
            (-R * q * ((2 + a2 * R2) * P - 64 * y2) * c -
             (64 * (2 + a2 * L2) * y2 + 320 * a2 * y2 * y2 - 4 * L2 * (4 + a2 * L2) + R2 * (4 + a2 * R2) * P) * s);
  h(2, 2) = 3 / (R5 * den5) *
            ((20 * a2 * L2 * L2 + 32 * L2 * (1 + 2 * a2 * y2) - 64 * y2 * (1 + a2 * y2) +
              (4 + a2 * R2) * (16 * y2 - a2 * L2 * L2 + 16 * a2 * y2 * y2) * R2) * s +
             R * q *
                 (-a2 * a2 * L2 * L2 * L2 - 2 * L2 * L2 * (a2 + 2 * a2 * a2 * y2) +
                  16 * L2 * (a2 * y2 + a2 * a2 * y2 * y2 - 1) + 32 * (y2 + 3 * a2 * y2 * y2 + 2 * a2 * a2 * y2 * y2 * y2)) *
                 c);
  h(0, 1) = h(1, 0) = -12 * a * y / (R3 * den5) * (R * q * (a2 * R2 - 2) * c + common * s);
  h(0, 2) = -6 * a * L / (R3 * den5) * (R * q * (-2 + a2 * R2) * c + common * s);
  h(2, 0) = -h(0, 2);
  h(1, 2) = 12 * L * y / (R5 * den5) *
            ((2 + a2 * R2) * (R2 * (4 + a2 * R2) - 12) * s + R * q * (12 + 4 * a2 * R2 + a2 * a2 * R2 * R2) * c);
  h(2, 1) = -h(1, 2);
  return h;
}

template <class Real>
M3<Real> f_cross_raw(Real a, Real L) {
  M3<Real> f = h_cross_raw<Real>(a, Real(0), L);
  f(1, 1) = -f(1, 1);
  f(0, 1) = f(1, 0) = f(1, 2) = f(2, 1) = 0;
  return f;
}

template <class Real>
M3<Real> h_self_raw(Real a, Real y) {
  const M3<Real> f = f_cross_raw<Real>(a, 2 * y);
  M3<Real> h = M3<Real>::Zero();
  h(0, 0) = f(0, 0);
  h(1, 1) = -f(2, 2);
  h(2, 2) = f(1, 1);
  h(0, 1) = h(1, 0) = f(0, 2);
  return h;
}

inline Mat3 narrow(const M3<long double>& m) { return m.cast<double>(); }

inline void require_positive(double v, const char* name) {
  if (!std::isfinite(v) || !(v > 0.0)) throw InvalidInput(std::string(name) + ": must be finite and > 0");
}
inline void require_accel(double a) {
  if (!std::isfinite(a) || a < 0.0) throw InvalidInput("accel: must be finite and >= 0");
}

}  // namespace detail

/// delta_mn (1 + a^2).
inline CorrelationTensor f_single(double a) {
  detail::require_accel(a);
  return {Mat3::Identity() * (1.0 + a * a), TensorKind::FSingle};
}

/// Boundary correction between two atoms at equal height y, separated by L
/// along z. Atom 1 carries the first index.
inline CorrelationTensor h_cross_parallel(double a, double y, double L) {
  detail::require_accel(a);
  detail::require_positive(y, "distance");
  detail::require_positive(L, "separation");
  return {detail::narrow(detail::h_cross_raw<long double>(a, y, L)), TensorKind::HCross};
}

/// Free-space cross tensor at separation L (z-directed).
inline CorrelationTensor f_cross(double a, double L) {
  detail::require_accel(a);
  detail::require_positive(L, "separation");
  return {detail::narrow(detail::f_cross_raw<long double>(a, L)), TensorKind::FCross};
}

/// Single-atom boundary tensor at height y (image at distance 2y).
inline CorrelationTensor h_self(double a, double y) {
  detail::require_accel(a);
  detail::require_positive(y, "distance");
  return {detail::narrow(detail::h_self_raw<long double>(a, y)), TensorKind::HSelf};
}

struct VerticalTensors {
  CorrelationTensor g_self1, g_self2, g_cross;
  CorrelationTensor s_self1, s_self2, s_cross;
};

/// Atoms stacked along the boundary normal: atom 1 at height y, atom 2 at y + L.
inline VerticalTensors tensors_vertical(double a, double y, double L) {
  detail::require_accel(a);
  detail::require_positive(y, "distance");
  detail::require_positive(L, "separation");
  VerticalTensors v;
  v.g_self1 = v.g_self2 = {f_single(a).entries, TensorKind::GVertical};
  const Mat3 f = f_cross(a, L).entries;
  Mat3 g = Mat3::Zero();
  g(0, 0) = f(0, 0);
  g(1, 1) = f(2, 2);
  g(2, 2) = f(1, 1);
  g(0, 1) = f(0, 2);
  g(1, 0) = f(2, 0);
  v.g_cross = {g, TensorKind::GVertical};
  v.s_self1 = {h_self(a, y).entries, TensorKind::SVertical};
  v.s_self2 = {h_self(a, y + L).entries, TensorKind::SVertical};
  v.s_cross = {h_self(a, y + 0.5 * L).entries, TensorKind::SVertical};
  return v;
}

/// Free and boundary tensors of the three atom pairs (1,1), (2,2), (1,2).
/// The (2,1) tensors are the transposes of the (1,2) ones.
struct PairTensors {
  Mat3 free_self1, free_self2, free_cross;
  Mat3 bound_self1, bound_self2, bound_cross;
  bool boundary = true;

  Mat3 total_self1() const { return boundary ? Mat3(free_self1 - bound_self1) : free_self1; }
  Mat3 total_self2() const { return boundary ? Mat3(free_self2 - bound_self2) : free_self2; }
  Mat3 total_cross() const { return boundary ? Mat3(free_cross - bound_cross) : free_cross; }
};

inline PairTensors pair_tensors(const PhysicalConfig& c) {
  c.validate();
  PairTensors t;
  t.boundary = c.boundary;
  if (c.alignment == Alignment::Parallel) {
    t.free_self1 = t.free_self2 = f_single(c.accel).entries;
    t.free_cross = f_cross(c.accel, c.separation).entries;
    t.bound_self1 = t.bound_self2 = h_self(c.accel, c.distance).entries;
    t.bound_cross = h_cross_parallel(c.accel, c.distance, c.separation).entries;
  } else {
    const VerticalTensors v = tensors_vertical(c.accel, c.distance, c.separation);
    t.free_self1 = v.g_self1.entries;
    t.free_self2 = v.g_self2.entries;
    t.free_cross = v.g_cross.entries;
    t.bound_self1 = v.s_self1.entries;
    t.bound_self2 = v.s_self2.entries;
    t.bound_cross = v.s_cross.entries;
  }
  return t;
}

/// Closed-form spectral tensors G(+omega), G(-omega) of the pair (alpha, beta),
/// split the same way the Fourier oracle splits them: free part and image
/// part (image = -boundary tensor times the thermal prefactor).
struct ClosedFormSpectrum {
  Mat3 free_plus, free_minus, image_plus, image_minus;
  bool boundary = true;
  Mat3 total_plus() const { return boundary ? Mat3(free_plus + image_plus) : free_plus; }
  Mat3 total_minus() const { return boundary ? Mat3(free_minus + image_minus) : free_minus; }
};

/// Emission-side prefactor 1/(3 pi (1 - e^{-2 pi/a})).
inline double emission_prefactor(double a) {
  return a == 0.0 ? 1.0 / (3.0 * pi) : 1.0 / (3.0 * pi * -std::expm1(-2.0 * pi / a));
}
/// Absorption-side prefactor 1/(3 pi (e^{2 pi/a} - 1)), 0 at a = 0.
inline double absorption_prefactor(double a) {
  return a == 0.0 ? 0.0 : 1.0 / (3.0 * pi * std::expm1(2.0 * pi / a));
}

inline ClosedFormSpectrum spectral_closed_form(const PhysicalConfig& c, int alpha, int beta) {
  if (alpha < 1 || alpha > 2 || beta < 1 || beta > 2) throw InvalidInput("atom pair indices must be 1 or 2");
  const PairTensors t = pair_tensors(c);
  Mat3 f, h;
  if (alpha == 1 && beta == 1) {
    f = t.free_self1; h = t.bound_self1;
  } else if (alpha == 2 && beta == 2) {
    f = t.free_self2; h = t.bound_self2;
  } else if (alpha == 1) {
    f = t.free_cross; h = t.bound_cross;
  } else {
    f = t.free_cross.transpose(); h = t.bound_cross.transpose();
  }
  const double up = emission_prefactor(c.accel);
  const double down = absorption_prefactor(c.accel);
  return {up * f, down * f, -up * h, -down * h, c.boundary};
}

/// The six rates from the closed-form tensors.
inline CoefficientSet assemble(const PhysicalConfig& c) {
  const PairTensors t = pair_tensors(c);
  const double k = 0.25 * c.gamma0 * thermal_coth(c.accel);
  const double th = thermal_tanh(c.accel);
  CoefficientSet out;
  out.A1 = k * c.d1.dot(t.total_self1() * c.d1);
  out.A2 = k * c.d2.dot(t.total_self2() * c.d2);
  out.A3 = k * c.d1.dot(t.total_cross() * c.d2);
  out.B1 = out.A1 * th;
  out.B2 = out.A2 * th;
  out.B3 = out.A3 * th;
  out.provenance = Provenance::ClosedForm;
  if (!out.all_finite()) throw NumericalFailure("assemble: non-finite coefficient");
  return out;
}

/// Leading small-y/L forms of the rates: the parallel set keeps only the
/// boundary-normal dipole components, the vertical set also keeps the
/// x-y mixing of the far atom.
inline CoefficientSet near_boundary_expansion(const PhysicalConfig& c) {
  c.validate();
  const double a = c.accel, L = c.separation;
  const double ct = thermal_coth(a);
  const double aL = a * L;
  const double y1 = c.d1.y();
  const double x2 = c.d2.x(), y2 = c.d2.y(), z2 = c.d2.z();

  CoefficientSet out;
  out.provenance = Provenance::NearBoundaryExpansion;
  out.A1 = ct / 2.0 * y1 * y1 * (a * a + 1.0);

  if (c.alignment == Alignment::Parallel) {
    out.A2 = ct / 2.0 * y2 * y2 * (a * a + 1.0);
    const double ph = detail::rindler_phase(a, L);
    out.A3 = 3.0 * ct / (2.0 * L * L * L * std::pow(4.0 + aL * aL, 1.5)) * y1 * y2 *
             (L * std::sqrt(4.0 + aL * aL) * (2.0 + aL * aL) * std::cos(ph) +
              (-4.0 + L * L * (4.0 + aL * aL)) * std::sin(ph));
  } else {
    const double aL2 = aL * aL, aL4 = aL2 * aL2, a2 = a * a, L4 = L * L * L * L;
    double ph = detail::rindler_phase(a, 2.0 * L);
    double cs = std::cos(ph), sn = std::sin(ph);
    out.A2 = -3.0 * ct / (64.0 * L * L * L * std::pow(1.0 + aL2, 2.5)) *
                 (2.0 * L * std::sqrt(1.0 + aL2) *
                      (x2 * x2 * (1.0 + 4.0 * aL2) + z2 * z2 * (1.0 + 2.0 * aL2) * (1.0 + aL2) +
                       y2 * y2 * (2.0 + aL2 + 2.0 * aL4) - 2.0 * x2 * y2 * aL * (2.0 * aL2 - 1.0)) *
                      cs -
                  (x2 * x2 * (1.0 + 2.0 * aL2 + 4.0 * aL4 - 4.0 * L * L - 4.0 * a2 * L4) +
                   z2 * z2 * (1.0 - 4.0 * L * L - 4.0 * a2 * L4) * (1.0 + aL2) +
                   y2 * y2 * (2.0 + 5.0 * aL2 - 4.0 * a2 * L4 - 4.0 * a2 * a2 * L4 * L * L) +
                   2.0 * aL * x2 * y2 * (1.0 + 4.0 * aL2 + 4.0 * L * L + 4.0 * a2 * L4)) *
                      sn) +
             ct / 4.0 * (a2 + 1.0);
    ph = detail::rindler_phase(a, L);
    cs = std::cos(ph);
    sn = std::sin(ph);
    out.A3 = -3.0 * ct / (2.0 * L * L * L * std::pow(4.0 + aL2, 2.5)) *
             (L * std::sqrt(4.0 + aL2) *
                  (y1 * y2 * (16.0 + 2.0 * aL2 + aL4) - 2.0 * aL * y1 * x2 * (aL2 - 2.0)) * cs -
              (2.0 * aL * y1 * x2 * (4.0 + 4.0 * L * L + 4.0 * aL2 + a2 * L4) +
               y1 * y2 * (32.0 + 20.0 * aL2 - 4.0 * a2 * L4 - a2 * a2 * L4 * L * L)) *
                  sn);
  }
  const double th = thermal_tanh(a);
  out.B1 = out.A1 * th;
  out.B2 = out.A2 * th;
  out.B3 = out.A3 * th;
  return out;
}

}  // namespace accent
