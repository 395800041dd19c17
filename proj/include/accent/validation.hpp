#pragma once

// Cross-check of the closed-form spectra against the numerical Fourier
// oracle, and rates rebuilt from oracle spectra.

#include "accent/coefficients.hpp"
#include "accent/field_correlations.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <tuple>
#include <utility>
#include <vector>

namespace accent {

inline constexpr double kOracleAgreement = 1e-2;

struct PairCheck {
  AtomPair pair;
  double error_plus = 0.0;   // max |oracle - closed| over components, G(+omega)
  double error_minus = 0.0;  // same for G(-omega)
  double scale = 0.0;        // max |closed G(+omega)|
  OracleStatus status = OracleStatus::Converged;

  /// Both sides measured against the emission-side scale; the absorption
  /// side is suppressed by exp(-2 pi / a) and has no scale of its own.
  double relative_error() const { return scale > 0.0 ? std::max(error_plus, error_minus) / scale : 0.0; }
};

struct OracleCheck {
  PhysicalConfig config;
  std::vector<PairCheck> pairs;

  double max_relative_error() const {
    double e = 0.0;
    for (const auto& p : pairs) e = std::max(e, p.relative_error());
    return e;
  }
  bool converged() const {
    return std::all_of(pairs.begin(), pairs.end(), [](const PairCheck& p) { return p.status == OracleStatus::Converged; });
  }
  bool passed(double tol = kOracleAgreement) const { return converged() && max_relative_error() <= tol; }
};

inline OracleCheck check_against_oracle(const PhysicalConfig& c, const QuadratureSettings& q = {}) {
  OracleCheck out;
  out.config = c;
  for (AtomPair pair : {AtomPair{1, 1}, AtomPair{2, 2}, AtomPair{1, 2}, AtomPair{2, 1}}) {
    const OracleSpectrum o = fourier_oracle_spectrum(c, pair, 1.0, q);
    const ClosedFormSpectrum cf = spectral_closed_form(c, pair.alpha, pair.beta);
    PairCheck pc;
    pc.pair = pair;
    pc.status = o.status;
    pc.scale = cf.total_plus().cwiseAbs().maxCoeff();
    pc.error_plus = (o.total_plus() - cf.total_plus()).cwiseAbs().maxCoeff();
    pc.error_minus = (o.total_minus() - cf.total_minus()).cwiseAbs().maxCoeff();
    out.pairs.push_back(pc);
  }
  return out;
}

/// Rates from oracle spectra: A = (3 pi / 4) d.(G(+) + G(-)).d',
/// B = (3 pi / 4) d.(G(+) - G(-)).d'.
inline CoefficientSet oracle_coefficients(const PhysicalConfig& c, const QuadratureSettings& q = {}) {
  auto spectrum = [&](AtomPair p) {
    const OracleSpectrum s = fourier_oracle_spectrum(c, p, 1.0, q);
    if (!s.converged()) throw NumericalFailure("fourier oracle: " + to_string(s.status));
    return s;
  };
  const double k = 0.75 * pi * c.gamma0;
  auto rates = [&](const OracleSpectrum& s, const Vec3& u, const Vec3& v) {
    return std::pair{k * u.dot((s.total_plus() + s.total_minus()) * v), k * u.dot((s.total_plus() - s.total_minus()) * v)};
  };
  CoefficientSet out;
  out.provenance = Provenance::Oracle;
  std::tie(out.A1, out.B1) = rates(spectrum({1, 1}), c.d1, c.d1);
  std::tie(out.A2, out.B2) = rates(spectrum({2, 2}), c.d2, c.d2);
  std::tie(out.A3, out.B3) = rates(spectrum({1, 2}), c.d1, c.d2);
  return out;
}

/// Seeded random configurations over a in [0.1, 1.5], wL in [0.5, 2],
/// y/L in [0.1, 3], alternating alignments.
inline std::vector<PhysicalConfig> random_oracle_suite(int n, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ua(0.1, 1.5), uL(0.5, 2.0), uy(0.1, 3.0), ud(-1.0, 1.0);
  auto unit = [&] {
    Vec3 d;
    do d = Vec3(ud(rng), ud(rng), ud(rng));
    while (d.norm() < 0.1);
    return Vec3(d.normalized());
  };
  std::vector<PhysicalConfig> out;
  for (int i = 0; i < n; ++i) {
    const Alignment al = i % 2 == 0 ? Alignment::Parallel : Alignment::Vertical;
    const double a = ua(rng), L = uL(rng), r = uy(rng);
    const Vec3 d1 = unit(), d2 = unit();
    out.push_back(make_config(al, a, L, r, d1, d2));
  }
  return out;
}

}  // namespace accent
