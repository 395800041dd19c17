#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature for vector-valued complex
// integrands. Used by the Fourier oracle, where every field component and
// both signs of the frequency are integrated over a shared subdivision.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <complex>
#include <queue>
#include <span>
#include <vector>

namespace accent::quad {

namespace detail {

// Kronrod abscissae (descending), with Gauss points at odd indices.
inline constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace detail

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_intervals = 20000;
};

template <int N>
struct Result {
  Eigen::Matrix<std::complex<double>, N, 1> value;
  double error = 0.0;
  int evaluations = 0;
  int intervals = 0;
  bool converged = false;
};

/// Integrates f over [knots.front(), knots.back()], starting from the
/// subdivision given by `knots` (sorted ascending). f maps double to
/// Eigen::Matrix<std::complex<double>, N, 1>. Error is the max-norm over
/// components of the summed Kronrod-Gauss differences.
template <int N, class F>
Result<N> integrate(F&& f, std::span<const double> knots, const Options& opt = {}) {
  using Vec = Eigen::Matrix<std::complex<double>, N, 1>;
  struct Piece {
    double lo, hi;
    Vec value;
    double error;
    bool operator<(const Piece& o) const { return error < o.error; }
  };

  Result<N> out;
  auto rule = [&](double lo, double hi) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    Vec fc = f(c);
    Vec kron = fc * detail::wgk[7];
    Vec gauss = fc * detail::wg[3];
    for (int j = 0; j < 7; ++j) {
      const double dx = h * detail::xgk[j];
      Vec s = f(c - dx) + f(c + dx);
      kron += s * detail::wgk[j];
      if (j % 2 == 1) gauss += s * detail::wg[j / 2];
    }
    out.evaluations += 15;
    Piece p{lo, hi, kron * h, 0.0};
    p.error = ((kron - gauss) * h).cwiseAbs().maxCoeff();
    return p;
  };

  std::priority_queue<Piece> heap;
  Vec total = Vec::Zero();
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    if (!(knots[i + 1] > knots[i])) continue;
    Piece p = rule(knots[i], knots[i + 1]);
    total += p.value;
    err += p.error;
    heap.push(p);
  }

  auto tolerance = [&] { return std::max(opt.abs_tol, opt.rel_tol * total.cwiseAbs().maxCoeff()); };
  while (!heap.empty() && err > tolerance() && static_cast<int>(heap.size()) < opt.max_intervals) {
    Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      // Interval cannot be split further in double precision.
      heap.push(worst);
      break;
    }
    Piece left = rule(worst.lo, mid);
    Piece right = rule(mid, worst.hi);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum to shed the drift of incremental updates.
  out.value = Vec::Zero();
  out.error = 0.0;
  out.intervals = static_cast<int>(heap.size());
  while (!heap.empty()) {
    out.value += heap.top().value;
    out.error += heap.top().error;
    heap.pop();
  }
  out.converged = out.error <= std::max(opt.abs_tol, opt.rel_tol * out.value.cwiseAbs().maxCoeff());
  return out;
}

}  // namespace accent::quad
