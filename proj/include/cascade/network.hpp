#pragma once

// Drift and diffusion matrices of the four-mode cascade in the quadrature
// ordering (x1, p1, x2, p2, xb, pb, xm, pm), x = (o + o^+)/sqrt2,
// p = -i(o - o^+)/sqrt2.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <complex>
#include <limits>
#include <vector>

#include "cascade/model.hpp"

namespace cascade {

using Mat8 = Eigen::Matrix<double, 8, 8>;
using Mat4 = Eigen::Matrix<double, 4, 4>;
using Mat2 = Eigen::Matrix<double, 2, 2>;

namespace quad {
inline constexpr int x1 = 0, p1 = 1, x2 = 2, p2 = 3, xb = 4, pb = 5, xm = 6, pm = 7;
}

/// Offsets of each mode's 2x2 block.
enum class Mode : int { a1 = 0, a2 = 2, b = 4, m = 6 };

inline constexpr int offset(Mode mode) { return static_cast<int>(mode); }

/// Quadratures of the electromechanical (master) subsystem.
inline constexpr std::array<int, 4> kMasterQuadratures{quad::x1, quad::p1, quad::xb, quad::pb};

struct LinearDynamics {
  Mat8 A;
  Mat8 D;
};

namespace detail {

// o' = -(rate/2 + i detuning) o  ->  [[-rate/2, detuning], [-detuning, -rate/2]]
inline Mat2 damped_rotation(double rate, double detuning) {
  Mat2 b;
  b << -0.5 * rate, detuning, -detuning, -0.5 * rate;
  return b;
}

}  // namespace detail

inline Mat8 build_drift(const LinearModel& lm) {
  using namespace quad;
  Mat8 A = Mat8::Zero();
  A.block<2, 2>(x1, x1) = detail::damped_rotation(lm.kappa_1, lm.Delta_1);
  A.block<2, 2>(x2, x2) = detail::damped_rotation(lm.kappa_2, lm.Delta_2);
  A.block<2, 2>(xb, xb) = detail::damped_rotation(lm.gamma_b, lm.omega_b);
  A.block<2, 2>(xm, xm) = detail::damped_rotation(lm.gamma_m, lm.Delta_m);

  // g_ab (a1 + a1^+)(b + b^+) pushes only the momenta.
  A(p1, xb) = -2.0 * lm.g_ab;
  A(pb, x1) = -2.0 * lm.g_ab;

  // g_am (a2^+ m + a2 m^+)
  A(x2, pm) = lm.g_am;
  A(p2, xm) = -lm.g_am;
  A(xm, p2) = lm.g_am;
  A(pm, x2) = -lm.g_am;

  // one-way feed of the master output into the slave cavity
  const double feed = std::sqrt(lm.eta * lm.kappa_1 * lm.kappa_2);
  A(x2, x1) = -feed;
  A(p2, p1) = -feed;
  return A;
}

inline Mat8 build_diffusion(const LinearModel& lm) {
  using namespace quad;
  const Mat2 I = Mat2::Identity();
  const double s1 = lm.n_1 + 0.5;
  const double seta = lm.n_eta + 0.5;
  const double cross = std::sqrt(lm.eta * lm.kappa_1 * lm.kappa_2) * s1;

  Mat8 D = Mat8::Zero();
  D.block<2, 2>(x1, x1) = lm.kappa_1 * s1 * I;
  D.block<2, 2>(x2, x2) = lm.kappa_2 * (lm.eta * s1 + (1.0 - lm.eta) * seta) * I;
  D.block<2, 2>(x1, x2) = cross * I;
  D.block<2, 2>(x2, x1) = cross * I;
  D.block<2, 2>(xb, xb) = lm.gamma_b * (lm.n_b + 0.5) * I;
  D.block<2, 2>(xm, xm) = lm.gamma_m * (lm.n_m + 0.5) * I;
  return 0.5 * (D + D.transpose());
}

inline LinearDynamics build_dynamics(const LinearModel& lm) { return {build_drift(lm), build_diffusion(lm)}; }

inline constexpr double kStabilityMargin = 1e-10;

struct StabilityReport {
  bool stable = false;
  std::vector<std::complex<double>> eigenvalues;

  double max_real_part() const {
    double r = -std::numeric_limits<double>::infinity();
    for (const auto& e : eigenvalues) r = std::max(r, e.real());
    return r;
  }
};

template <int N>
StabilityReport hurwitz_report(const Eigen::Matrix<double, N, N>& M) {
  Eigen::EigenSolver<Eigen::Matrix<double, N, N>> es(M, false);
  StabilityReport rep;
  rep.eigenvalues.reserve(N);
  for (int k = 0; k < N; ++k) rep.eigenvalues.push_back(es.eigenvalues()(k));
  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(),
            [](auto a, auto b) { return a.real() > b.real() || (a.real() == b.real() && a.imag() > b.imag()); });
  rep.stable = rep.max_real_part() < -kStabilityMargin;
  return rep;
}

/// 4x4 drift of the electromechanical subsystem (modes a1, b).
inline Mat4 master_drift(const Mat8& A) {
  Mat4 M;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) M(r, c) = A(kMasterQuadratures[r], kMasterQuadratures[c]);
  return M;
}

/// The slave never acts back on the master, so the cascade is stable iff the
/// electromechanical block is.
inline StabilityReport is_stable(const LinearModel& lm) { return hurwitz_report(master_drift(build_drift(lm))); }

}  // namespace cascade
