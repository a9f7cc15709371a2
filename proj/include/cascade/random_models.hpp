#pragma once

// Seeded generators of stable linear models and physical two-mode Gaussian
// covariance matrices, for oracle and property checks.

#include <cmath>
#include <random>

#include "cascade/epr.hpp"
#include "cascade/model.hpp"
#include "cascade/network.hpp"

namespace cascade {

/// Slowest relaxation rate allowed for generated models; keeps the RK4
/// oracle horizon at 50 / rate bounded.
inline constexpr double kRandomModelMinDecay = 0.1;

inline LinearModel random_stable_model(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto U = [&](double lo, double hi) { return lo + (hi - lo) * u01(rng); };
  for (;;) {
    LinearModel lm;
    lm.kappa_1 = U(0.5, 4.0);
    lm.kappa_2 = U(0.5, 4.0);
    lm.Delta_1 = U(0.2, 2.0);
    lm.delta_1 = lm.Delta_1;
    lm.Delta_2 = U(-2.0, 2.0);
    lm.Delta_m = U(-2.0, 2.0);
    lm.g_ab = U(0.0, 0.4);
    lm.g_am = U(0.0, 1.0);
    lm.gamma_b = U(0.2, 1.0);
    lm.gamma_m = U(0.2, 1.0);
    lm.eta = U(0.0, 1.0);
    lm.n_1 = U(0.0, 3.0);
    lm.n_eta = U(0.0, 3.0);
    lm.n_b = U(0.0, 3.0);
    lm.n_m = U(0.0, 3.0);
    const StabilityReport full = hurwitz_report(build_drift(lm));
    if (full.stable && -full.max_real_part() >= kRandomModelMinDecay) return lm;
  }
}

namespace detail {

inline Mat4 local_rotations(double tb, double tm) {
  Mat4 S = Mat4::Zero();
  S.block<2, 2>(0, 0) = quadrature_rotation(tb);
  S.block<2, 2>(2, 2) = quadrature_rotation(tm);
  return S;
}

inline Mat4 local_squeezers(double rb, double rm) {
  return Eigen::Vector4d(std::exp(-rb), std::exp(rb), std::exp(-rm), std::exp(rm)).asDiagonal();
}

inline Mat4 beam_splitter(double t) {
  const double c = std::cos(t), s = std::sin(t);
  Mat4 S = Mat4::Zero();
  S.block<2, 2>(0, 0) = c * Mat2::Identity();
  S.block<2, 2>(2, 2) = c * Mat2::Identity();
  S.block<2, 2>(0, 2) = s * Mat2::Identity();
  S.block<2, 2>(2, 0) = -s * Mat2::Identity();
  return S;
}

// generic passive (orthogonal symplectic) two-mode transformation
inline Mat4 random_passive(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
  return local_rotations(ang(rng), ang(rng)) * beam_splitter(ang(rng)) * local_rotations(ang(rng), ang(rng));
}

}  // namespace detail

/// S diag(nu_b, nu_b, nu_m, nu_m) S^T with S = passive * squeezers * passive.
inline TwoModeCov random_two_mode_cov(std::mt19937_64& rng, double max_squeeze = 1.0, double max_thermal = 2.0) {
  std::uniform_real_distribution<double> sq(-max_squeeze, max_squeeze);
  std::uniform_real_distribution<double> th(0.0, max_thermal);
  const Mat4 S = detail::random_passive(rng) * detail::local_squeezers(sq(rng), sq(rng)) * detail::random_passive(rng);
  const double nb = 0.5 + th(rng), nm = 0.5 + th(rng);
  const Mat4 W = Eigen::Vector4d(nb, nb, nm, nm).asDiagonal();
  const Mat4 C = S * W * S.transpose();
  return 0.5 * (C + C.transpose());
}

/// Two-mode squeezed vacuum with Cov(xb,xm) = +sinh(2r)/2, Cov(pb,pm) = -sinh(2r)/2.
inline TwoModeCov two_mode_squeezed(double r) {
  const double c = 0.5 * std::cosh(2.0 * r), s = 0.5 * std::sinh(2.0 * r);
  TwoModeCov C = TwoModeCov::Zero();
  C.diagonal().setConstant(c);
  C(tm::xb, tm::xm) = C(tm::xm, tm::xb) = s;
  C(tm::pb, tm::pm) = C(tm::pm, tm::pb) = -s;
  return C;
}

}  // namespace cascade
