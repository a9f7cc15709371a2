#pragma once

// Steady-state covariance of the linear quadrature dynamics
//   d sigma / dt = A sigma + sigma A^T + D
// by a dense Kronecker solve, with a fixed-step RK4 integrator as an
// independent oracle and a Gaussian-state physicality check.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cascade/errors.hpp"
#include "cascade/network.hpp"

namespace cascade {

struct CovarianceMatrix {
  Mat8 sigma = Mat8::Zero();

  static CovarianceMatrix vacuum() { return {0.5 * Mat8::Identity()}; }
};

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& M) {
  return M.cwiseAbs().maxCoeff();
}

/// max |A sigma + sigma A^T + D|
inline double lyapunov_residual(const LinearDynamics& dyn, const Mat8& sigma) {
  return max_abs(dyn.A * sigma + sigma * dyn.A.transpose() + dyn.D);
}

inline constexpr double kLyapunovResidualTol = 1e-9;
inline constexpr double kMinReciprocalCondition = 1e-15;

inline CovarianceMatrix solve_lyapunov(const LinearDynamics& dyn) {
  const StabilityReport stab = hurwitz_report(dyn.A);
  if (!stab.stable)
    throw StabilityError("solve_lyapunov: drift matrix is not Hurwitz (max Re = " +
                         std::to_string(stab.max_real_part()) + ")");

  using Mat64 = Eigen::Matrix<double, 64, 64>;
  using Vec64 = Eigen::Matrix<double, 64, 1>;
  // column-major vec: vec(A S) = (I kron A) vec S, vec(S A^T) = (A kron I) vec S
  Mat64 K = Mat64::Zero();
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      K.block<8, 8>(8 * j, 8 * j)(i, Eigen::all) += dyn.A.row(i);
      K.block<8, 8>(8 * i, 8 * j).diagonal().array() += dyn.A(i, j);
    }
  Vec64 rhs = -Eigen::Map<const Vec64>(dyn.D.data());

  Eigen::PartialPivLU<Mat64> lu(K);
  const double rcond = lu.rcond();
  if (!(rcond > kMinReciprocalCondition))
    throw NumericalError("solve_lyapunov: Kronecker system is ill-conditioned", rcond);

  Vec64 v = lu.solve(rhs);
  v += lu.solve(rhs - K * v);  // one step of iterative refinement

  CovarianceMatrix out;
  out.sigma = Eigen::Map<const Mat8>(v.data());
  out.sigma = 0.5 * (out.sigma + out.sigma.transpose()).eval();

  const double res = lyapunov_residual(dyn, out.sigma);
  const double scale = std::max(1.0, max_abs(dyn.D));
  if (!(res < kLyapunovResidualTol * scale))
    throw NumericalError("solve_lyapunov: residual " + std::to_string(res) + " above tolerance", rcond);
  return out;
}

inline constexpr double kDivergenceBound = 1e12;

/// Classical RK4 with fixed step, symmetrized after every step.
inline CovarianceMatrix integrate_covariance(const LinearDynamics& dyn, const CovarianceMatrix& sigma0,
                                             double t_end, double dt) {
  if (!(dt > 0.0) || !(t_end >= 0.0)) throw DomainError("integrate_covariance: need dt > 0, t_end >= 0");
  const auto steps = static_cast<long long>(std::ceil(t_end / dt - 1e-9));
  const double h = steps > 0 ? t_end / static_cast<double>(steps) : 0.0;

  auto rhs = [&](const Mat8& s) -> Mat8 {
    const Mat8 As = dyn.A * s;
    return As + As.transpose() + dyn.D;
  };

  Mat8 s = sigma0.sigma;
  for (long long n = 0; n < steps; ++n) {
    const Mat8 k1 = rhs(s);
    const Mat8 k2 = rhs(s + 0.5 * h * k1);
    const Mat8 k3 = rhs(s + 0.5 * h * k2);
    const Mat8 k4 = rhs(s + h * k3);
    s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    s = 0.5 * (s + s.transpose()).eval();
    if ((n & 1023) == 0 && !(max_abs(s) < kDivergenceBound))
      throw StabilityError("integrate_covariance: solution diverged");
  }
  if (!(max_abs(s) < kDivergenceBound)) throw StabilityError("integrate_covariance: solution diverged");
  return {s};
}

struct OdeSchedule {
  double t_end;
  double dt;
};

/// dt = min(1e-3, 0.01 / max|A|), t_end = 50 / (slowest decay rate of A).
inline OdeSchedule default_schedule(const Mat8& A) {
  const StabilityReport stab = hurwitz_report(A);
  if (!stab.stable) throw StabilityError("default_schedule: drift matrix is not Hurwitz");
  const double slowest = -stab.max_real_part();
  return {50.0 / slowest, std::min(1e-3, 0.01 / max_abs(A))};
}

inline constexpr double kPhysicalityTol = 1e-8;
inline constexpr double kSymmetryTol = 1e-10;

struct PhysicalityReport {
  bool physical = false;
  double min_symplectic = 0.0;
  double min_uncertainty_eigenvalue = 0.0;  // of sigma + (i/2) Omega
  Eigen::VectorXd symplectic;               // ascending, one per mode
};

template <int N>
Eigen::Matrix<double, N, N> symplectic_form() {
  static_assert(N % 2 == 0);
  Eigen::Matrix<double, N, N> W = Eigen::Matrix<double, N, N>::Zero();
  for (int k = 0; k < N; k += 2) {
    W(k, k + 1) = 1.0;
    W(k + 1, k) = -1.0;
  }
  return W;
}

template <int N>
PhysicalityReport physicality_check(const Eigen::Matrix<double, N, N>& sigma) {
  using Real = Eigen::Matrix<double, N, N>;
  using Cplx = Eigen::Matrix<std::complex<double>, N, N>;
  if (!(max_abs(sigma - sigma.transpose()) < kSymmetryTol))
    throw ContractError("physicality_check: covariance matrix is not symmetric");

  const Real W = symplectic_form<N>();
  const std::complex<double> I{0.0, 1.0};
  PhysicalityReport rep;

  const Cplx H = sigma.template cast<std::complex<double>>() + 0.5 * I * W.template cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Cplx> hs(H, Eigen::EigenvaluesOnly);
  rep.min_uncertainty_eigenvalue = hs.eigenvalues().minCoeff();

  // For sigma > 0 the spectrum of the Hermitian sqrt(sigma) (i W) sqrt(sigma) is {+-nu_k}.
  Eigen::VectorXd nu(N / 2);
  Eigen::SelfAdjointEigenSolver<Real> ss(sigma);
  if (ss.eigenvalues().minCoeff() > 0.0) {
    const Real root = ss.operatorSqrt();
    const Cplx M = I * (root * W * root).template cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Cplx> ms(M, Eigen::EigenvaluesOnly);
    for (int k = 0; k < N / 2; ++k) nu(k) = ms.eigenvalues()(N / 2 + k);
  } else {
    Eigen::EigenSolver<Real> es(W * sigma, false);
    Eigen::VectorXd mags(N);
    for (int k = 0; k < N; ++k) mags(k) = std::abs(es.eigenvalues()(k).imag());
    std::sort(mags.data(), mags.data() + N);
    for (int k = 0; k < N / 2; ++k) nu(k) = mags(2 * k);
    // an indefinite sigma is never a state
    nu(0) = std::min(nu(0), ss.eigenvalues().minCoeff());
  }
  std::sort(nu.data(), nu.data() + nu.size());
  rep.symplectic = nu;
  rep.min_symplectic = nu(0);
  rep.physical = rep.min_symplectic >= 0.5 - kPhysicalityTol;
  return rep;
}

inline PhysicalityReport physicality_check(const CovarianceMatrix& cov) { return physicality_check<8>(cov.sigma); }

}  // namespace cascade
