#include <gtest/gtest.h>

#include <random>

#include "cascade/random_models.hpp"
#include "cascade/steady_state.hpp"

using namespace cascade;

namespace {

LinearModel thermal_model(double n1, double neta, double nb, double nm) {
  LinearModel lm;
  lm.kappa_1 = 1.3;
  lm.kappa_2 = 0.7;
  lm.Delta_1 = 0.4;
  lm.Delta_2 = -0.9;
  lm.Delta_m = 0.2;
  lm.gamma_b = 0.3;
  lm.gamma_m = 0.6;
  lm.eta = 0.0;
  lm.n_1 = n1;
  lm.n_eta = neta;
  lm.n_b = nb;
  lm.n_m = nm;
  return lm;
}

LinearModel headline_model() {
  LinearModel lm;
  lm.kappa_1 = lm.kappa_2 = 10.0;
  lm.Delta_1 = lm.delta_1 = 1.0;
  lm.Delta_2 = lm.Delta_m = -1.0;
  lm.g_ab = 0.5;
  lm.g_am = 1.0;
  lm.gamma_b = 1e-5;
  lm.gamma_m = 0.15;
  lm.eta = 1.0;
  lm.n_b = 62.0;
  return lm;
}

}  // namespace

TEST(Lyapunov, DecoupledModesThermalize) {
  const LinearModel lm = thermal_model(0.5, 1.5, 7.0, 0.25);
  const CovarianceMatrix c = solve_lyapunov(build_dynamics(lm));
  Mat8 expect = Mat8::Zero();
  expect.diagonal() << 1.0, 1.0, 2.0, 2.0, 7.5, 7.5, 0.75, 0.75;
  EXPECT_LT(max_abs(c.sigma - expect), 1e-12);
}

TEST(Lyapunov, CascadedThermalLightStaysThermal) {
  // a passive cavity maps white thermal input onto white thermal output
  LinearModel lm = thermal_model(2.0, 0.0, 0.0, 0.0);
  lm.eta = 1.0;
  const CovarianceMatrix c = solve_lyapunov(build_dynamics(lm));
  EXPECT_NEAR(c.sigma(quad::x2, quad::x2), 2.5, 1e-12);
  EXPECT_NEAR(c.sigma(quad::p2, quad::p2), 2.5, 1e-12);
  EXPECT_NEAR(c.sigma(quad::x2, quad::p2), 0.0, 1e-12);
}

TEST(Lyapunov, ResidualIsTinyOnRandomModels) {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 200; ++k) {
    const LinearDynamics dyn = build_dynamics(random_stable_model(rng));
    const CovarianceMatrix c = solve_lyapunov(dyn);
    EXPECT_LT(lyapunov_residual(dyn, c.sigma), kLyapunovResidualTol * std::max(1.0, max_abs(dyn.D)));
    EXPECT_EQ(c.sigma, c.sigma.transpose());
  }
}

TEST(Lyapunov, AgreesWithTimeIntegration) {
  std::mt19937_64 rng(43);
  for (int k = 0; k < 5; ++k) {
    const LinearDynamics dyn = build_dynamics(random_stable_model(rng));
    const OdeSchedule s = default_schedule(dyn.A);
    const CovarianceMatrix ode = integrate_covariance(dyn, CovarianceMatrix::vacuum(), s.t_end, s.dt);
    EXPECT_LT(max_abs(ode.sigma - solve_lyapunov(dyn).sigma), 1e-6);
  }
}

TEST(Lyapunov, UnstableDriftThrows) {
  LinearModel lm;
  lm.Delta_1 = -1.0;
  lm.kappa_1 = 0.1;
  lm.g_ab = 0.5;
  EXPECT_THROW(solve_lyapunov(build_dynamics(lm)), StabilityError);
  EXPECT_THROW(default_schedule(build_drift(lm)), StabilityError);
}

TEST(Lyapunov, PhononVarianceGrowsWithBathOccupation) {
  LinearModel lm = headline_model();
  double last = 0.0;
  for (double nb : {0.0, 10.0, 30.0, 62.0, 120.0}) {
    lm.n_b = nb;
    const double v = solve_lyapunov(build_dynamics(lm)).sigma(quad::xb, quad::xb);
    EXPECT_GT(v, last);
    last = v;
  }
}

TEST(Integrate, ZeroDurationReturnsInitialState) {
  const LinearDynamics dyn = build_dynamics(headline_model());
  const CovarianceMatrix c = integrate_covariance(dyn, CovarianceMatrix::vacuum(), 0.0, 1e-3);
  EXPECT_EQ(c.sigma, CovarianceMatrix::vacuum().sigma);
  EXPECT_THROW(integrate_covariance(dyn, CovarianceMatrix::vacuum(), 1.0, 0.0), DomainError);
}

TEST(Physicality, VacuumIsMinimumUncertainty) {
  const PhysicalityReport r = physicality_check(CovarianceMatrix::vacuum());
  EXPECT_TRUE(r.physical);
  EXPECT_NEAR(r.min_symplectic, 0.5, 1e-14);
  EXPECT_NEAR(r.min_uncertainty_eigenvalue, 0.0, 1e-14);
}

TEST(Physicality, SubVacuumIsRejected) {
  CovarianceMatrix c;
  c.sigma = 0.25 * Mat8::Identity();
  const PhysicalityReport r = physicality_check(c);
  EXPECT_FALSE(r.physical);
  EXPECT_NEAR(r.min_symplectic, 0.25, 1e-14);
  EXPECT_LT(r.min_uncertainty_eigenvalue, 0.0);
}

TEST(Physicality, ThermalSymplecticSpectrum) {
  CovarianceMatrix c;
  c.sigma.diagonal() << 1.5, 1.5, 0.5, 0.5, 4.0, 4.0, 2.25, 2.25;
  const PhysicalityReport r = physicality_check(c);
  ASSERT_EQ(r.symplectic.size(), 4);
  EXPECT_NEAR(r.symplectic(0), 0.5, 1e-13);
  EXPECT_NEAR(r.symplectic(1), 1.5, 1e-13);
  EXPECT_NEAR(r.symplectic(2), 2.25, 1e-13);
  EXPECT_NEAR(r.symplectic(3), 4.0, 1e-13);
}

TEST(Physicality, SqueezingLeavesSymplecticSpectrumAlone) {
  std::mt19937_64 rng(47);
  for (int k = 0; k < 100; ++k) {
    const TwoModeCov c = random_two_mode_cov(rng);
    const PhysicalityReport r = physicality_check<4>(c);
    EXPECT_TRUE(r.physical);
    EXPECT_GE(r.min_uncertainty_eigenvalue, -1e-10);
  }
}

TEST(Physicality, IndefiniteMatrixIsRejected) {
  CovarianceMatrix c = CovarianceMatrix::vacuum();
  c.sigma(0, 0) = -1.0;
  EXPECT_FALSE(physicality_check(c).physical);
}

TEST(Physicality, AsymmetricInputIsAContractViolation) {
  CovarianceMatrix c = CovarianceMatrix::vacuum();
  c.sigma(0, 1) = 1e-3;
  EXPECT_THROW(physicality_check(c), ContractError);
}

TEST(Physicality, SteadyStatesOfRandomModels) {
  std::mt19937_64 rng(53);
  for (int k = 0; k < 200; ++k) {
    const CovarianceMatrix c = solve_lyapunov(build_dynamics(random_stable_model(rng)));
    EXPECT_TRUE(physicality_check(c).physical);
  }
}
