#pragma once

// Oracle suite: Lyapunov solve against RK4 integration, steering optimizer
// against the Schur-complement determinant, physicality of every steady state.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cascade/epr.hpp"
#include "cascade/network.hpp"
#include "cascade/random_models.hpp"
#include "cascade/steady_state.hpp"

namespace cascade {

inline constexpr double kOdeAgreementTol = 1e-6;
inline constexpr double kSchurAgreementTol = 1e-6;

struct Check {
  std::string name;
  double worst = 0.0;
  double tolerance = 0.0;
  int passed = 0;
  int total = 0;
  std::vector<std::string> offenders;

  bool ok() const { return passed == total; }
};

struct VerifyOptions {
  std::uint64_t seed = 20200131;
  int random_models = 100;
  int random_covariances = 1000;
  bool point_ode = true;
  double corrupt_sigma00 = 0.0;  // test hook: perturbs every Lyapunov solution
};

struct VerifyReport {
  std::vector<Check> checks;
  std::string note;

  bool ok() const {
    for (const Check& c : checks)
      if (!c.ok()) return false;
    return true;
  }
};

namespace detail {

inline void record(Check& c, double value, const std::string& label) {
  ++c.total;
  c.worst = std::max(c.worst, value);
  if (value <= c.tolerance)
    ++c.passed;
  else
    c.offenders.push_back(label + " (" + std::to_string(value) + ")");
}

inline void record_bound(Check& c, double value, double bound, const std::string& label) {
  // passes iff value >= bound; worst is the smallest value seen
  c.worst = c.total == 0 ? value : std::min(c.worst, value);
  ++c.total;
  if (value >= bound)
    ++c.passed;
  else
    c.offenders.push_back(label + " (" + std::to_string(value) + ")");
}

inline double steering_schur_gap(const TwoModeCov& cov, Direction dir) {
  const double s = steering_S(cov, dir).value;
  const double oracle = schur_conditional_det(cov, dir == Direction::m_given_b ? Mode::b : Mode::m);
  return std::abs(s - oracle) / std::max(1.0, std::abs(oracle));
}

}  // namespace detail

struct ModelChecks {
  Check residual{"lyapunov residual / max|D|", 0.0, kLyapunovResidualTol, 0, 0, {}};
  Check ode{"lyapunov vs RK4 max-entry difference", 0.0, kOdeAgreementTol, 0, 0, {}};
  Check physical{"min symplectic eigenvalue", 0.0, 0.5 - kPhysicalityTol, 0, 0, {}};
};

inline void check_model(const LinearModel& lm, const std::string& label, ModelChecks& mc, bool with_ode,
                        double corrupt) {
  const LinearDynamics dyn = build_dynamics(lm);
  CovarianceMatrix sol = solve_lyapunov(dyn);
  sol.sigma(0, 0) += corrupt;
  detail::record(mc.residual, lyapunov_residual(dyn, sol.sigma) / std::max(1e-300, max_abs(dyn.D)), label);
  if (with_ode) {
    const OdeSchedule sch = default_schedule(dyn.A);
    const CovarianceMatrix ode = integrate_covariance(dyn, CovarianceMatrix::vacuum(), sch.t_end, sch.dt);
    detail::record(mc.ode, max_abs(ode.sigma - sol.sigma), label);
  }
  const double nu = physicality_check<8>(0.5 * (sol.sigma + sol.sigma.transpose())).min_symplectic;
  detail::record_bound(mc.physical, nu, mc.physical.tolerance, label);
}

/// `point` is optional: pass nullptr to run only the seeded random suite.
inline VerifyReport run_verification(const LinearModel* point, const VerifyOptions& opt = {}) {
  VerifyReport rep;
  std::mt19937_64 rng(opt.seed);

  if (point) {
    if (!is_stable(*point).stable) {
      rep.note = "configured point is unstable; point checks skipped";
    } else {
      ModelChecks mc;
      mc.residual.name = "point: " + mc.residual.name;
      mc.ode.name = "point: " + mc.ode.name;
      mc.physical.name = "point: " + mc.physical.name;
      check_model(*point, "point", mc, opt.point_ode, opt.corrupt_sigma00);
      rep.checks.push_back(mc.residual);
      if (opt.point_ode) rep.checks.push_back(mc.ode);
      rep.checks.push_back(mc.physical);

      const TwoModeCov c = reduce_bm(solve_lyapunov(build_dynamics(*point)));
      Check st{"point: steering vs Schur determinant", 0.0, kSchurAgreementTol, 0, 0, {}};
      detail::record(st, detail::steering_schur_gap(c, Direction::m_given_b), "point m|b");
      detail::record(st, detail::steering_schur_gap(c, Direction::b_given_m), "point b|m");
      rep.checks.push_back(st);
    }
  }

  ModelChecks mc;
  mc.residual.name = "random models: " + mc.residual.name;
  mc.ode.name = "random models: " + mc.ode.name;
  mc.physical.name = "random models: " + mc.physical.name;
  for (int k = 0; k < opt.random_models; ++k)
    check_model(random_stable_model(rng), "model " + std::to_string(k), mc, true, opt.corrupt_sigma00);
  if (opt.random_models > 0) {
    rep.checks.push_back(mc.residual);
    rep.checks.push_back(mc.ode);
    rep.checks.push_back(mc.physical);
  }

  Check st{"random covariances: steering vs Schur determinant", 0.0, kSchurAgreementTol, 0, 0, {}};
  for (int k = 0; k < opt.random_covariances; ++k) {
    const TwoModeCov c = random_two_mode_cov(rng);
    detail::record(st, detail::steering_schur_gap(c, Direction::m_given_b), "cov " + std::to_string(k) + " m|b");
    detail::record(st, detail::steering_schur_gap(c, Direction::b_given_m), "cov " + std::to_string(k) + " b|m");
  }
  if (opt.random_covariances > 0) rep.checks.push_back(st);
  return rep;
}

}  // namespace cascade
