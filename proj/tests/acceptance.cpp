// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "cascade/random_models.hpp"
#include "cascade/sweep.hpp"
#include "cascade/verify.hpp"

using namespace cascade;

namespace {

constexpr double kMHz = 1e6 * kTwoPi;

// tolerances and limits
constexpr double kClosedFormTol = 1e-6;
constexpr double kThermalDiagTol = 1e-9;
constexpr double kDiscussionRelTol = 0.10;
constexpr double kSymplecticFloor = 0.5 - 1e-8;

PhysicalParams headline() {
  PhysicalParams p;
  p.omega_b = 10 * kMHz;
  p.omega_m = 10000 * kMHz;
  p.omega_d = p.omega_m + p.omega_b;  // Delta_m = -omega_b
  p.omega_1 = p.omega_d + p.omega_b;  // Delta_1 = omega_b
  p.omega_2 = p.omega_d - p.omega_b;  // Delta_2 = -omega_b
  p.kappa_1 = p.kappa_2 = 10 * p.omega_b;
  p.gamma_b = 100 * kTwoPi;
  p.gamma_m = 1.5 * kMHz;
  p.g_ab = 0.5 * p.omega_b;
  p.g_am = p.omega_b;
  p.eta = 1.0;
  p.set_temperature(0.03);
  return p;
}

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string g(double v) { return format_g12(v); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

// every evaluated steady state, for the physicality and hierarchy criteria
struct Ledger {
  std::size_t states = 0;
  double min_symplectic = 1e300;
  std::string worst_state;
  std::size_t hierarchy_rows = 0;
  std::vector<std::string> hierarchy_violations;

  void add(const std::string& where, bool stable, const std::optional<EprReport>& epr, double nu,
           bool hierarchy) {
    if (!stable) return;
    ++states;
    if (!(nu >= min_symplectic)) {
      min_symplectic = nu;
      worst_state = where;
    }
    if (!hierarchy || !epr) return;
    ++hierarchy_rows;
    if (epr->S_m_given_b < 1.0 && !(epr->E_bm < 1.0))
      hierarchy_violations.push_back(where + " S_m|b=" + g(epr->S_m_given_b) + " E_bm=" + g(epr->E_bm));
  }
  void add(const std::string& where, const PointResult& r, bool hierarchy) {
    add(where, r.stability.stable, r.epr, r.physicality ? r.physicality->min_symplectic : -1.0, hierarchy);
  }
  void add(const std::string& grid, const std::vector<SweepRow>& rows) {
    for (const SweepRow& r : rows)
      add(grid + " (" + g(r.axis1) + (r.axis2 ? ", " + g(*r.axis2) : "") + ")", r.stable, r.epr, r.min_symplectic,
          true);
  }
};

Ledger ledger;

Outcome criterion1() {
  const PointResult r = evaluate_point(headline());
  ledger.add("headline", r, false);
  if (!r.epr) return {false, "headline point has no metrics: " + r.status};
  const EprReport& e = *r.epr;
  return {e.E_bm < 1.0 && e.S_m_given_b < 1.0 && e.S_b_given_m >= 1.0,
          "E_bm=" + g(e.E_bm) + " S_m|b=" + g(e.S_m_given_b) + " S_b|m=" + g(e.S_b_given_m)};
}

Outcome criterion2() {
  SweepSpec s;
  s.base = headline();
  s.axis1 = {Param::Delta_m, -3.0, 1.0, 60, Spacing::linear};
  const auto rows = run_sweep(s, workers());
  ledger.add("Delta_m sweep", rows);
  const SweepSummary sum = summarize(rows);
  const double arg = sum.min_E.axis1;
  return {std::isfinite(sum.min_E.value) && arg >= -1.5 && arg <= -0.5,
          "argmin Delta_m=" + g(arg) + " (E_bm=" + g(sum.min_E.value) + "), window [-1.5, -0.5]"};
}

Outcome criterion3() {
  auto at = [](double kappa) {
    PhysicalParams p = headline();
    p.kappa_1 = p.kappa_2 = kappa * p.omega_b;
    const PointResult r = evaluate_point(p);
    ledger.add("kappa=" + g(kappa), r, true);
    return r.epr ? r.epr->E_bm : std::numeric_limits<double>::quiet_NaN();
  };
  const double e10 = at(10.0), e1 = at(1.0);
  return {e10 < e1, "E_bm(kappa=10)=" + g(e10) + " E_bm(kappa=1)=" + g(e1)};
}

Outcome criterion4() {
  SweepSpec s;
  s.base = headline();
  s.axis1 = {Param::T, 0.0075, 0.3, 40, Spacing::linear};
  s.axis2 = Axis{Param::eta, 0.025, 1.0, 40, Spacing::linear};
  const auto rows = run_sweep(s, workers());
  ledger.add("T x eta", rows);
  double maxT_E = -1.0, maxT_S = -1.0;
  int column = 0;
  for (const SweepRow& r : rows) {
    if (std::abs(*r.axis2 - 0.5) > 1e-9) continue;
    ++column;
    if (!r.epr) continue;
    if (r.epr->E_bm < 1.0) maxT_E = std::max(maxT_E, r.axis1);
    if (r.epr->S_m_given_b < 1.0) maxT_S = std::max(maxT_S, r.axis1);
  }
  if (column != 40) return {false, "eta = 0.5 is not a grid column"};
  return {maxT_E > 0.1 && maxT_S <= maxT_E,
          "eta=0.5: max T with E_bm<1 is " + g(maxT_E) + " K, max T with S_m|b<1 is " + g(maxT_S) + " K"};
}

Outcome criterion5() {
  SweepSpec s;
  s.base = headline();
  s.base.g_ab = s.base.omega_b;
  s.base.g_am = 2.0 * s.base.omega_b;
  s.axis1 = {Param::kappa_1, 1.0, 40.0, 60, Spacing::linear};
  s.axis2 = Axis{Param::kappa_2, 1.0, 40.0, 60, Spacing::linear};
  const auto rows = run_sweep(s, workers());
  ledger.add("kappa_1 x kappa_2", rows);
  std::size_t reverse = 0, violations = 0;
  std::string first;
  for (const SweepRow& r : rows) {
    if (!r.epr || !(r.epr->S_b_given_m < 1.0)) continue;
    ++reverse;
    if (r.epr->S_m_given_b < 1.0) continue;
    if (violations++ == 0)
      first = " e.g. (kappa_1, kappa_2)=(" + g(r.axis1) + ", " + g(*r.axis2) + ") S_b|m=" + g(r.epr->S_b_given_m) +
              " S_m|b=" + g(r.epr->S_m_given_b);
  }
  const SweepSummary sum = summarize(rows);
  const bool stronger = sum.min_S_m_b.value < sum.min_S_b_m.value;
  return {violations == 0 && stronger, std::to_string(reverse) + " points with S_b|m<1, " +
                                           std::to_string(violations) + " of them with S_m|b>=1" + first +
                                           "; min S_m|b=" + g(sum.min_S_m_b.value) +
                                           " min S_b|m=" + g(sum.min_S_b_m.value)};
}

Outcome criterion6() {
  VerifyOptions opt;
  opt.random_models = 100;
  opt.random_covariances = 1000;
  const VerifyReport rep = run_verification(nullptr, opt);
  std::string detail;
  for (const Check& c : rep.checks) {
    if (c.name.find("RK4") == std::string::npos && c.name.find("Schur") == std::string::npos) continue;
    if (!detail.empty()) detail += "; ";
    detail += c.name + " " + std::to_string(c.passed) + "/" + std::to_string(c.total) + " worst " + g(c.worst);
  }
  return {rep.ok(), detail};
}

Outcome criterion7() {
  return {ledger.states > 0 && ledger.min_symplectic >= kSymplecticFloor,
          std::to_string(ledger.states) + " steady states, min symplectic eigenvalue " + g(ledger.min_symplectic) +
              " at " + ledger.worst_state};
}

Outcome criterion8() {
  double worst_tmsv = 0.0;
  for (double r : {0.1, 0.5, 1.0}) {
    const TwoModeCov c = two_mode_squeezed(r);
    const double s = 1.0 / std::pow(std::cosh(2.0 * r), 2);
    worst_tmsv = std::max(worst_tmsv, std::abs(witness_E(c).value - std::exp(-4.0 * r)));
    worst_tmsv = std::max(worst_tmsv, std::abs(steering_S(c, Direction::m_given_b).value - s));
    worst_tmsv = std::max(worst_tmsv, std::abs(steering_S(c, Direction::b_given_m).value - s));
  }
  double worst_thermal = 0.0;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.1, 3.0), n(0.0, 100.0);
  for (int k = 0; k < 20; ++k) {
    LinearModel lm;
    lm.kappa_1 = u(rng);
    lm.kappa_2 = u(rng);
    lm.gamma_b = u(rng);
    lm.gamma_m = u(rng);
    lm.Delta_1 = u(rng) - 1.5;
    lm.Delta_2 = u(rng) - 1.5;
    lm.Delta_m = u(rng) - 1.5;
    lm.eta = 0.0;
    lm.n_1 = n(rng);
    lm.n_eta = n(rng);
    lm.n_b = n(rng);
    lm.n_m = n(rng);
    Mat8 expect = Mat8::Zero();
    expect.diagonal() << lm.n_1, lm.n_1, lm.n_eta, lm.n_eta, lm.n_b, lm.n_b, lm.n_m, lm.n_m;
    expect.diagonal().array() += 0.5;
    worst_thermal = std::max(worst_thermal, max_abs(solve_lyapunov(build_dynamics(lm)).sigma - expect));
  }
  return {worst_tmsv <= kClosedFormTol && worst_thermal <= kThermalDiagTol,
          "TMSV worst deviation " + g(worst_tmsv) + ", decoupled thermal worst deviation " + g(worst_thermal)};
}

Outcome criterion9() {
  const double nb = bose_occupation(10 * kMHz, 0.03);
  const double nm = bose_occupation(10000 * kMHz, 0.03);
  CouplingBudget b;
  b.sphere_diameter = 400e-6;
  b.spin_density = 2.1e27;
  b.g_m0 = 38e-3 * kTwoPi;
  const SphereCoupling s = magnon_coupling_from_sphere(b);
  auto near = [](double v, double ref) { return std::abs(v / ref - 1.0) <= kDiscussionRelTol; };
  return {near(nb, 60.0) && nm < 1e-6 && near(s.spin_count, 7e16) && near(s.g_am / kTwoPi, 10e6),
          "n_b=" + g(nb) + " n_m=" + g(nm) + " N=" + g(s.spin_count) + " g_am/2pi=" + g(s.g_am / kTwoPi) + " Hz"};
}

Outcome criterion10() {
  const std::size_t n = ledger.hierarchy_violations.size();
  return {ledger.hierarchy_rows > 0 && n == 0,
          std::to_string(ledger.hierarchy_rows) + " rows, " + std::to_string(n) + " with S_m|b<1 and E_bm>=1" +
              (n ? ", e.g. " + ledger.hierarchy_violations.front() : "")};
}

struct Criterion {
  int id;
  double limit_seconds;  // 0: no runtime bound
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, 1.0, criterion1},   {2, 30.0, criterion2}, {3, 2.0, criterion3}, {4, 60.0, criterion4},
      {5, 300.0, criterion5}, {6, 120.0, criterion6}, {7, 0.0, criterion7}, {8, 0.0, criterion8},
      {9, 0.0, criterion9},   {10, 0.0, criterion10},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing = g(secs) + " s";
    if (c.limit_seconds > 0.0) {
      timing += " of " + g(c.limit_seconds) + " s";
      if (secs >= c.limit_seconds) {
        o.pass = false;
        timing += " (over budget)";
      }
    }
    failed += !o.pass;
    std::printf("criterion %2d %s  %s  [%s]\n", c.id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
