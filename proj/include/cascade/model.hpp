#pragma once

// Physical parameters of the cascaded electromechanical / electromagnonical
// network and their reduction to the dimensionless linearized model.
//
// Every frequency and rate in PhysicalParams is angular (rad/s). The linear
// model measures everything in units of the mechanical frequency omega_b.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "cascade/errors.hpp"

namespace cascade {

inline constexpr double kHbar = 1.054571817e-34;       // J s
inline constexpr double kBoltzmann = 1.380649e-23;     // J / K
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Complex = std::complex<double>;

struct PhysicalParams {
  double omega_b = 0.0;  // mechanical frequency
  double omega_m = 0.0;  // magnon (Kittel mode) frequency
  double omega_1 = 0.0;  // electromechanical cavity
  double omega_2 = 0.0;  // electromagnonical cavity
  double omega_d = 0.0;  // drive
  double kappa_1 = 0.0;
  double kappa_2 = 0.0;
  double gamma_b = 0.0;
  double gamma_m = 0.0;
  double g_ab = 0.0;  // effective (drive-enhanced) electromechanical coupling
  double g_am = 0.0;
  double eta = 1.0;  // cascade efficiency
  double T_1 = 0.0;
  double T_2 = 0.0;
  double T_b = 0.0;
  double T_m = 0.0;

  void set_temperature(double T) { T_1 = T_2 = T_b = T_m = T; }
};

/// Throws DomainError on non-positive rates/frequencies, negative couplings,
/// negative temperatures or eta outside [0, 1].
inline void validate(const PhysicalParams& p) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw DomainError(std::string(name) + " must be strictly positive");
  };
  positive(p.omega_b, "omega_b");
  positive(p.omega_m, "omega_m");
  positive(p.omega_1, "omega_1");
  positive(p.omega_2, "omega_2");
  positive(p.omega_d, "omega_d");
  positive(p.kappa_1, "kappa_1");
  positive(p.kappa_2, "kappa_2");
  positive(p.gamma_b, "gamma_b");
  positive(p.gamma_m, "gamma_m");
  if (!(p.g_ab >= 0.0) || !(p.g_am >= 0.0)) throw DomainError("couplings must be non-negative");
  if (!(p.eta >= 0.0 && p.eta <= 1.0)) throw DomainError("eta must lie in [0, 1]");
  for (double T : {p.T_1, p.T_2, p.T_b, p.T_m})
    if (!(T >= 0.0)) throw DomainError("temperatures must be non-negative");
}

/// Soft checks: the model assumes omega_b is far below the microwave scale.
inline std::vector<std::string> scale_warnings(const PhysicalParams& p) {
  std::vector<std::string> out;
  constexpr double kSeparation = 10.0;
  if (p.omega_1 < kSeparation * p.omega_b) out.emplace_back("omega_1 is not well above omega_b");
  if (p.omega_2 < kSeparation * p.omega_b) out.emplace_back("omega_2 is not well above omega_b");
  if (p.omega_m < kSeparation * p.omega_b) out.emplace_back("omega_m is not well above omega_b");
  return out;
}

/// Mean thermal occupation (exp(hbar w / kB T) - 1)^-1; exactly 0 at T = 0.
inline double bose_occupation(double frequency, double temperature) {
  if (!(frequency > 0.0)) throw DomainError("bose_occupation: frequency must be positive");
  if (!(temperature >= 0.0)) throw DomainError("bose_occupation: temperature must be non-negative");
  if (temperature == 0.0) return 0.0;
  const double x = kHbar * frequency / (kBoltzmann * temperature);
  return 1.0 / std::expm1(x);
}

struct CouplingBudget {
  double pump_power = 0.0;       // W
  double g_ab_single = 0.0;      // single-photon electromechanical coupling, rad/s
  double sphere_diameter = 0.0;  // m
  double spin_density = 0.0;     // m^-3
  double g_m0 = 0.0;             // single-spin coupling, rad/s
  double spin_s = 2.5;           // Fe3+ ground state
};

/// g_ab = g~ sqrt(P kappa_1) / sqrt(hbar omega_1 (Delta_1^2 + kappa_1^2/4)).
inline double coupling_from_power(const CouplingBudget& budget, double kappa_1, double Delta_1,
                                  double omega_1) {
  if (!(budget.pump_power > 0.0) || !(budget.g_ab_single > 0.0) || !(kappa_1 > 0.0) ||
      !(omega_1 > 0.0))
    throw DomainError("coupling_from_power: inputs must be positive");
  return budget.g_ab_single * std::sqrt(budget.pump_power * kappa_1) /
         std::sqrt(kHbar * omega_1 * (Delta_1 * Delta_1 + 0.25 * kappa_1 * kappa_1));
}

struct SphereCoupling {
  double spin_count;
  double g_am;
};

inline SphereCoupling magnon_coupling_from_sphere(const CouplingBudget& budget) {
  if (!(budget.sphere_diameter > 0.0) || !(budget.spin_density > 0.0))
    throw DomainError("magnon_coupling_from_sphere: diameter and density must be positive");
  const double d = budget.sphere_diameter;
  const double n = budget.spin_density * (std::numbers::pi / 6.0) * d * d * d;
  return {n, budget.g_m0 * std::sqrt(n)};
}

struct MeanField {
  Complex a1{};
  Complex a2{};
  Complex b{};
  Complex m{};
};

/// Classical steady state of the driven cascade. The drive-induced shift of
/// the master detuning is taken as already included in omega_1 - omega_d.
inline MeanField mean_field_steady_state(const PhysicalParams& p, Complex drive, double g_ab_single) {
  const Complex i{0.0, 1.0};
  const double delta_1 = p.omega_1 - p.omega_d;
  const double delta_2 = p.omega_2 - p.omega_d;
  const double delta_m = p.omega_m - p.omega_d;

  MeanField mf;
  mf.a1 = 2.0 * drive / (p.kappa_1 + 2.0 * i * delta_1);
  mf.b = -2.0 * i * g_ab_single * std::norm(mf.a1) / (p.gamma_b + 2.0 * i * p.omega_b);

  // 0 = -(k2/2 + i D2) a2 - i g m - sqrt(eta k1 k2) a1
  // 0 = -(gm/2 + i Dm) m  - i g a2
  const Complex c11 = 0.5 * p.kappa_2 + i * delta_2;
  const Complex c12 = i * p.g_am;
  const Complex c22 = 0.5 * p.gamma_m + i * delta_m;
  const Complex rhs = -std::sqrt(p.eta * p.kappa_1 * p.kappa_2) * mf.a1;
  const Complex det = c11 * c22 - c12 * c12;
  const double scale = std::abs(c11 * c22) + std::abs(c12 * c12);
  if (std::abs(det) <= 1e-14 * scale)
    throw NumericalError("mean_field_steady_state: slave system is singular", std::abs(det));
  mf.a2 = rhs * c22 / det;
  mf.m = -c12 * rhs / det;
  return mf;
}

/// Real-positive drive amplitude reproducing |<a1>| = g_ab / g_ab_single.
inline double drive_for_coupling(const PhysicalParams& p, double g_ab_single) {
  if (!(g_ab_single > 0.0)) throw DomainError("drive_for_coupling: g_ab_single must be positive");
  const double delta_1 = p.omega_1 - p.omega_d;
  return (p.g_ab / g_ab_single) * std::abs(Complex(0.5 * p.kappa_1, delta_1));
}

/// Linearized model in units of omega_b.
struct LinearModel {
  double omega_b = 1.0;  // always 1 by construction
  double delta_1 = 0.0;  // omega_1 - omega_d
  double Delta_1 = 0.0;  // effective master detuning (same as delta_1 here)
  double Delta_2 = 0.0;
  double Delta_m = 0.0;
  double g_ab = 0.0;
  double g_am = 0.0;
  double kappa_1 = 0.0;
  double kappa_2 = 0.0;
  double gamma_b = 0.0;
  double gamma_m = 0.0;
  double eta = 1.0;
  double n_1 = 0.0;
  double n_eta = 0.0;
  double n_b = 0.0;
  double n_m = 0.0;
  Complex amp_a1{};
  Complex amp_b{};
  Complex amp_a2{};
  Complex amp_m{};
};

inline LinearModel build_linear_model(const PhysicalParams& p) {
  validate(p);
  const double unit = p.omega_b;
  LinearModel lm;
  lm.delta_1 = (p.omega_1 - p.omega_d) / unit;
  lm.Delta_1 = lm.delta_1;
  lm.Delta_2 = (p.omega_2 - p.omega_d) / unit;
  lm.Delta_m = (p.omega_m - p.omega_d) / unit;
  lm.g_ab = p.g_ab / unit;
  lm.g_am = p.g_am / unit;
  lm.kappa_1 = p.kappa_1 / unit;
  lm.kappa_2 = p.kappa_2 / unit;
  lm.gamma_b = p.gamma_b / unit;
  lm.gamma_m = p.gamma_m / unit;
  lm.eta = p.eta;
  lm.n_1 = bose_occupation(p.omega_1, p.T_1);
  lm.n_eta = bose_occupation(p.omega_2, p.T_2);
  lm.n_b = bose_occupation(p.omega_b, p.T_b);
  lm.n_m = bose_occupation(p.omega_m, p.T_m);
  return lm;
}

/// Same as above, additionally filling the mean-field amplitudes from the
/// drive that produces the configured g_ab.
inline LinearModel build_linear_model(const PhysicalParams& p, const CouplingBudget& budget) {
  LinearModel lm = build_linear_model(p);
  const MeanField mf =
      mean_field_steady_state(p, drive_for_coupling(p, budget.g_ab_single), budget.g_ab_single);
  lm.amp_a1 = mf.a1;
  lm.amp_b = mf.b;
  lm.amp_a2 = mf.a2;
  lm.amp_m = mf.m;
  return lm;
}

struct ExcitationCheck {
  double ratio;
  bool low;
};

inline constexpr double kLowExcitationThreshold = 1e-3;

/// |<m>|^2 / (2 N s) against the low-excitation threshold.
inline ExcitationCheck low_excitation_check(double magnon_number, double spin_count, double spin_s) {
  if (!(spin_count > 0.0) || !(spin_s > 0.0))
    throw DomainError("low_excitation_check: spin count and spin must be positive");
  const double ratio = magnon_number / (2.0 * spin_count * spin_s);
  return {ratio, ratio < kLowExcitationThreshold};
}

inline ExcitationCheck low_excitation_check(const LinearModel& model, const CouplingBudget& budget) {
  const SphereCoupling sphere = magnon_coupling_from_sphere(budget);
  return low_excitation_check(std::norm(model.amp_m), sphere.spin_count, budget.spin_s);
}

}  // namespace cascade
