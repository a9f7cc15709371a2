#pragma once

// Phonon-magnon entanglement witness and EPR steering parameters evaluated
// on the reduced (b, m) covariance matrix, ordered (xb, pb, xm, pm).
//
// Rotated quadratures: x^t = x cos t + p sin t, p^t = -x sin t + p cos t.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "cascade/errors.hpp"
#include "cascade/nelder_mead.hpp"
#include "cascade/network.hpp"
#include "cascade/steady_state.hpp"

namespace cascade {

using TwoModeCov = Mat4;

namespace tm {
inline constexpr int xb = 0, pb = 1, xm = 2, pm = 3;
}

inline constexpr double kPi = std::numbers::pi;

inline TwoModeCov reduce_bm(const CovarianceMatrix& cov) { return cov.sigma.block<4, 4>(quad::xb, quad::xb); }

inline Mat2 quadrature_rotation(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Mat2 R;
  R << c, s, -s, c;
  return R;
}

inline TwoModeCov rotated_quadrature_cov(const TwoModeCov& cov, double theta_b, double theta_m) {
  Mat4 R = Mat4::Zero();
  R.block<2, 2>(0, 0) = quadrature_rotation(theta_b);
  R.block<2, 2>(2, 2) = quadrature_rotation(theta_m);
  return R * cov * R.transpose();
}

/// Wraps an angle into [0, pi); returns the number of half turns removed.
inline std::pair<double, long> wrap_half_turn(double theta) {
  const double turns = std::floor(theta / kPi);
  double w = theta - turns * kPi;
  long k = static_cast<long>(turns);
  if (w >= kPi) {
    w -= kPi;
    ++k;
  }
  if (w < 0.0) w = 0.0;
  return {w, k};
}

// ---------------------------------------------------------------------------
// Entanglement witness
//   E = 4 V(xm + fx xb) V(pm - fy pb) / (1 + fx fy)^2,   fx fy > 0

inline constexpr double kGainBand = 1e-12;

namespace detail {

// C is already rotated.
inline double witness_value(const TwoModeCov& C, double fx, double fy) {
  using namespace tm;
  const double vx = C(xm, xm) + 2.0 * fx * C(xm, xb) + fx * fx * C(xb, xb);
  const double vp = C(pm, pm) - 2.0 * fy * C(pm, pb) + fy * fy * C(pb, pb);
  const double den = 1.0 + fx * fy;
  return 4.0 * vx * vp / (den * den);
}

inline bool admissible_gains(double fx, double fy) {
  return fx * fy > 0.0 && std::abs(fx) >= kGainBand && std::abs(fy) >= kGainBand;
}

// Best gains at fixed angles. With u = (1, fx), v = (1, fy),
//   E = 4 (u^T Mx u)(v^T Mp v) / (u.v)^2,
// whose unconstrained minimum over both projective lines is 4 lambda_min(Mx Mp)
// at v = its eigenvector, u = Mx^-1 v. If that pair has fx fy <= 0 the
// constrained infimum sits on an edge fx -> 0, fx -> inf, fy -> 0 or fy -> inf,
// each of which has a closed-form minimum over the remaining gain.
struct GainOptimum {
  double value = std::numeric_limits<double>::infinity();
  double f_x = 1.0;
  double f_y = 1.0;
};

// stand-ins for the limits f -> 0 and f -> inf
inline constexpr double kGainLimit = 1e12;

inline GainOptimum best_gains(const TwoModeCov& C) {
  using namespace tm;
  const double a = C(xm, xm), c = C(xm, xb), b = C(xb, xb);
  const double ap = C(pm, pm), cp = -C(pm, pb), bp = C(pb, pb);  // Mp = [[ap, cp], [cp, bp]]
  const double det_x = a * b - c * c, det_p = ap * bp - cp * cp;
  GainOptimum best;
  auto consider = [&](double fx, double fy) {
    const double v = witness_value(C, fx, fy);
    if (admissible_gains(fx, fy) && v < best.value) best = {v, fx, fy};
  };
  auto near_zero = [](double ref) { return std::copysign(kGainBand, ref == 0.0 ? 1.0 : ref); };
  auto near_inf = [](double ref) { return std::copysign(kGainLimit, ref == 0.0 ? 1.0 : ref); };

  // interior stationary pair
  const double n11 = a * ap + c * cp, n12 = a * cp + c * bp, n21 = c * ap + b * cp, n22 = c * cp + b * bp;
  const double tr = n11 + n22, dt = n11 * n22 - n12 * n21;
  const double lam = 0.5 * (tr - std::sqrt(std::max(0.0, tr * tr - 4.0 * dt)));
  Eigen::Vector2d va(n12, lam - n11), vb(lam - n22, n21);
  Eigen::Vector2d v = va.squaredNorm() >= vb.squaredNorm() ? va : vb;
  if (!(v.squaredNorm() > 1e-24 * (tr * tr + 1e-300))) v = Eigen::Vector2d(1.0, 1.0);  // N ~ lambda I
  if (det_x > 0.0 && v(0) != 0.0) {
    const Eigen::Vector2d u(b * v(0) - c * v(1), -c * v(0) + a * v(1));  // det_x Mx^-1 v
    if (u(0) != 0.0) consider(u(1) / u(0), v(1) / v(0));
  }
  if (best.value < std::numeric_limits<double>::infinity()) return best;

  // edges; on each the free gain minimizes its own variance factor
  if (bp > 0.0) consider(near_zero(cp / bp), cp / bp);     // fx -> 0:   4 a det_p / bp
  if (cp != 0.0) consider(near_inf(ap / cp), ap / cp);     // fx -> inf: 4 b det_p / ap
  if (b > 0.0) consider(-c / b, near_zero(-c / b));        // fy -> 0:   4 ap det_x / b
  if (c != 0.0) consider(-a / c, near_inf(-a / c));        // fy -> inf: 4 bp det_x / a
  // vanishing cross terms leave the corner fx, fy -> 0
  consider(kGainBand, kGainBand);
  consider(-kGainBand, -kGainBand);
  consider(kGainLimit, kGainLimit);
  consider(-kGainLimit, -kGainLimit);
  return best;
}

}  // namespace detail

inline double witness_objective(const TwoModeCov& cov, double theta_b, double theta_m, double f_x, double f_y) {
  return detail::witness_value(rotated_quadrature_cov(cov, theta_b, theta_m), f_x, f_y);
}

struct WitnessResult {
  double value = std::numeric_limits<double>::infinity();
  double theta_b = 0.0;
  double theta_m = 0.0;
  double f_x = 1.0;
  double f_y = 1.0;
  int evaluations = 0;
};

inline constexpr int kWitnessAngleGrid = 96;
inline constexpr int kWitnessRefinedCandidates = 8;
inline constexpr int kWitnessMaxSeeds = 32;

inline WitnessResult witness_E(const TwoModeCov& cov) {
  int evaluations = 0;
  auto profile = [&](const std::array<double, 2>& t) {
    ++evaluations;
    return detail::best_gains(rotated_quadrature_cov(cov, t[0], t[1])).value;
  };

  struct Candidate {
    double value;
    std::array<double, 2> t;
  };
  std::vector<Candidate> grid;
  grid.reserve(kWitnessAngleGrid * kWitnessAngleGrid);
  for (int ib = 0; ib < kWitnessAngleGrid; ++ib)
    for (int im = 0; im < kWitnessAngleGrid; ++im) {
      const std::array<double, 2> t{kPi * ib / kWitnessAngleGrid, kPi * im / kWitnessAngleGrid};
      grid.push_back({profile(t), t});
    }

  // the profile is multimodal in the angles: polish every discrete local
  // minimum of the (pi-periodic) grid, plus the lowest cells overall
  const int n = kWitnessAngleGrid;
  auto at = [&](int ib, int im) { return grid[((ib + n) % n) * n + (im + n) % n].value; };
  std::vector<Candidate> seeds;
  for (int ib = 0; ib < n; ++ib)
    for (int im = 0; im < n; ++im) {
      const double v = at(ib, im);
      bool minimum = true;
      for (int db = -1; db <= 1 && minimum; ++db)
        for (int dm = -1; dm <= 1 && minimum; ++dm)
          if ((db != 0 || dm != 0) && at(ib + db, im + dm) < v) minimum = false;
      if (minimum) seeds.push_back(grid[ib * n + im]);
    }
  auto by_value = [](const Candidate& x, const Candidate& y) { return x.value < y.value; };
  const auto top = grid.begin() + std::min<std::ptrdiff_t>(kWitnessRefinedCandidates, std::ssize(grid));
  std::partial_sort(grid.begin(), top, grid.end(), by_value);
  seeds.insert(seeds.end(), grid.begin(), top);
  std::sort(seeds.begin(), seeds.end(), by_value);
  if (std::ssize(seeds) > kWitnessMaxSeeds) seeds.resize(kWitnessMaxSeeds);

  Candidate best = seeds.front();
  bool converged = false;
  const double h = 0.5 * kPi / n;
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    // minima can sit in flat valleys, so the value tolerance scales with E
    const SimplexOptions opt{1e-10 * std::max(1.0, seeds[k].value), 1e-8, 10000};
    const auto r = nelder_mead<2>(profile, seeds[k].t, {h, h}, opt);
    if (r.value <= best.value) {
      best = {r.value, r.x};
      converged = r.converged;
    } else if (k == 0) {
      converged = r.converged;
    }
  }
  if (!converged || !std::isfinite(best.value))
    throw NumericalError("witness_E: angle refinement did not converge", best.value);

  WitnessResult out;
  out.evaluations = evaluations;
  out.theta_b = wrap_half_turn(best.t[0]).first;
  out.theta_m = wrap_half_turn(best.t[1]).first;
  // gains are recomputed at the wrapped angles, so no sign bookkeeping is needed
  const detail::GainOptimum g = detail::best_gains(rotated_quadrature_cov(cov, out.theta_b, out.theta_m));
  out.f_x = g.f_x;
  out.f_y = g.f_y;
  out.value = witness_objective(cov, out.theta_b, out.theta_m, out.f_x, out.f_y);
  return out;
}

// ---------------------------------------------------------------------------
// Steering: inferred variances of the target mode, each target quadrature
// estimated linearly from one quadrature q(phi) = x cos phi + p sin phi of the
// reference mode. The x- and p-estimates use independently chosen reference
// quadratures.

enum class Direction { m_given_b, b_given_m };

struct SteeringBlocks {
  Mat2 target;
  Mat2 reference;
  Mat2 cross;  // rows: target quadratures, cols: reference quadratures
};

inline SteeringBlocks steering_blocks(const TwoModeCov& cov, Direction dir) {
  const int t = dir == Direction::m_given_b ? tm::xm : tm::xb;
  const int r = dir == Direction::m_given_b ? tm::xb : tm::xm;
  return {cov.block<2, 2>(t, t), cov.block<2, 2>(r, r), cov.block<2, 2>(t, r)};
}

struct Inference {
  double variance;
  double gain;  // V(target + gain * reference) is minimal
};

inline Inference infer(const SteeringBlocks& s, const Eigen::Vector2d& target, double phi) {
  const Eigen::Vector2d ref(std::cos(phi), std::sin(phi));
  const double vref = ref.dot(s.reference * ref);
  if (!(vref > 0.0)) throw ContractError("steering: reference quadrature has non-positive variance");
  const double c = target.dot(s.cross * ref);
  return {target.dot(s.target * target) - c * c / vref, -c / vref};
}

inline Eigen::Vector2d target_x(double theta) { return {std::cos(theta), std::sin(theta)}; }
inline Eigen::Vector2d target_p(double theta) { return {-std::sin(theta), std::cos(theta)}; }

/// 4 V_inf(x^theta) V_inf(p^theta) at explicit reference angles.
inline double steering_objective(const TwoModeCov& cov, Direction dir, double theta, double phi_x, double phi_p) {
  const SteeringBlocks s = steering_blocks(cov, dir);
  return 4.0 * infer(s, target_x(theta), phi_x).variance * infer(s, target_p(theta), phi_p).variance;
}

struct SteeringResult {
  double value = std::numeric_limits<double>::infinity();
  double theta = 0.0;  // target quadrature angle
  double phi_x = 0.0;  // reference quadrature used for the x estimate
  double phi_p = 0.0;  // reference quadrature used for the p estimate
  double gain_x = 0.0;
  double gain_p = 0.0;
};

inline constexpr int kSteeringAngleGrid = 64;

namespace detail {

template <typename F>
std::pair<double, double> grid_then_brent(F&& f, int grid) {
  const double h = kPi / grid;
  double arg = 0.0, val = std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid; ++k) {
    const double v = f(k * h);
    if (v < val) {
      val = v;
      arg = k * h;
    }
  }
  const auto r = boost::math::tools::brent_find_minima(f, arg - h, arg + h, std::numeric_limits<double>::digits / 2);
  if (r.second < val) return {r.first, r.second};
  return {arg, val};
}

}  // namespace detail

inline SteeringResult steering_S(const TwoModeCov& cov, Direction dir) {
  const SteeringBlocks s = steering_blocks(cov, dir);
  if (!(s.reference.determinant() > 0.0) || !(s.reference.trace() > 0.0))
    throw ContractError("steering_S: reference block is not positive definite");

  auto best_phi = [&](const Eigen::Vector2d& a) {
    return detail::grid_then_brent([&](double phi) { return infer(s, a, phi).variance; }, kSteeringAngleGrid);
  };
  auto profile = [&](double theta) {
    return 4.0 * best_phi(target_x(theta)).second * best_phi(target_p(theta)).second;
  };

  SteeringResult out;
  const auto [theta0, v0] = detail::grid_then_brent(profile, kSteeringAngleGrid);
  double theta = theta0;
  double phi_x = best_phi(target_x(theta)).first;
  double phi_p = best_phi(target_p(theta)).first;
  double value = steering_objective(cov, dir, theta, phi_x, phi_p);

  // coordinate-descent polish in (theta, phi_x, phi_p)
  constexpr int bits = std::numeric_limits<double>::digits / 2;
  const double w = kPi / kSteeringAngleGrid;
  for (int sweep = 0; sweep < 8; ++sweep) {
    const double before = value;
    auto r_t = boost::math::tools::brent_find_minima(
        [&](double t) { return steering_objective(cov, dir, t, phi_x, phi_p); }, theta - w, theta + w, bits);
    if (r_t.second < value) {
      theta = r_t.first;
      value = r_t.second;
    }
    auto r_x = boost::math::tools::brent_find_minima(
        [&](double f) { return steering_objective(cov, dir, theta, f, phi_p); }, phi_x - w, phi_x + w, bits);
    if (r_x.second < value) {
      phi_x = r_x.first;
      value = r_x.second;
    }
    auto r_p = boost::math::tools::brent_find_minima(
        [&](double f) { return steering_objective(cov, dir, theta, phi_x, f); }, phi_p - w, phi_p + w, bits);
    if (r_p.second < value) {
      phi_p = r_p.first;
      value = r_p.second;
    }
    if (before - value <= 1e-15 * std::abs(value)) break;
  }

  out.theta = wrap_half_turn(theta).first;
  out.phi_x = wrap_half_turn(phi_x).first;
  out.phi_p = wrap_half_turn(phi_p).first;
  const Inference ix = infer(s, target_x(out.theta), out.phi_x);
  const Inference ip = infer(s, target_p(out.theta), out.phi_p);
  out.gain_x = ix.gain;
  out.gain_p = ip.gain;
  out.value = 4.0 * ix.variance * ip.variance;
  return out;
}

/// 4 det(sigma_target - sigma_cross sigma_ref^-1 sigma_cross^T); `reference`
/// is the conditioning mode.
inline double schur_conditional_det(const TwoModeCov& cov, Mode reference) {
  if (reference != Mode::b && reference != Mode::m)
    throw ContractError("schur_conditional_det: reference must be b or m");
  const SteeringBlocks s = steering_blocks(cov, reference == Mode::b ? Direction::m_given_b : Direction::b_given_m);
  const double det = s.reference.determinant();
  if (!(std::abs(det) > 1e-300) || !(det > 0.0))
    throw ContractError("schur_conditional_det: reference block is singular");
  const Mat2 cond = s.target - s.cross * s.reference.inverse() * s.cross.transpose();
  return 4.0 * cond.determinant();
}

struct EprReport {
  double E_bm = 0.0;
  double S_m_given_b = 0.0;
  double S_b_given_m = 0.0;
  double theta_b = 0.0;
  double theta_m = 0.0;
  double f_x = 0.0;
  double f_y = 0.0;
  bool entangled = false;
  bool steer_m = false;
  bool steer_b = false;
  WitnessResult witness;
  SteeringResult m_given_b;
  SteeringResult b_given_m;
};

inline EprReport evaluate_epr(const TwoModeCov& cov) {
  EprReport r;
  r.witness = witness_E(cov);
  r.m_given_b = steering_S(cov, Direction::m_given_b);
  r.b_given_m = steering_S(cov, Direction::b_given_m);
  r.E_bm = r.witness.value;
  r.theta_b = r.witness.theta_b;
  r.theta_m = r.witness.theta_m;
  r.f_x = r.witness.f_x;
  r.f_y = r.witness.f_y;
  r.S_m_given_b = r.m_given_b.value;
  r.S_b_given_m = r.b_given_m.value;
  r.entangled = r.E_bm < 1.0;
  r.steer_m = r.S_m_given_b < 1.0;
  r.steer_b = r.S_b_given_m < 1.0;
  return r;
}

}  // namespace cascade
