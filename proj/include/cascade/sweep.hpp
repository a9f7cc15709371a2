#pragma once

// Grid evaluation of stability, steady state and EPR metrics.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "cascade/epr.hpp"
#include "cascade/errors.hpp"
#include "cascade/model.hpp"
#include "cascade/network.hpp"
#include "cascade/steady_state.hpp"

namespace cascade {

/// Sweepable knobs. Rates, couplings and detunings are in units of omega_b,
/// T in kelvin (applied to all four baths), eta dimensionless.
enum class Param { kappa_1, kappa_2, Delta_1, Delta_2, Delta_m, g_ab, g_am, gamma_b, gamma_m, eta, T };

inline constexpr std::pair<std::string_view, Param> kParamNames[] = {
    {"kappa_1", Param::kappa_1}, {"kappa_2", Param::kappa_2}, {"Delta_1", Param::Delta_1},
    {"Delta_2", Param::Delta_2}, {"Delta_m", Param::Delta_m}, {"g_ab", Param::g_ab},
    {"g_am", Param::g_am},       {"gamma_b", Param::gamma_b}, {"gamma_m", Param::gamma_m},
    {"eta", Param::eta},         {"T", Param::T},
};

inline std::optional<Param> parse_param(std::string_view name) {
  for (const auto& [n, p] : kParamNames)
    if (n == name) return p;
  return std::nullopt;
}

inline std::string_view param_name(Param p) {
  for (const auto& [n, q] : kParamNames)
    if (q == p) return n;
  return "?";
}

/// Detunings move the corresponding mode frequency relative to the drive.
inline void apply_param(PhysicalParams& p, Param which, double v) {
  const double u = p.omega_b;
  switch (which) {
    case Param::kappa_1: p.kappa_1 = v * u; break;
    case Param::kappa_2: p.kappa_2 = v * u; break;
    case Param::Delta_1: p.omega_1 = p.omega_d + v * u; break;
    case Param::Delta_2: p.omega_2 = p.omega_d + v * u; break;
    case Param::Delta_m: p.omega_m = p.omega_d + v * u; break;
    case Param::g_ab: p.g_ab = v * u; break;
    case Param::g_am: p.g_am = v * u; break;
    case Param::gamma_b: p.gamma_b = v * u; break;
    case Param::gamma_m: p.gamma_m = v * u; break;
    case Param::eta: p.eta = v; break;
    case Param::T: p.set_temperature(v); break;
  }
}

enum class Spacing { linear, log };

struct Axis {
  Param param = Param::kappa_1;
  double min = 0.0;
  double max = 0.0;
  int points = 1;
  Spacing spacing = Spacing::linear;

  void validate() const {
    if (points < 1) throw DomainError("sweep axis needs at least one point");
    if (points > 1 && !(min < max)) throw DomainError("sweep axis needs min < max");
    if (points == 1 && !(min <= max)) throw DomainError("sweep axis needs min <= max");
    if (spacing == Spacing::log && !(min > 0.0)) throw DomainError("log axis needs min > 0");
  }

  double value(int k) const {
    if (points == 1) return min;
    const double t = static_cast<double>(k) / (points - 1);
    if (k == points - 1) return max;
    if (spacing == Spacing::log) return min * std::pow(max / min, t);
    return min + t * (max - min);
  }
};

/// target = coeff * (value of axis1 or axis2)
struct Link {
  Param target = Param::kappa_2;
  double coeff = 1.0;
  int axis = 1;
};

struct SweepSpec {
  PhysicalParams base;
  Axis axis1;
  std::optional<Axis> axis2;
  std::vector<Link> links;

  std::size_t size() const {
    return static_cast<std::size_t>(axis1.points) * static_cast<std::size_t>(axis2 ? axis2->points : 1);
  }
};

// ---------------------------------------------------------------------------

struct PointResult {
  LinearModel model;
  StabilityReport stability;
  std::optional<CovarianceMatrix> covariance;
  double residual = std::numeric_limits<double>::quiet_NaN();
  std::optional<PhysicalityReport> physicality;
  std::optional<EprReport> epr;
  std::string status = "ok";
};

/// The full pipeline for one parameter set. Numerical failures past the
/// stability check are reported in `status` rather than thrown.
inline PointResult evaluate_point(const PhysicalParams& params) {
  PointResult out;
  out.model = build_linear_model(params);
  out.stability = is_stable(out.model);
  if (!out.stability.stable) {
    out.status = "unstable";
    return out;
  }
  try {
    const LinearDynamics dyn = build_dynamics(out.model);
    out.covariance = solve_lyapunov(dyn);
    out.residual = lyapunov_residual(dyn, out.covariance->sigma);
    out.physicality = physicality_check(*out.covariance);
    out.epr = evaluate_epr(reduce_bm(*out.covariance));
    if (!out.physicality->physical) out.status = "unphysical";
  } catch (const std::exception& e) {
    out.status = std::string("error: ") + e.what();
  }
  return out;
}

struct SweepRow {
  double axis1 = 0.0;
  std::optional<double> axis2;
  bool stable = false;
  std::string status;
  std::optional<EprReport> epr;
  double residual = std::numeric_limits<double>::quiet_NaN();
  double min_symplectic = std::numeric_limits<double>::quiet_NaN();
};

inline PhysicalParams point_params(const SweepSpec& spec, double v1, std::optional<double> v2) {
  PhysicalParams p = spec.base;
  apply_param(p, spec.axis1.param, v1);
  if (spec.axis2 && v2) apply_param(p, spec.axis2->param, *v2);
  for (const Link& l : spec.links) {
    const double src = l.axis == 2 && v2 ? *v2 : v1;
    apply_param(p, l.target, l.coeff * src);
  }
  return p;
}

inline SweepRow make_row(double v1, std::optional<double> v2, const PointResult& r) {
  SweepRow row;
  row.axis1 = v1;
  row.axis2 = v2;
  row.stable = r.stability.stable;
  row.status = r.status;
  row.residual = r.residual;
  if (r.physicality) row.min_symplectic = r.physicality->min_symplectic;
  if (r.stability.stable) row.epr = r.epr;
  return row;
}

/// Rows in row-major order (axis1 outer, axis2 inner). Output does not
/// depend on `workers`.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned workers = 1) {
  spec.axis1.validate();
  if (spec.axis2) spec.axis2->validate();
  for (const Link& l : spec.links)
    if (l.axis == 2 && !spec.axis2) throw DomainError("link refers to a missing axis2");

  const std::size_t n2 = spec.axis2 ? spec.axis2->points : 1;
  const std::size_t total = spec.size();
  std::vector<SweepRow> rows(total);

  auto work = [&](std::size_t idx) {
    const int i = static_cast<int>(idx / n2);
    const int j = static_cast<int>(idx % n2);
    const double v1 = spec.axis1.value(i);
    const std::optional<double> v2 = spec.axis2 ? std::optional<double>(spec.axis2->value(j)) : std::nullopt;
    try {
      rows[idx] = make_row(v1, v2, evaluate_point(point_params(spec, v1, v2)));
    } catch (const std::exception& e) {
      SweepRow row;
      row.axis1 = v1;
      row.axis2 = v2;
      row.status = std::string("error: ") + e.what();
      rows[idx] = std::move(row);
    }
  };

  workers = std::max(1u, workers);
  if (workers == 1) {
    for (std::size_t idx = 0; idx < total; ++idx) work(idx);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t idx = next++; idx < total; idx = next++) work(idx);
    });
  pool.clear();
  return rows;
}

// ---------------------------------------------------------------------------
// CSV: axis1,axis2,stable,status,E_bm,S_m_b,S_b_m,theta_b,theta_m,f_x,f_y

inline std::string format_g12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace detail {
inline std::string csv_safe(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  return s;
}
}  // namespace detail

inline constexpr std::string_view kCsvHeader = "axis1,axis2,stable,status,E_bm,S_m_b,S_b_m,theta_b,theta_m,f_x,f_y";

inline void emit_csv(const std::vector<SweepRow>& table, std::ostream& os) {
  if (table.empty()) throw DomainError("emit_csv: empty table");
  os << kCsvHeader << '\n';
  for (const SweepRow& r : table) {
    os << format_g12(r.axis1) << ',' << (r.axis2 ? format_g12(*r.axis2) : "") << ','
       << (r.stable ? "true" : "false") << ',' << detail::csv_safe(r.status);
    if (r.stable && r.epr) {
      const EprReport& e = *r.epr;
      for (double v : {e.E_bm, e.S_m_given_b, e.S_b_given_m, e.theta_b, e.theta_m, e.f_x, e.f_y})
        os << ',' << format_g12(v);
    } else {
      os << ",,,,,,,";
    }
    os << '\n';
  }
}

inline void emit_csv(const std::vector<SweepRow>& table, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path + " for writing");
  emit_csv(table, f);
  f.flush();
  if (!f) throw IoError("failed writing " + path);
}

struct Extremum {
  double value = std::numeric_limits<double>::infinity();
  double axis1 = 0.0;
  std::optional<double> axis2;
};

struct SweepSummary {
  std::size_t points = 0;
  std::size_t stable = 0;
  std::size_t failed = 0;  // stable points whose status is not ok
  Extremum min_E;
  Extremum min_S_m_b;
  Extremum min_S_b_m;
};

inline SweepSummary summarize(const std::vector<SweepRow>& table) {
  SweepSummary s;
  s.points = table.size();
  auto take = [](Extremum& ex, double v, const SweepRow& r) {
    if (v < ex.value) ex = {v, r.axis1, r.axis2};
  };
  for (const SweepRow& r : table) {
    if (!r.stable) {
      if (r.status.rfind("error", 0) == 0) ++s.failed;
      continue;
    }
    ++s.stable;
    if (r.status != "ok") ++s.failed;
    if (!r.epr) continue;
    take(s.min_E, r.epr->E_bm, r);
    take(s.min_S_m_b, r.epr->S_m_given_b, r);
    take(s.min_S_b_m, r.epr->S_b_given_m, r);
  }
  return s;
}

inline void print_summary(std::ostream& os, const SweepSummary& s) {
  auto loc = [](const Extremum& e) {
    if (!std::isfinite(e.value)) return std::string("n/a");
    std::string out = format_g12(e.value) + " at (" + format_g12(e.axis1);
    if (e.axis2) out += ", " + format_g12(*e.axis2);
    return out + ")";
  };
  os << "grid " << s.points << " points, stable fraction "
     << format_g12(s.points ? static_cast<double>(s.stable) / static_cast<double>(s.points) : 0.0)
     << ", failed " << s.failed << ", min E_bm " << loc(s.min_E) << ", min S_m|b " << loc(s.min_S_m_b)
     << ", min S_b|m " << loc(s.min_S_b_m) << '\n';
}

}  // namespace cascade
