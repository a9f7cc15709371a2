// cascade_epr: steady-state phonon-magnon entanglement and steering in a
// cascaded electromechanical / electromagnonical network.
//
// Exit codes: 0 success, 1 config error, 2 instability, 3 verification failure.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <thread>

#include "cascade/config.hpp"
#include "cascade/matrix_io.hpp"
#include "cascade/sweep.hpp"
#include "cascade/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitUnstable = 2;
constexpr int kExitVerify = 3;

using cascade::format_g12;

void print_stability(std::ostream& os, const cascade::StabilityReport& s) {
  os << "stable: " << (s.stable ? "true" : "false") << '\n';
  os << "master eigenvalues:";
  for (const auto& e : s.eigenvalues) os << ' ' << format_g12(e.real()) << (e.imag() < 0 ? "" : "+") << format_g12(e.imag()) << 'i';
  os << '\n';
}

int cmd_point(const cascade::RunConfig& cfg) {
  const cascade::PointResult r = cascade::evaluate_point(cfg.params);
  print_stability(std::cout, r.stability);
  if (!r.stability.stable) return kExitUnstable;
  std::cout << "status: " << r.status << '\n';
  if (r.epr) {
    const cascade::EprReport& e = *r.epr;
    std::cout << "E_bm: " << format_g12(e.E_bm) << (e.entangled ? " (entangled)" : "") << '\n'
              << "  theta_b " << format_g12(e.theta_b) << ", theta_m " << format_g12(e.theta_m) << ", f_x "
              << format_g12(e.f_x) << ", f_y " << format_g12(e.f_y) << '\n';
    auto steer = [](const char* name, const cascade::SteeringResult& s, bool flag) {
      std::cout << name << ": " << format_g12(s.value) << (flag ? " (steerable)" : "") << '\n'
                << "  theta " << format_g12(s.theta) << ", phi_x " << format_g12(s.phi_x) << ", phi_p "
                << format_g12(s.phi_p) << ", gain_x " << format_g12(s.gain_x) << ", gain_p " << format_g12(s.gain_p)
                << '\n';
    };
    steer("S_m|b", e.m_given_b, e.steer_m);
    steer("S_b|m", e.b_given_m, e.steer_b);
  }
  std::cout << "lyapunov residual: " << format_g12(r.residual) << '\n';
  if (r.physicality) std::cout << "min symplectic eigenvalue: " << format_g12(r.physicality->min_symplectic) << '\n';

  if (cfg.budget && cfg.budget->g_ab_single > 0.0 && cfg.budget->sphere_diameter > 0.0 &&
      cfg.budget->spin_density > 0.0) {
    const cascade::LinearModel lm = cascade::build_linear_model(cfg.params, *cfg.budget);
    const auto sphere = cascade::magnon_coupling_from_sphere(*cfg.budget);
    const auto ex = cascade::low_excitation_check(lm, *cfg.budget);
    std::cout << "spin count: " << format_g12(sphere.spin_count) << '\n'
              << "mean magnon number: " << format_g12(std::norm(lm.amp_m)) << '\n'
              << "low excitation ratio: " << format_g12(ex.ratio) << (ex.low ? " (ok)" : " (violated)") << '\n';
  }
  return kExitOk;
}

int cmd_sweep(const cascade::RunConfig& cfg, unsigned workers) {
  if (!cfg.sweep) throw cascade::ConfigError("sweep: config has no [sweep] section");
  if (cfg.output_path.empty()) throw cascade::ConfigError("sweep: no output path (use --out or [output] path)");
  const auto table = cascade::run_sweep(*cfg.sweep, workers);
  cascade::emit_csv(table, cfg.output_path);
  cascade::print_summary(std::cout, cascade::summarize(table));
  return kExitOk;
}

int cmd_verify(const cascade::RunConfig& cfg, double corrupt, int models, int covariances) {
  cascade::VerifyOptions opt;
  opt.corrupt_sigma00 = corrupt;
  opt.random_models = models;
  opt.random_covariances = covariances;
  const cascade::LinearModel lm = cascade::build_linear_model(cfg.params);
  const cascade::VerifyReport rep = cascade::run_verification(&lm, opt);
  if (!rep.note.empty()) std::cout << "note: " << rep.note << '\n';
  for (const cascade::Check& c : rep.checks) {
    std::cout << (c.ok() ? "PASS " : "FAIL ") << c.name << ": " << c.passed << '/' << c.total << " within "
              << format_g12(c.tolerance) << ", worst " << format_g12(c.worst) << '\n';
    for (const std::string& o : c.offenders) std::cout << "  offender: " << o << '\n';
  }
  std::cout << (rep.ok() ? "verification passed" : "verification FAILED") << '\n';
  return rep.ok() ? kExitOk : kExitVerify;
}

int cmd_dump(const cascade::RunConfig& cfg) {
  const cascade::LinearModel lm = cascade::build_linear_model(cfg.params);
  const cascade::LinearDynamics dyn = cascade::build_dynamics(lm);
  std::cout << "# drift A\n";
  cascade::write_grid(std::cout, dyn.A);
  std::cout << "# diffusion D\n";
  cascade::write_grid(std::cout, dyn.D);
  if (cascade::is_stable(lm).stable) {
    std::cout << "# covariance sigma\n";
    cascade::write_grid(std::cout, cascade::solve_lyapunov(dyn).sigma);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady-state phonon-magnon EPR entanglement and steering in a cascaded cavity network"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_path;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  int verbose = -1;
  double corrupt = 0.0;
  int models = 100;
  int covariances = 1000;

  app.add_option("--config", config_path, "Run configuration file")->required();
  app.add_option("--out", out_path, "CSV destination for sweep (overrides [output] path)");
  app.add_option("--workers", workers, "Sweep worker threads")->check(CLI::PositiveNumber);
  app.add_option("--verbose", verbose, "Verbosity; >= 1 echoes the effective configuration to stderr");

  auto* point = app.add_subcommand("point", "Evaluate one parameter point");
  auto* sweep = app.add_subcommand("sweep", "Evaluate the configured grid and write CSV");
  auto* verify = app.add_subcommand("verify", "Run the oracle suite");
  auto* dump = app.add_subcommand("dump-matrices", "Print A, D and the steady-state covariance");
  verify->add_option("--models", models, "Random stable models for the ODE oracle")->check(CLI::NonNegativeNumber);
  verify->add_option("--covariances", covariances, "Random two-mode covariances for the Schur oracle")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--inject-fault", corrupt, "Test hook: add this to sigma[0,0] of every solve")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    cascade::RunConfig cfg = cascade::load_config(config_path);
    if (!out_path.empty()) cfg.output_path = out_path;
    if (verbose >= 0) cfg.verbosity = verbose;
    if (cfg.verbosity >= 1) {
      std::cerr << cascade::echo_config(cfg);
      for (const std::string& w : cascade::scale_warnings(cfg.params)) std::cerr << "# warning: " << w << '\n';
    }

    if (*point) return cmd_point(cfg);
    if (*sweep) return cmd_sweep(cfg, workers);
    if (*verify) return cmd_verify(cfg, corrupt, models, covariances);
    if (*dump) return cmd_dump(cfg);
  } catch (const cascade::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const cascade::StabilityError& e) {
    std::cerr << "unstable: " << e.what() << '\n';
    return kExitUnstable;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
