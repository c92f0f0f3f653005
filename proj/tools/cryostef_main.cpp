// cryostef <mode> [--config FILE] [--out DIR] [--strict-init]
//          [--solver newton-alag|fixed-point|newton-frozen] [--tol 1e-8] [--max-iter 20]
//
// Exit codes: 0 ok, 2 config error, 3 solver non-convergence,
// 4 infeasible initial data.

#include <CLI11.hpp>
#include <fmt/core.h>

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include "cryostef/errors.hpp"
#include "cryostef/harness/experiments.hpp"

namespace {

using namespace cryostef;
using namespace cryostef::harness;

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitInfeasible = 4;

void warn_clamped(std::size_t cells) {
  if (cells > 0) {
    fmt::print(stderr, "warning: initial fraction clamped into the admissible band in {} cell(s)\n",
               cells);
  }
}

int run(RunConfig& cfg) {
  const auto& out = cfg.out_dir;
  switch (cfg.mode) {
    case Mode::Pde: {
      auto result = run_pde(cfg);
      if (cfg.closure == ClosureTag::HYST || cfg.closure == ClosureTag::NEQ) {
        warn_clamped(result.adjusted_cells);
      }
      write_pde_outputs(result, out);
      const auto s = result.summary();
      fmt::print("{} steps, N_min={} N_max={} N_ave={:.5f}\n", result.reports.size(), s.n_min,
                 s.n_max, s.n_ave);
      return 0;
    }
    case Mode::OdeCoupled: {
      auto result = run_ode_coupled(cfg);
      warn_clamped(result.adjusted_cells);
      write_trajectory(result, out / "trajectory.csv");
      fmt::print("{} steps written to {}\n", result.reports.size(),
                 (out / "trajectory.csv").string());
      return 0;
    }
    case Mode::OdeDriven: {
      auto result = run_ode_driven(cfg);
      if (result.initial_clamped) warn_clamped(1);
      write_trajectory(result, out / "trajectory.csv");
      fmt::print("{} steps written to {}\n", result.points.size(),
                 (out / "trajectory.csv").string());
      return 0;
    }
    case Mode::Convergence: {
      const auto rows = convergence_study(cfg, sweep_threads_from_env());
      write_orders(rows, out / "orders.csv");
      for (const auto& r : rows) {
        fmt::print("tau={:<8g} err_l1={:.4e} err_l2={:.4e} err_inf={:.4e} order_inf={:.4f}\n",
                   r.tau, r.err_l1, r.err_l2, r.err_inf, r.order_inf);
      }
      return 0;
    }
    case Mode::Calibrate: {
      const auto cal = calibrate(cfg);
      write_envelope(cal, out / "envelope.csv");
      fmt::print("a = {:.4f}\nC = {:.4f}\nD = {:.4f}\n", cal.envelope.a, cal.envelope.C,
                 cal.envelope.D);
      return 0;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cryostef: freeze/thaw heat equation solver with EQ, NEQ and HYST closures"};
  std::string mode_text;
  std::string config_file;
  std::optional<std::string> out_dir;
  bool strict_init = false;
  std::optional<std::string> solver;
  std::optional<double> tol;
  std::optional<int> max_iter;

  app.add_option("mode", mode_text, "pde | ode-coupled | ode-driven | calibrate | convergence")
      ->required();
  app.add_option("--config", config_file, "key = value configuration file");
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--strict-init", strict_init, "fail on infeasible initial data instead of clamping");
  app.add_option("--solver", solver, "newton-alag | fixed-point | newton-frozen");
  app.add_option("--tol", tol, "residual tolerance");
  app.add_option("--max-iter", max_iter, "Newton iteration cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const Mode mode = parse_mode(mode_text);
    RunConfig cfg = config_file.empty() ? RunConfig::defaults(mode) : load_config(config_file, mode);
    if (out_dir) cfg.out_dir = *out_dir;
    if (strict_init) cfg.init_policy = InitPolicy::Strict;
    if (solver) apply_setting(cfg, "solver", *solver);
    if (tol) cfg.solver.tol = *tol;
    if (max_iter) cfg.solver.max_inner = *max_iter;
    cfg.validate();
    return run(cfg);
  } catch (const ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kExitConfig;
  } catch (const InvalidBounds& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kExitConfig;
  } catch (const DegenerateCalibration& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kExitConfig;
  } catch (const NonConvergence& e) {
    fmt::print(stderr, "solver failed at step {}: {} (last residual {:.3e})\n", e.step(), e.what(),
               e.last_residual());
    return kExitSolver;
  } catch (const InfeasibleState& e) {
    fmt::print(stderr, "infeasible initial data: {}\n", e.what());
    return kExitInfeasible;
  } catch (const SingularJacobian& e) {
    fmt::print(stderr, "solver failed: {}\n", e.what());
    return kExitSolver;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
}
