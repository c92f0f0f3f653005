#pragma once

// Nonlinear solvers for one implicit time step.
//
//  * newton_frozen_A: semismooth Newton with a fixed diffusion matrix, direct
//    tridiagonal solves, no damping.
//  * double_iteration: outer loop re-assembling A at the last iterate, inner
//    Newton on the frozen system; stops on the true residual.
//  * fixed_point_monolithic: lags both F and A, solving a linear (or
//    capacity-only nonlinear) system per iteration.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "cryostef/step_problem.hpp"
#include "cryostef/tridiagonal.hpp"

namespace cryostef {

enum class Strategy {
  NewtonALag,            // double iteration
  FixedPointMonolithic,  // both nonlinearities lagged
  NewtonFrozenA,         // A lagged in time: solves with A(U_prev) only
};

struct SolverOptions {
  double tol = 1e-8;
  int max_inner = 20;
  int max_outer = 20;
  Strategy strategy = Strategy::NewtonALag;

  /// Throws ConfigError on non-positive tolerance or caps below 1.
  void validate() const;
};

struct StepReport {
  std::size_t outer_iters = 0;
  std::size_t inner_iters_total = 0;
  /// Infinity norms in iteration order; the last entry is the accepted residual.
  std::vector<double> residual_history;
  bool converged = false;

  double final_residual() const { return residual_history.empty() ? 0.0 : residual_history.back(); }
};

struct SolveResult {
  std::vector<double> u;
  StepReport report;
};

using ResidualFn = std::function<std::vector<double>(std::span<const double>)>;
using JacobianFn = std::function<SymTridiagonal(std::span<const double>)>;

/// Throws NonConvergence after opts.max_inner updates and SingularJacobian on
/// factorization breakdown.
SolveResult newton_frozen_A(const ResidualFn& residual, const JacobianFn& jacobian,
                            std::vector<double> u0, const SolverOptions& opts);

SolveResult double_iteration(const StepProblem& p, const SolverOptions& opts);

/// Iteration cap is opts.max_inner. Throws Divergence when an iterate leaves
/// twice the a-priori bound (||g|| + F_inf sqrt(M)) / (c_min + tau kappa0).
SolveResult fixed_point_monolithic(const StepProblem& p, const SolverOptions& opts);

/// Newton with A frozen at the previous time level (time-lagged diffusion).
SolveResult newton_lagged_operator(const StepProblem& p, const SolverOptions& opts);

/// Dispatches on opts.strategy.
SolveResult solve_step(const StepProblem& p, const SolverOptions& opts);

struct ContractionDiagnostic {
  double lipschitz_A = 0.0;  // probed L_A
  double kappa0 = 0.0;       // smallest eigenvalue of A(U_prev)
  double rhs_norm = 0.0;     // ||g||
  double newton_bound = 0.0;       // tau L_A ||g|| / (1 + tau kappa0)
  double fixed_point_bound = 0.0;  // (tau L_A + L_F)(||g|| + F_inf) / (1 + tau kappa0)
};

/// Probes L_A with `probes` deterministic random pairs within `radius` of U_prev.
ContractionDiagnostic contraction_diagnostic(const StepProblem& p, int probes = 64,
                                             double radius = 1.0);

}  // namespace cryostef
