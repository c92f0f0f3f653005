#include "cryostef/solve.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "cryostef/constitutive.hpp"
#include "cryostef/errors.hpp"

namespace cryostef {

void SolverOptions::validate() const {
  if (!(tol > 0.0)) throw ConfigError("solver tolerance must be positive");
  if (max_inner < 1) throw ConfigError("max_inner must be at least 1");
  if (max_outer < 1) throw ConfigError("max_outer must be at least 1");
}

SolveResult newton_frozen_A(const ResidualFn& residual, const JacobianFn& jacobian,
                            std::vector<double> u0, const SolverOptions& opts) {
  opts.validate();
  SolveResult out;
  out.u = std::move(u0);
  auto r = residual(out.u);
  out.report.residual_history.push_back(norm_inf(r));
  for (int it = 0; it < opts.max_inner; ++it) {
    if (out.report.residual_history.back() <= opts.tol) break;
    const auto delta = solve_tridiagonal(jacobian(out.u), r);
    for (std::size_t j = 0; j < out.u.size(); ++j) out.u[j] -= delta[j];
    ++out.report.inner_iters_total;
    r = residual(out.u);
    out.report.residual_history.push_back(norm_inf(r));
  }
  out.report.outer_iters = 1;
  out.report.converged = out.report.residual_history.back() <= opts.tol;
  if (!out.report.converged) {
    throw NonConvergence("Newton did not reach tolerance in " + std::to_string(opts.max_inner) +
                             " iterations",
                         out.report.residual_history.back());
  }
  return out;
}

SolveResult double_iteration(const StepProblem& p, const SolverOptions& opts) {
  opts.validate();
  SolveResult out;
  out.u = p.u_prev;
  auto a = p.diffusion(out.u);
  out.report.residual_history.push_back(norm_inf(step_residual(p, out.u, a)));
  if (out.report.residual_history.back() <= opts.tol) {
    out.report.converged = true;
    return out;
  }
  for (int m = 1; m <= opts.max_outer; ++m) {
    const StiffnessAssembly abar = std::move(a);
    auto inner = newton_frozen_A(
        [&](std::span<const double> u) { return step_residual(p, u, abar); },
        [&](std::span<const double> u) { return step_jacobian(p, u, abar); }, out.u, opts);
    out.u = std::move(inner.u);
    out.report.outer_iters = static_cast<std::size_t>(m);
    out.report.inner_iters_total += inner.report.inner_iters_total;
    // The first inner entry repeats the previous true residual.
    out.report.residual_history.insert(out.report.residual_history.end(),
                                       inner.report.residual_history.begin() + 1,
                                       inner.report.residual_history.end());
    a = p.diffusion(out.u);
    out.report.residual_history.push_back(norm_inf(step_residual(p, out.u, a)));
    if (out.report.residual_history.back() <= opts.tol) {
      out.report.converged = true;
      return out;
    }
  }
  throw NonConvergence("A-lagged double iteration did not converge in " +
                           std::to_string(opts.max_outer) + " outer iterations",
                       out.report.residual_history.back());
}

SolveResult fixed_point_monolithic(const StepProblem& p, const SolverOptions& opts) {
  opts.validate();
  const std::size_t n = p.size();
  const auto g = p.rhs();
  const std::vector<double> no_fraction(n, 0.0);

  SolveResult out;
  out.u = p.u_prev;
  auto a = p.diffusion(out.u);
  out.report.residual_history.push_back(norm_inf(step_residual(p, out.u, a)));
  if (out.report.residual_history.back() <= opts.tol) {
    out.report.converged = true;
    return out;
  }

  const double kappa0 = smallest_eigenvalue(a.matrix);
  const double bound = (norm_2(g) + kFractionMax * std::sqrt(static_cast<double>(n))) /
                       (p.capacity.min_slope() + p.tau * kappa0);

  // Each iteration solves C(U) + tau A(U_old) U = g - Y(U_old); the capacity
  // part is monotone, so a Newton solve on it is well posed.
  SolverOptions inner_opts = opts;
  inner_opts.max_inner = std::max(opts.max_inner, 50);
  for (int m = 1; m <= opts.max_inner; ++m) {
    const auto y = closure_fraction(p.closure, p.b, out.u, p.fraction_prev, p.beta, p.tau);
    std::vector<double> target(n);
    for (std::size_t j = 0; j < n; ++j) target[j] = g[j] - y[j];
    const StiffnessAssembly abar = a;
    auto inner = newton_frozen_A(
        [&](std::span<const double> u) {
          auto r = abar.apply_affine(u);
          for (std::size_t j = 0; j < n; ++j) {
            r[j] = p.capacity.value(u[j]) + p.tau * r[j] - target[j];
          }
          return r;
        },
        [&](std::span<const double> u) {
          SymTridiagonal jac(n);
          for (std::size_t j = 0; j < n; ++j) {
            jac.diag[j] = p.capacity.derivative(u[j]) + p.tau * abar.matrix.diag[j];
          }
          for (std::size_t j = 0; j + 1 < n; ++j) jac.off[j] = p.tau * abar.matrix.off[j];
          return jac;
        },
        out.u, inner_opts);

    out.u = std::move(inner.u);
    out.report.outer_iters = static_cast<std::size_t>(m);
    out.report.inner_iters_total = static_cast<std::size_t>(m);

    a = p.diffusion(out.u);
    out.report.residual_history.push_back(norm_inf(step_residual(p, out.u, a)));
    if (!std::isfinite(out.report.residual_history.back()) || norm_2(out.u) > 2.0 * bound) {
      throw Divergence("fixed-point iterate left the a-priori bound",
                       out.report.residual_history.back());
    }
    if (out.report.residual_history.back() <= opts.tol) {
      out.report.converged = true;
      return out;
    }
  }
  throw NonConvergence("fixed-point iteration did not converge in " +
                           std::to_string(opts.max_inner) + " iterations",
                       out.report.residual_history.back());
}

SolveResult newton_lagged_operator(const StepProblem& p, const SolverOptions& opts) {
  const StiffnessAssembly abar = p.diffusion(p.u_prev);
  return newton_frozen_A([&](std::span<const double> u) { return step_residual(p, u, abar); },
                         [&](std::span<const double> u) { return step_jacobian(p, u, abar); },
                         p.u_prev, opts);
}

SolveResult solve_step(const StepProblem& p, const SolverOptions& opts) {
  switch (opts.strategy) {
    case Strategy::NewtonALag:
      return double_iteration(p, opts);
    case Strategy::FixedPointMonolithic:
      return fixed_point_monolithic(p, opts);
    case Strategy::NewtonFrozenA:
      return newton_lagged_operator(p, opts);
  }
  throw ConfigError("unknown solver strategy");
}

ContractionDiagnostic contraction_diagnostic(const StepProblem& p, int probes, double radius) {
  const std::size_t n = p.size();
  ContractionDiagnostic d;
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> u1(n), u2(n), xi(n);
  for (int i = 0; i < probes; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      u1[j] = p.u_prev[j] + radius * unit(rng);
      u2[j] = p.u_prev[j] + radius * unit(rng);
      xi[j] = unit(rng);
    }
    d.lipschitz_A = std::max(d.lipschitz_A, lipschitz_probe(p.diffusion, u1, u2, xi));
  }
  d.kappa0 = smallest_eigenvalue(p.diffusion(p.u_prev).matrix);
  d.rhs_norm = norm_2(p.rhs());
  const double denom = 1.0 + p.tau * d.kappa0;
  d.newton_bound = p.tau * d.lipschitz_A * d.rhs_norm / denom;
  d.fixed_point_bound = (p.tau * d.lipschitz_A + p.b) * (d.rhs_norm + kFractionMax) / denom;
  return d;
}

}  // namespace cryostef
