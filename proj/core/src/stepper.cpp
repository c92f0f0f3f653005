#include "cryostef/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "cryostef/errors.hpp"

namespace cryostef {

InitResult initial_state(const ClosureKind& kind, double b, std::vector<double> u0,
                         std::vector<double> fraction0, InitPolicy policy, double t0) {
  const std::size_t n = u0.size();
  if (fraction0.size() != n) throw ConfigError("initial fraction does not match the state size");
  InitResult out;
  out.state.t = t0;
  out.state.beta.assign(n, 0.0);

  auto admit = [&](std::size_t j, double lo, double hi, const char* what) {
    double& y = fraction0[j];
    if (y >= lo - kFeasibilityTol && y <= hi + kFeasibilityTol) {
      y = std::clamp(y, lo, hi);
      return;
    }
    if (policy == InitPolicy::Strict) {
      throw InfeasibleState(std::string("initial fraction outside ") + what + " at cell " +
                            std::to_string(j) + ": " + std::to_string(y));
    }
    y = std::clamp(y, lo, hi);
    ++out.adjusted_cells;
  };

  for (std::size_t j = 0; j < n; ++j) {
    if (std::holds_alternative<Equilibrium>(kind)) {
      fraction0[j] = equilibrium_fraction(u0[j], b);
    } else if (std::holds_alternative<Kinetic>(kind)) {
      admit(j, 0.0, 1.0, "[0, 1]");
    } else {
      const auto& env = std::get<Hysteretic>(kind).envelope;
      out.state.beta[j] = env.width(u0[j]);
      const double f = equilibrium_fraction(u0[j], b);
      admit(j, f, f + out.state.beta[j], "[F(u), G(u)]");
    }
  }
  out.state.u = std::move(u0);
  out.state.fraction = std::move(fraction0);
  return out;
}

OperatorFactory pde_operator(const Grid1D& grid, const ScaledMaterial& material,
                             std::function<double(double)> bc_left,
                             std::function<double(double)> bc_right, FaceAveraging averaging) {
  return [=](std::span<const double> u, double t) {
    return assemble(u, material, grid, bc_left(t), bc_right(t), averaging);
  };
}

OperatorFactory scalar_operator(double a) {
  const auto op = constant_scalar_operator(a);
  return [op](std::span<const double>, double) { return op; };
}

Stepper::Stepper(ClosureKind closure, Capacity capacity, double b, OperatorFactory diffusion,
                 SourceFactory source, SolverOptions options, double cell_volume)
    : closure_(std::move(closure)),
      capacity_(std::move(capacity)),
      b_(b),
      diffusion_(std::move(diffusion)),
      source_(std::move(source)),
      options_(options),
      cell_volume_(cell_volume) {
  if (!(b > 0.0)) throw ConfigError("b must be positive");
  options_.validate();
  if (const auto* h = std::get_if<Hysteretic>(&closure_); h && h->envelope.b != b) {
    throw ConfigError("hysteresis envelope steepness differs from the equilibrium curve");
  }
  if (const auto* k = std::get_if<Kinetic>(&closure_)) make_kinetic(k->rate);
}

StepProblem Stepper::make_problem(const TimeState& prev, double t_new) const {
  const double tau = t_new - prev.t;
  if (!(tau > 0.0)) throw ConfigError("time step must be positive");
  StepProblem p;
  p.closure = closure_;
  p.capacity = capacity_;
  p.b = b_;
  p.tau = tau;
  p.u_prev = prev.u;
  p.fraction_prev = prev.fraction;
  p.source = source_(t_new);
  if (p.source.size() != prev.u.size()) throw ConfigError("source does not match the state size");
  if (const auto* h = std::get_if<Hysteretic>(&closure_)) {
    p.beta.resize(prev.u.size());
    for (std::size_t j = 0; j < prev.u.size(); ++j) p.beta[j] = h->envelope.width(prev.u[j]);
  }
  p.diffusion = [op = diffusion_, t_new](std::span<const double> u) { return op(u, t_new); };
  return p;
}

StepOutcome Stepper::advance_to(const TimeState& prev, double t_new,
                                std::size_t step_index) const {
  const StepProblem p = make_problem(prev, t_new);
  SolveResult solved;
  try {
    solved = solve_step(p, options_);
  } catch (const Divergence& e) {
    throw Divergence("step " + std::to_string(step_index) + ": " + e.what(), e.last_residual(),
                     step_index);
  } catch (const NonConvergence& e) {
    throw NonConvergence("step " + std::to_string(step_index) + ": " + e.what(),
                         e.last_residual(), step_index);
  }

  StepOutcome out;
  out.report = std::move(solved.report);
  out.state.t = t_new;
  out.state.u = std::move(solved.u);
  out.state.fraction =
      closure_fraction(p.closure, p.b, out.state.u, p.fraction_prev, p.beta, p.tau);
  out.state.beta = p.beta.empty() ? std::vector<double>(out.state.u.size(), 0.0) : p.beta;

  const auto a = p.diffusion(out.state.u);
  EnergyBalance& bal = out.balance;
  for (std::size_t j = 0; j < out.state.u.size(); ++j) {
    const double e_new = capacity_.value(out.state.u[j]) + out.state.fraction[j];
    const double e_old = capacity_.value(prev.u[j]) + prev.fraction[j];
    bal.energy_change += cell_volume_ * (e_new - e_old);
    bal.source_work += cell_volume_ * p.tau * p.source[j];
    bal.energy_content +=
        cell_volume_ * (std::abs(capacity_.value(out.state.u[j])) + std::abs(out.state.fraction[j]));
  }
  bal.boundary_outflow = cell_volume_ * p.tau * a.boundary_outflow(out.state.u);
  return out;
}

}  // namespace cryostef
