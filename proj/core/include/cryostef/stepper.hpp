#pragma once

// Fully implicit time loop. Each step builds a StepProblem at the new time
// level (source and boundary data sampled at t_n), lags the play width to the
// previous temperature, solves, and recomputes the fraction at the converged
// temperature.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "cryostef/constitutive.hpp"
#include "cryostef/grid.hpp"
#include "cryostef/play.hpp"
#include "cryostef/solve.hpp"
#include "cryostef/step_problem.hpp"

namespace cryostef {

struct TimeState {
  double t = 0.0;
  std::vector<double> u;
  std::vector<double> fraction;
  /// Play width used to produce `fraction` (hysteresis only; G - F at the
  /// previous temperature, or at the state itself for the initial state).
  std::vector<double> beta;
};

struct InitResult {
  TimeState state;
  /// Cells whose initial fraction was overwritten or clamped.
  std::size_t adjusted_cells = 0;
};

/// Validates the initial fraction against the closure:
///  EQ overwrites it with F(U0); NEQ requires [0, 1]; HYST requires
///  [F(U0), G(U0)]. Out-of-range data throws InfeasibleState under
///  InitPolicy::Strict and is clamped under InitPolicy::Clamp.
InitResult initial_state(const ClosureKind& kind, double b, std::vector<double> u0,
                         std::vector<double> fraction0, InitPolicy policy, double t0 = 0.0);

/// Diffusion operator at time t.
using OperatorFactory = std::function<StiffnessAssembly(std::span<const double> u, double t)>;
/// Source values per cell at time t.
using SourceFactory = std::function<std::vector<double>(double t)>;

OperatorFactory pde_operator(const Grid1D& grid, const ScaledMaterial& material,
                             std::function<double(double)> bc_left,
                             std::function<double(double)> bc_right,
                             FaceAveraging averaging = FaceAveraging::Harmonic);

OperatorFactory scalar_operator(double a);

/// Discrete energy bookkeeping of one step, weighted by the cell volume:
/// energy_change = source_work - boundary_outflow up to the solver residual.
struct EnergyBalance {
  double energy_change = 0.0;
  double source_work = 0.0;
  double boundary_outflow = 0.0;
  double energy_content = 0.0;  // sum h (|C(U^n)| + |Y^n|)

  double imbalance() const { return energy_change - (source_work - boundary_outflow); }
};

struct StepOutcome {
  TimeState state;
  StepReport report;
  EnergyBalance balance;
};

class Stepper {
 public:
  /// Throws ConfigError if a hysteresis envelope uses a different b.
  Stepper(ClosureKind closure, Capacity capacity, double b, OperatorFactory diffusion,
          SourceFactory source, SolverOptions options, double cell_volume = 1.0);

  StepProblem make_problem(const TimeState& prev, double t_new) const;

  /// Throws NonConvergence (carrying step_index) when the solver fails.
  StepOutcome advance_to(const TimeState& prev, double t_new, std::size_t step_index = 0) const;
  StepOutcome advance(const TimeState& prev, double tau, std::size_t step_index = 0) const {
    return advance_to(prev, prev.t + tau, step_index);
  }

  const ClosureKind& closure() const noexcept { return closure_; }
  double b() const noexcept { return b_; }
  const SolverOptions& options() const noexcept { return options_; }

 private:
  ClosureKind closure_;
  Capacity capacity_;
  double b_;
  OperatorFactory diffusion_;
  SourceFactory source_;
  SolverOptions options_;
  double cell_volume_;
};

}  // namespace cryostef
