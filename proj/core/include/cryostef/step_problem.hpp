#pragma once

// The nonlinear system of one implicit time step,
//
//   r(U) = C(U) + Y(U) + tau (A U - bc_rhs) - g,   g = tau f + C(U_prev) + Y_prev,
//
// where Y(U) is the liquid fraction given by the closure (equilibrium,
// kinetic relaxation or generalized play) at the candidate temperature U.

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "cryostef/constitutive.hpp"
#include "cryostef/grid.hpp"
#include "cryostef/tridiagonal.hpp"

namespace cryostef {

struct Equilibrium {};

struct Kinetic {
  double rate;  // B, 1/time

  /// Relaxation weight 1 / (1 + tau B) kept on the previous fraction.
  double memory_weight(double tau) const { return 1.0 / (1.0 + tau * rate); }
};

struct Hysteretic {
  HysteresisEnvelope envelope;
};

using ClosureKind = std::variant<Equilibrium, Kinetic, Hysteretic>;

/// Throws ConfigError unless rate > 0.
Kinetic make_kinetic(double rate);

const char* closure_name(const ClosureKind& kind);

/// Sensible energy law: either c(u) from a material or the identity c(u) = u.
class Capacity {
 public:
  static Capacity identity() { return Capacity(); }
  static Capacity from_material(const ScaledMaterial& m) { return Capacity(m); }

  double value(double u) const { return material_ ? capacity_energy(u, *material_) : u; }
  double derivative(double u) const {
    return material_ ? capacity_derivative(u, *material_) : 1.0;
  }
  double min_slope() const { return material_ ? material_->min_capacity_slope() : 1.0; }

 private:
  Capacity() = default;
  explicit Capacity(const ScaledMaterial& m) : material_(m) {}
  std::optional<ScaledMaterial> material_;
};

struct StepProblem {
  ClosureKind closure;
  Capacity capacity = Capacity::identity();
  double b = 1.0;  // steepness of the equilibrium curve F
  double tau = 1.0;
  std::vector<double> u_prev;
  std::vector<double> fraction_prev;
  std::vector<double> beta;  // lagged play width, used by Hysteretic only
  std::vector<double> source;
  DiffusionOperator diffusion;

  std::size_t size() const noexcept { return u_prev.size(); }
  /// g = tau f + C(U_prev) + Y_prev.
  std::vector<double> rhs() const;
};

/// Liquid fraction produced by the closure at temperature u. Throws
/// InvalidBounds if a play width is negative.
std::vector<double> closure_fraction(const ClosureKind& kind, double b, std::span<const double> u,
                                     std::span<const double> fraction_prev,
                                     std::span<const double> beta, double tau);

/// Diagonal derivative selection dY_j/dU_j matching closure_fraction.
std::vector<double> closure_fraction_derivative(const ClosureKind& kind, double b,
                                                std::span<const double> u,
                                                std::span<const double> fraction_prev,
                                                std::span<const double> beta, double tau);

std::vector<double> step_residual(const StepProblem& p, std::span<const double> u,
                                  const StiffnessAssembly& abar);

/// diag(c'(U) + dY/dU) + tau * Abar.
SymTridiagonal step_jacobian(const StepProblem& p, std::span<const double> u,
                             const StiffnessAssembly& abar);

}  // namespace cryostef
