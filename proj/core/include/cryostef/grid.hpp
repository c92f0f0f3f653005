#pragma once

// Cell-centered finite differences on a 1D interval with Dirichlet data at
// both ends. The diffusion operator A(U) is symmetric tridiagonal; Dirichlet
// values enter through half-cell transmissibilities 2k/h^2 and are moved to
// the right-hand side (bc_rhs).

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "cryostef/constitutive.hpp"
#include "cryostef/tridiagonal.hpp"

namespace cryostef {

class Grid1D {
 public:
  /// Throws ConfigError unless cells >= 2 and length > 0.
  explicit Grid1D(std::size_t cells, double length = 1.0);

  std::size_t cells() const noexcept { return cells_; }
  double length() const noexcept { return length_; }
  double h() const noexcept { return h_; }
  /// x_j = (j + 1/2) h for j = 0 .. cells-1.
  const std::vector<double>& centers() const noexcept { return centers_; }

 private:
  std::size_t cells_;
  double length_;
  double h_;
  std::vector<double> centers_;
};

enum class FaceAveraging { Harmonic, Arithmetic };

struct StiffnessAssembly {
  SymTridiagonal matrix;
  std::vector<double> bc_rhs;
  double left_transmissibility = 0.0;
  double right_transmissibility = 0.0;
  double left_value = 0.0;
  double right_value = 0.0;

  std::size_t size() const noexcept { return matrix.size(); }
  /// A U - bc_rhs.
  std::vector<double> apply_affine(std::span<const double> u) const;
  /// Net diffusive outflow through both ends per unit cross-section and unit
  /// cell volume: T_L (U_1 - uD_L) + T_R (U_M - uD_R).
  double boundary_outflow(std::span<const double> u) const;
};

/// A(U) as a function of the cell temperatures (boundary data already bound).
using DiffusionOperator = std::function<StiffnessAssembly(std::span<const double>)>;

StiffnessAssembly assemble(std::span<const double> u, const ScaledMaterial& m, const Grid1D& g,
                           double ud_left, double ud_right,
                           FaceAveraging averaging = FaceAveraging::Harmonic);

/// Assembly from per-cell conductivities.
StiffnessAssembly assemble_with_conductivity(std::span<const double> k, const Grid1D& g,
                                             double ud_left, double ud_right,
                                             FaceAveraging averaging = FaceAveraging::Harmonic);

/// Scalar operator A(U) = [a] with no boundary coupling (ODE reductions).
StiffnessAssembly constant_scalar_operator(double a);

/// ||(A(U1) - A(U2)) xi|| / (||U1 - U2|| ||xi||). Throws DegenerateProbe when
/// U1 == U2 or xi == 0.
double lipschitz_probe(const DiffusionOperator& op, std::span<const double> u1,
                       std::span<const double> u2, std::span<const double> xi);

}  // namespace cryostef
