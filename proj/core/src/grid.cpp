#include "cryostef/grid.hpp"

#include <cmath>
#include <string>

#include "cryostef/errors.hpp"

namespace cryostef {

Grid1D::Grid1D(std::size_t cells, double length) : cells_(cells), length_(length) {
  if (cells < 2) throw ConfigError("grid needs at least 2 cells, got " + std::to_string(cells));
  if (!(length > 0.0) || !std::isfinite(length)) throw ConfigError("grid length must be positive");
  h_ = length / static_cast<double>(cells);
  centers_.resize(cells);
  for (std::size_t j = 0; j < cells; ++j) centers_[j] = (static_cast<double>(j) + 0.5) * h_;
}

std::vector<double> StiffnessAssembly::apply_affine(std::span<const double> u) const {
  auto y = matrix.apply(u);
  for (std::size_t j = 0; j < y.size(); ++j) y[j] -= bc_rhs[j];
  return y;
}

double StiffnessAssembly::boundary_outflow(std::span<const double> u) const {
  if (u.empty()) return 0.0;
  return left_transmissibility * (u.front() - left_value) +
         right_transmissibility * (u.back() - right_value);
}

StiffnessAssembly assemble_with_conductivity(std::span<const double> k, const Grid1D& g,
                                             double ud_left, double ud_right,
                                             FaceAveraging averaging) {
  const std::size_t m = g.cells();
  if (k.size() != m) throw ConfigError("conductivity vector does not match the grid");
  const double inv_h2 = 1.0 / (g.h() * g.h());

  StiffnessAssembly out;
  out.matrix = SymTridiagonal(m);
  out.bc_rhs.assign(m, 0.0);
  for (std::size_t j = 0; j + 1 < m; ++j) {
    const double face_k = averaging == FaceAveraging::Harmonic
                              ? 2.0 * k[j] * k[j + 1] / (k[j] + k[j + 1])
                              : 0.5 * (k[j] + k[j + 1]);
    const double t = face_k * inv_h2;
    out.matrix.diag[j] += t;
    out.matrix.diag[j + 1] += t;
    out.matrix.off[j] = -t;
  }
  out.left_transmissibility = 2.0 * k[0] * inv_h2;
  out.right_transmissibility = 2.0 * k[m - 1] * inv_h2;
  out.left_value = ud_left;
  out.right_value = ud_right;
  out.matrix.diag[0] += out.left_transmissibility;
  out.matrix.diag[m - 1] += out.right_transmissibility;
  out.bc_rhs[0] += out.left_transmissibility * ud_left;
  out.bc_rhs[m - 1] += out.right_transmissibility * ud_right;
  return out;
}

StiffnessAssembly assemble(std::span<const double> u, const ScaledMaterial& m, const Grid1D& g,
                           double ud_left, double ud_right, FaceAveraging averaging) {
  if (u.size() != g.cells()) throw ConfigError("state vector does not match the grid");
  std::vector<double> k(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) k[j] = conductivity(u[j], m);
  return assemble_with_conductivity(k, g, ud_left, ud_right, averaging);
}

StiffnessAssembly constant_scalar_operator(double a) {
  if (!(a > 0.0)) throw ConfigError("scalar operator must be positive");
  StiffnessAssembly out;
  out.matrix = SymTridiagonal(1);
  out.matrix.diag[0] = a;
  out.bc_rhs.assign(1, 0.0);
  return out;
}

double lipschitz_probe(const DiffusionOperator& op, std::span<const double> u1,
                       std::span<const double> u2, std::span<const double> xi) {
  if (u1.size() != u2.size() || u1.size() != xi.size()) {
    throw ConfigError("lipschitz_probe: size mismatch");
  }
  std::vector<double> du(u1.size());
  for (std::size_t j = 0; j < du.size(); ++j) du[j] = u1[j] - u2[j];
  const double ndu = norm_2(du);
  const double nxi = norm_2(xi);
  if (ndu == 0.0) throw DegenerateProbe("lipschitz_probe: coincident states");
  if (nxi == 0.0) throw DegenerateProbe("lipschitz_probe: zero direction");
  const auto a1 = op(u1).matrix.apply(xi);
  const auto a2 = op(u2).matrix.apply(xi);
  std::vector<double> diff(a1.size());
  for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = a1[j] - a2[j];
  return norm_2(diff) / (ndu * nxi);
}

}  // namespace cryostef
