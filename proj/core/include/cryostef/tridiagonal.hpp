#pragma once

#include <span>
#include <vector>

namespace cryostef {

/// Symmetric tridiagonal matrix; a single off-diagonal array makes symmetry exact.
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // off[i] couples rows i and i+1

  SymTridiagonal() = default;
  explicit SymTridiagonal(std::size_t n) : diag(n, 0.0), off(n > 0 ? n - 1 : 0, 0.0) {}

  std::size_t size() const noexcept { return diag.size(); }

  std::vector<double> apply(std::span<const double> x) const;
  double quadratic_form(std::span<const double> x) const;
};

/// Thomas algorithm. Throws SingularJacobian on a vanishing or non-finite pivot.
std::vector<double> solve_tridiagonal(const SymTridiagonal& a, std::span<const double> rhs);

/// True when the LDL^T / Cholesky factorization finds only positive pivots.
bool cholesky_succeeds(const SymTridiagonal& a);

/// Smallest eigenvalue of an SPD matrix by deterministic inverse iteration.
double smallest_eigenvalue(const SymTridiagonal& a, int iterations = 60);

double norm_inf(std::span<const double> x);
double norm_2(std::span<const double> x);

}  // namespace cryostef
