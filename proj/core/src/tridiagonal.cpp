#include "cryostef/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cryostef/errors.hpp"

namespace cryostef {

std::vector<double> SymTridiagonal::apply(std::span<const double> x) const {
  const std::size_t n = size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag[i] * x[i];
    if (i > 0) s += off[i - 1] * x[i - 1];
    if (i + 1 < n) s += off[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

double SymTridiagonal::quadratic_form(std::span<const double> x) const {
  const auto y = apply(x);
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += x[i] * y[i];
  return s;
}

std::vector<double> solve_tridiagonal(const SymTridiagonal& a, std::span<const double> rhs) {
  const std::size_t n = a.size();
  if (rhs.size() != n) throw ConfigError("tridiagonal solve: size mismatch");
  std::vector<double> c(n, 0.0);
  std::vector<double> d(n, 0.0);
  const double scale = std::max(norm_inf(a.diag), std::numeric_limits<double>::min());
  const double breakdown = 1e-300 + 1e-15 * scale;
  double pivot = a.diag[0];
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) pivot = a.diag[i] - a.off[i - 1] * c[i - 1];
    if (!std::isfinite(pivot) || std::abs(pivot) < breakdown) {
      throw SingularJacobian("tridiagonal factorization broke down at row " +
                             std::to_string(i));
    }
    c[i] = (i + 1 < n) ? a.off[i] / pivot : 0.0;
    d[i] = (rhs[i] - (i > 0 ? a.off[i - 1] * d[i - 1] : 0.0)) / pivot;
  }
  std::vector<double> x(n);
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

bool cholesky_succeeds(const SymTridiagonal& a) {
  double pivot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    pivot = (i == 0) ? a.diag[0] : a.diag[i] - a.off[i - 1] * a.off[i - 1] / pivot;
    if (!(pivot > 0.0) || !std::isfinite(pivot)) return false;
  }
  return true;
}

double smallest_eigenvalue(const SymTridiagonal& a, int iterations) {
  const std::size_t n = a.size();
  // Non-symmetric start so the lowest mode is never orthogonal to it.
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.1 * static_cast<double>(i % 7);
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const double nx = norm_2(x);
    for (double& v : x) v /= nx;
    auto y = solve_tridiagonal(a, x);
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot += x[i] * y[i];
    lambda = 1.0 / dot;
    x = std::move(y);
  }
  const double nx = norm_2(x);
  for (double& v : x) v /= nx;
  return std::min(lambda, a.quadratic_form(x));
}

double norm_inf(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

double norm_2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace cryostef
