#include "cryostef/step_problem.hpp"

#include <string>

#include "cryostef/errors.hpp"
#include "cryostef/play.hpp"

namespace cryostef {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_sizes(std::size_t n, std::span<const double> prev, std::span<const double> beta,
                 const ClosureKind& kind) {
  if (prev.size() != n) throw ConfigError("previous fraction does not match the state size");
  if (std::holds_alternative<Hysteretic>(kind) && beta.size() != n) {
    throw ConfigError("play width vector does not match the state size");
  }
}

}  // namespace

Kinetic make_kinetic(double rate) {
  if (!(rate > 0.0)) throw ConfigError("relaxation rate B must be positive");
  return Kinetic{rate};
}

const char* closure_name(const ClosureKind& kind) {
  return std::visit(Overloaded{[](const Equilibrium&) { return "EQ"; },
                               [](const Kinetic&) { return "NEQ"; },
                               [](const Hysteretic&) { return "HYST"; }},
                    kind);
}

std::vector<double> StepProblem::rhs() const {
  std::vector<double> g(size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    g[j] = tau * source[j] + capacity.value(u_prev[j]) + fraction_prev[j];
  }
  return g;
}

std::vector<double> closure_fraction(const ClosureKind& kind, double b, std::span<const double> u,
                                     std::span<const double> fraction_prev,
                                     std::span<const double> beta, double tau) {
  const std::size_t n = u.size();
  check_sizes(n, fraction_prev, beta, kind);
  std::vector<double> y(n);
  std::visit(
      Overloaded{
          [&](const Equilibrium&) {
            for (std::size_t j = 0; j < n; ++j) y[j] = equilibrium_fraction(u[j], b);
          },
          [&](const Kinetic& k) {
            const double w = k.memory_weight(tau);
            for (std::size_t j = 0; j < n; ++j) {
              y[j] = (1.0 - w) * equilibrium_fraction(u[j], b) + w * fraction_prev[j];
            }
          },
          [&](const Hysteretic&) {
            for (std::size_t j = 0; j < n; ++j) {
              if (beta[j] < 0.0) {
                throw InvalidBounds("negative play width at cell " + std::to_string(j));
              }
              const double f = equilibrium_fraction(u[j], b);
              y[j] = f + resolvent({0.0, beta[j]}, fraction_prev[j] - f);
            }
          }},
      kind);
  return y;
}

std::vector<double> closure_fraction_derivative(const ClosureKind& kind, double b,
                                                std::span<const double> u,
                                                std::span<const double> fraction_prev,
                                                std::span<const double> beta, double tau) {
  const std::size_t n = u.size();
  check_sizes(n, fraction_prev, beta, kind);
  std::vector<double> d(n);
  std::visit(Overloaded{[&](const Equilibrium&) {
                          for (std::size_t j = 0; j < n; ++j) d[j] = fraction_derivative(u[j], b);
                        },
                        [&](const Kinetic& k) {
                          const double w = k.memory_weight(tau);
                          for (std::size_t j = 0; j < n; ++j) {
                            d[j] = (1.0 - w) * fraction_derivative(u[j], b);
                          }
                        },
                        [&](const Hysteretic&) {
                          for (std::size_t j = 0; j < n; ++j) {
                            const double f = equilibrium_fraction(u[j], b);
                            const double slope =
                                resolvent_derivative({0.0, beta[j]}, fraction_prev[j] - f);
                            d[j] = fraction_derivative(u[j], b) * (1.0 - slope);
                          }
                        }},
             kind);
  return d;
}

std::vector<double> step_residual(const StepProblem& p, std::span<const double> u,
                                  const StiffnessAssembly& abar) {
  const auto y = closure_fraction(p.closure, p.b, u, p.fraction_prev, p.beta, p.tau);
  const auto flux = abar.apply_affine(u);
  const auto g = p.rhs();
  std::vector<double> r(u.size());
  for (std::size_t j = 0; j < r.size(); ++j) {
    r[j] = p.capacity.value(u[j]) + y[j] + p.tau * flux[j] - g[j];
  }
  return r;
}

SymTridiagonal step_jacobian(const StepProblem& p, std::span<const double> u,
                             const StiffnessAssembly& abar) {
  const auto dy =
      closure_fraction_derivative(p.closure, p.b, u, p.fraction_prev, p.beta, p.tau);
  SymTridiagonal j(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    j.diag[i] = p.capacity.derivative(u[i]) + dy[i] + p.tau * abar.matrix.diag[i];
  }
  for (std::size_t i = 0; i + 1 < u.size(); ++i) j.off[i] = p.tau * abar.matrix.off[i];
  return j;
}

}  // namespace cryostef
