#include "cryostef/constitutive.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cryostef/errors.hpp"

namespace cryostef {
namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError(std::string(name) + " must be positive and finite, got " +
                      std::to_string(value));
  }
}

// e^{x} with the exponent floor applied.
double floored_exp(double x) { return x < kExponentFloor ? 0.0 : std::exp(x); }

}  // namespace

ScaledMaterial::ScaledMaterial(double b, double c_u, double c_f, double k_u, double k_f)
    : b_(b), c_u_(c_u), c_f_(c_f), k_u_(k_u), k_f_(k_f) {
  require_positive(b, "b");
  require_positive(c_u, "c_u");
  require_positive(c_f, "c_f");
  require_positive(k_u, "k_u");
  require_positive(k_f, "k_f");
}

double ScaledMaterial::min_capacity_slope() const noexcept { return std::min(c_u_, c_f_); }

ScaledMaterial scale_material(const PhysicalMaterial& p, double b, double time_scale) {
  require_positive(p.porosity, "porosity");
  require_positive(p.latent_heat, "latent_heat");
  require_positive(time_scale, "time_scale");
  const double eta = p.porosity;
  const double denom = eta * p.latent_heat;
  const double c_u = eta * p.c_liquid + (1.0 - eta) * p.c_rock;
  const double c_f = eta * p.c_ice + (1.0 - eta) * p.c_rock;
  const double k_u = eta * p.k_liquid + (1.0 - eta) * p.k_rock;
  const double k_f = eta * p.k_ice + (1.0 - eta) * p.k_rock;
  return ScaledMaterial(b, c_u / denom, c_f / denom, time_scale * k_u / denom,
                        time_scale * k_f / denom);
}

double equilibrium_fraction(double u, double b) {
  require_positive(b, "b");
  return u >= 0.0 ? 1.0 : floored_exp(b * u);
}

double fraction_derivative(double u, double b) {
  require_positive(b, "b");
  return u > 0.0 ? 0.0 : b * floored_exp(b * u);
}

double capacity_energy(double u, const ScaledMaterial& m) {
  if (u > 0.0) return m.c_u() * u;
  return (m.c_u() - m.c_f()) * (floored_exp(m.b() * u) - 1.0) / m.b() + m.c_f() * u;
}

double capacity_derivative(double u, const ScaledMaterial& m) {
  if (u > 0.0) return m.c_u();
  return (m.c_u() - m.c_f()) * floored_exp(m.b() * u) + m.c_f();
}

double conductivity(double u, const ScaledMaterial& m) {
  return m.k_f() + (m.k_u() - m.k_f()) * equilibrium_fraction(u, m.b());
}

double conductivity_derivative(double u, const ScaledMaterial& m) {
  return (m.k_u() - m.k_f()) * fraction_derivative(u, m.b());
}

HysteresisEnvelope calibrate_envelope(double b, double b_bar, double theta0,
                                      EnvelopeVariant variant) {
  require_positive(b, "b");
  require_positive(b_bar, "b_bar");
  if (!(theta0 < 0.0)) {
    throw ConfigError("theta0 must be negative, got " + std::to_string(theta0));
  }
  constexpr double kTiny = 1e-14;
  const double e = std::exp(b * theta0);
  const double e_bar = std::exp(b_bar * theta0);

  HysteresisEnvelope env;
  env.b = b;
  env.b_bar = b_bar;
  env.theta0 = theta0;
  env.variant = variant;
  if (variant == EnvelopeVariant::ThreeCondition) {
    const double denom = e_bar - b_bar * theta0 * e_bar - 1.0;
    if (std::abs(denom) < kTiny) {
      throw DegenerateCalibration("three-condition envelope denominator vanishes");
    }
    env.a = (e - b * theta0 * e - 1.0) / denom;
    env.C = 1.0 - env.a;
    env.D = b * e - env.a * b_bar * e_bar;
  } else {
    const double denom = b_bar * e_bar;
    if (std::abs(denom) < kTiny) {
      throw DegenerateCalibration("two-condition envelope denominator vanishes");
    }
    env.a = b * e / denom;
    env.C = e - (b / b_bar) * e;
    env.D = 0.0;
  }
  return env;
}

double HysteresisEnvelope::upper(double theta) const {
  const double f = lower(theta);
  if (theta < theta0 || theta > 0.0) return f;
  double g = a * std::exp(b_bar * theta) + D * theta + C;
  // The two-condition curve overshoots 1 before theta = 0; cap it at F_inf.
  if (variant == EnvelopeVariant::TwoCondition) g = std::min(g, kFractionMax);
  return std::max(g, f);
}

double HysteresisEnvelope::width(double theta) const {
  return std::max(upper(theta) - lower(theta), 0.0);
}

double upper_envelope(double theta, const HysteresisEnvelope& env) { return env.upper(theta); }

}  // namespace cryostef
