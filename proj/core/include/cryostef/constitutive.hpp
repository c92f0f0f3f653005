#pragma once

// Closed-form constitutive laws in scaled variables: the equilibrium liquid
// fraction F, the sensible energy c, the conductivity k, and the calibrated
// upper envelope G used by the hysteresis closure.
//
// All functions are pure. Derivatives are one-sided selections: at the kink
// u = 0 the frozen-side (left) limit is returned.

namespace cryostef {

/// Exponents below this value evaluate to exactly 0 (no denormals).
inline constexpr double kExponentFloor = -700.0;

/// Upper bound of F and G (F_inf = F(0) = 1).
inline constexpr double kFractionMax = 1.0;

/// Scaled heat capacity / conductivity data and the equilibrium steepness b.
class ScaledMaterial {
 public:
  /// Throws ConfigError unless every coefficient is strictly positive.
  ScaledMaterial(double b, double c_u, double c_f, double k_u, double k_f);

  double b() const noexcept { return b_; }
  double c_u() const noexcept { return c_u_; }
  double c_f() const noexcept { return c_f_; }
  double k_u() const noexcept { return k_u_; }
  double k_f() const noexcept { return k_f_; }

  /// Lower bound of c'(u): min(c_u, c_f).
  double min_capacity_slope() const noexcept;

 private:
  double b_;
  double c_u_;
  double c_f_;
  double k_u_;
  double k_f_;
};

/// Physical data of the water/ice/rock mixture, before scaling.
/// Heat capacities are volumetric (energy per volume per degree).
struct PhysicalMaterial {
  double porosity;
  double latent_heat;  // volumetric latent heat of water
  double c_liquid, c_ice, c_rock;
  double k_liquid, k_ice, k_rock;
};

/// Scales physical data by 1/(porosity * latent_heat); conductivities are
/// additionally multiplied by time_scale (seconds per unit of scaled time).
ScaledMaterial scale_material(const PhysicalMaterial& p, double b, double time_scale);

/// F(u): 1 for u >= 0, exp(b u) below. Throws ConfigError for b <= 0.
double equilibrium_fraction(double u, double b);
/// F'(u) with the left limit b at u = 0.
double fraction_derivative(double u, double b);

/// c(u) = (c_u - c_f) * int_0^u F + c_f u.
double capacity_energy(double u, const ScaledMaterial& m);
double capacity_derivative(double u, const ScaledMaterial& m);

/// k(u) = k_f + (k_u - k_f) F(u).
double conductivity(double u, const ScaledMaterial& m);
double conductivity_derivative(double u, const ScaledMaterial& m);

enum class EnvelopeVariant {
  ThreeCondition,  // G = a e^{b_bar t} + D t + C matching F(t0), F'(t0), F(0)
  TwoCondition,    // G = a e^{b_bar t} + C matching F(t0), F'(t0)
};

/// Upper curve G of the hysteresis band F <= chi <= G.
struct HysteresisEnvelope {
  double b = 1.0;
  double b_bar = 1.0;
  double theta0 = -1.0;
  double a = 0.0;
  double C = 0.0;
  double D = 0.0;
  EnvelopeVariant variant = EnvelopeVariant::ThreeCondition;

  double lower(double theta) const { return equilibrium_fraction(theta, b); }
  double upper(double theta) const;
  /// beta = G - F, never negative.
  double width(double theta) const;
};

/// Throws ConfigError on invalid inputs and DegenerateCalibration when the
/// ThreeCondition denominator is below 1e-14 in magnitude.
HysteresisEnvelope calibrate_envelope(double b, double b_bar, double theta0,
                                      EnvelopeVariant variant);

double upper_envelope(double theta, const HysteresisEnvelope& env);

}  // namespace cryostef
