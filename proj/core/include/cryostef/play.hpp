#pragma once

// Interval constraint graphs C(lo, hi; .), their resolvents, and the implicit
// generalized-play update. The resolvent of an interval graph is the clamp to
// [lo, hi] and does not depend on the time step.

#include <functional>
#include <vector>

#include "cryostef/constitutive.hpp"

namespace cryostef {

/// Sentinel for an unbounded side of a constraint interval.
inline constexpr double kUnbounded = 1e300;

/// Tolerance for accepting a state that sits marginally outside its interval.
inline constexpr double kFeasibilityTol = 1e-12;

struct ConstraintInterval {
  double lo = -kUnbounded;
  double hi = kUnbounded;

  /// Throws InvalidBounds when lo > hi.
  static ConstraintInterval make(double lo, double hi);
  static ConstraintInterval unbounded() { return {}; }
  bool contains(double v, double tol = 0.0) const { return v >= lo - tol && v <= hi + tol; }
};

struct PlayState {
  double v = 0.0;
  /// Minimal-norm selection c^n from the last step (units 1/time).
  double selection = 0.0;
};

/// How initial data outside its admissible interval is treated.
enum class InitPolicy { Strict, Clamp };

double resolvent(const ConstraintInterval& iv, double s);

/// Derivative selection of the resolvent: 1 strictly inside, 0 at and beyond
/// either bound.
double resolvent_derivative(const ConstraintInterval& iv, double s);

/// One implicit step of v' + C(lo, hi; v) ∋ f. Throws InfeasibleState when
/// state.v lies outside iv by more than kFeasibilityTol.
PlayState constrained_ode_step(const PlayState& state, const ConstraintInterval& iv,
                               double tau, double forcing);

/// Generalized-play update with bounds [alpha, beta]; rate independent.
double play_step(double v_prev, double alpha, double beta);

struct PlayPoint {
  double t;
  double u;
  double v;
  double beta;  // width of the band used to produce v
};

struct PlayTrajectory {
  std::vector<PlayPoint> points;  // one per step, t_1 .. t_N
  bool initial_clamped = false;
};

/// Drives chi with a prescribed input u(t) through the band F <= chi <= G,
/// lagging the band width one step behind the input.
PlayTrajectory drive_play(const std::function<double(double)>& u_of_t,
                          const HysteresisEnvelope& env, double tau, double t_end,
                          double v_init, InitPolicy policy = InitPolicy::Strict);

}  // namespace cryostef
