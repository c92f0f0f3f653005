#include "cryostef/play.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cryostef/errors.hpp"

namespace cryostef {

ConstraintInterval ConstraintInterval::make(double lo, double hi) {
  if (!(lo <= hi)) {
    throw InvalidBounds("constraint interval has lo > hi: [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "]");
  }
  return {lo, hi};
}

double resolvent(const ConstraintInterval& iv, double s) {
  if (s <= iv.lo) return iv.lo;
  if (s >= iv.hi) return iv.hi;
  return s;
}

double resolvent_derivative(const ConstraintInterval& iv, double s) {
  return (s > iv.lo && s < iv.hi) ? 1.0 : 0.0;
}

PlayState constrained_ode_step(const PlayState& state, const ConstraintInterval& iv,
                               double tau, double forcing) {
  if (!(tau > 0.0)) throw ConfigError("time step must be positive");
  if (!iv.contains(state.v, kFeasibilityTol)) {
    throw InfeasibleState("play state " + std::to_string(state.v) +
                          " outside its constraint interval");
  }
  const double trial = state.v + tau * forcing;
  PlayState next;
  next.v = resolvent(iv, trial);
  next.selection = (next.v > iv.lo && next.v < iv.hi) ? 0.0 : (trial - next.v) / tau;
  return next;
}

double play_step(double v_prev, double alpha, double beta) {
  return resolvent(ConstraintInterval::make(alpha, beta), v_prev);
}

PlayTrajectory drive_play(const std::function<double(double)>& u_of_t,
                          const HysteresisEnvelope& env, double tau, double t_end,
                          double v_init, InitPolicy policy) {
  if (!(tau > 0.0)) throw ConfigError("time step must be positive");
  if (!(t_end >= tau)) throw ConfigError("final time must be at least one time step");

  PlayTrajectory out;
  double u_prev = u_of_t(0.0);
  const double lo0 = env.lower(u_prev);
  const double hi0 = env.upper(u_prev);
  double chi = v_init;
  if (!(chi >= lo0 - kFeasibilityTol && chi <= hi0 + kFeasibilityTol)) {
    if (policy == InitPolicy::Strict) {
      throw InfeasibleState("initial hysteresis value " + std::to_string(v_init) +
                            " outside [F(u0), G(u0)] = [" + std::to_string(lo0) + ", " +
                            std::to_string(hi0) + "]");
    }
    out.initial_clamped = true;
  }
  chi = std::clamp(chi, lo0, hi0);

  const auto steps = static_cast<std::size_t>(std::llround(t_end / tau));
  out.points.reserve(steps);
  for (std::size_t n = 1; n <= steps; ++n) {
    const double t = static_cast<double>(n) * tau;
    const double u = u_of_t(t);
    const double beta = env.width(u_prev);
    const double f = env.lower(u);
    chi = f + play_step(chi - f, 0.0, beta);
    out.points.push_back({t, u, chi, beta});
    u_prev = u;
  }
  return out;
}

}  // namespace cryostef
