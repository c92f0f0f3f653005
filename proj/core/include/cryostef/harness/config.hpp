#pragma once

// Run configuration: flat `key = value` text, `#` starts a comment.
//
//   closure  = hyst
//   M        = 100
//   bc_left  = (0,5),(1,5),(2,-5),(3,5)
//   chi_init = F(u) + 0.1
//
// Every mode starts from defaults reproducing its reference experiment; the
// file only overrides.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cryostef/constitutive.hpp"
#include "cryostef/grid.hpp"
#include "cryostef/harness/expression.hpp"
#include "cryostef/harness/schedule.hpp"
#include "cryostef/play.hpp"
#include "cryostef/solve.hpp"
#include "cryostef/step_problem.hpp"

namespace cryostef::harness {

enum class Mode { Pde, OdeCoupled, OdeDriven, Calibrate, Convergence };
enum class ClosureTag { EQ, NEQ, HYST };

/// Throws ConfigError on unknown names.
Mode parse_mode(std::string_view name);
std::string_view mode_name(Mode mode);
ClosureTag parse_closure(std::string_view name);

struct RunConfig {
  Mode mode = Mode::Pde;
  ClosureTag closure = ClosureTag::EQ;
  double B = 5.0;

  std::size_t M = 100;
  double tau = 0.01;
  double T = 3.0;
  double length = 1.0;

  // Scaled material; b is shared by F, c, k and the envelope's lower curve.
  double b = 1.0;
  double c_u = 2.94e-2;
  double c_f = 2.21e-2;
  double k_u = 1.51e-2;
  double k_f = 2.06e-2;

  double b_bar = 0.01;
  double theta0 = -5.0;
  EnvelopeVariant envelope_variant = EnvelopeVariant::ThreeCondition;

  PiecewiseLinearSchedule bc_left = PiecewiseLinearSchedule::parse("(0,5),(1,5),(2,-5),(3,5)");
  PiecewiseLinearSchedule bc_right = PiecewiseLinearSchedule::constant(-5.0);
  Expression u_init = Expression::parse("-5");        // over x
  Expression chi_init = Expression::parse("F(u)");    // over x, u
  Expression source = Expression::parse("0");         // over x, t
  std::vector<double> output_times{0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  FaceAveraging face_averaging = FaceAveraging::Harmonic;

  // ODE modes.
  double A = 0.02;
  Expression forcing = Expression::parse("0");     // over t
  Expression u_schedule = Expression::parse("0");  // over t

  // Convergence study.
  double fine_tau = 1e-4;
  std::vector<double> coarse_taus{0.1, 0.01, 0.001};

  SolverOptions solver;
  InitPolicy init_policy = InitPolicy::Clamp;
  std::filesystem::path out_dir = ".";

  /// Reference experiment for each mode.
  static RunConfig defaults(Mode mode);

  /// Throws ConfigError if any field is out of range.
  void validate() const;

  ScaledMaterial material() const;
  HysteresisEnvelope envelope() const;
  ClosureKind closure_kind() const;
  /// Scope with F and G bound to this configuration's curves.
  Scope curve_scope() const;
};

/// Applies one `key = value` setting. Throws ConfigError for unknown keys or
/// malformed values.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Parses configuration text on top of RunConfig::defaults(mode). A `mode`
/// key, if present, must agree with `mode`.
RunConfig parse_config(std::string_view text, Mode mode);
RunConfig load_config(const std::filesystem::path& file, Mode mode);

}  // namespace cryostef::harness
