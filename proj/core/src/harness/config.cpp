#include "cryostef/harness/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cryostef/errors.hpp"

namespace cryostef::harness {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

double to_double(std::string_view key, std::string_view value) {
  value = trim(value);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || end != value.data() + value.size() || value.empty()) {
    throw ConfigError("'" + std::string(key) + "' expects a number, got '" + std::string(value) +
                      "'");
  }
  return v;
}

std::size_t to_count(std::string_view key, std::string_view value) {
  const double v = to_double(key, value);
  if (v < 0.0 || v != std::floor(v)) {
    throw ConfigError("'" + std::string(key) + "' expects a non-negative integer");
  }
  return static_cast<std::size_t>(v);
}

std::vector<double> to_list(std::string_view key, std::string_view value) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    const auto comma = value.find(',', pos);
    const auto item = value.substr(pos, comma == std::string_view::npos ? value.npos : comma - pos);
    if (!trim(item).empty()) out.push_back(to_double(key, item));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

bool to_bool(std::string_view key, std::string_view value) {
  const auto v = lower(trim(value));
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("'" + std::string(key) + "' expects true/false");
}

Strategy parse_strategy(std::string_view value) {
  const auto v = lower(trim(value));
  if (v == "newton-alag") return Strategy::NewtonALag;
  if (v == "fixed-point") return Strategy::FixedPointMonolithic;
  if (v == "newton-frozen") return Strategy::NewtonFrozenA;
  throw ConfigError("unknown solver '" + std::string(value) + "'");
}

}  // namespace

Mode parse_mode(std::string_view name) {
  const auto v = lower(trim(name));
  if (v == "pde") return Mode::Pde;
  if (v == "ode-coupled") return Mode::OdeCoupled;
  if (v == "ode-driven") return Mode::OdeDriven;
  if (v == "calibrate") return Mode::Calibrate;
  if (v == "convergence") return Mode::Convergence;
  throw ConfigError("unknown mode '" + std::string(name) + "'");
}

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::Pde: return "pde";
    case Mode::OdeCoupled: return "ode-coupled";
    case Mode::OdeDriven: return "ode-driven";
    case Mode::Calibrate: return "calibrate";
    case Mode::Convergence: return "convergence";
  }
  return "?";
}

ClosureTag parse_closure(std::string_view name) {
  const auto v = lower(trim(name));
  if (v == "eq") return ClosureTag::EQ;
  if (v == "neq" || v == "kin") return ClosureTag::NEQ;
  if (v == "hyst") return ClosureTag::HYST;
  throw ConfigError("unknown closure '" + std::string(name) + "'");
}

RunConfig RunConfig::defaults(Mode mode) {
  RunConfig cfg;
  cfg.mode = mode;
  switch (mode) {
    case Mode::Pde:
      cfg.chi_init = Expression::parse("F(u) + 0.1");
      break;
    case Mode::OdeCoupled:
    case Mode::Convergence:
      cfg.closure = ClosureTag::HYST;
      cfg.b = 1.0;
      cfg.b_bar = 0.1;
      cfg.theta0 = -5.0;
      cfg.A = 0.02;
      cfg.T = 10.0;
      cfg.tau = 0.01;
      cfg.u_init = Expression::parse("-0.2");
      cfg.chi_init = Expression::parse("exp(-0.5)");
      cfg.forcing =
          Expression::parse("if(t < 1, 16, 4) * cos(pi * t) + if(t < 1, -15, 4 * t - 30)");
      break;
    case Mode::OdeDriven:
      cfg.closure = ClosureTag::HYST;
      cfg.b = 1.0;
      cfg.b_bar = 0.01;
      cfg.theta0 = -5.0;
      cfg.T = 30.0;
      cfg.tau = 3.75e-2;
      cfg.u_schedule =
          Expression::parse("if(t < 4, 8, 4) * cos(pi * t / 4) + if(t < 4, -2, t / 2 - 8)");
      cfg.chi_init = Expression::parse("F(u)");
      break;
    case Mode::Calibrate:
      cfg.b = 0.7;
      cfg.b_bar = 0.1;
      cfg.theta0 = -5.0;
      break;
  }
  return cfg;
}

void RunConfig::validate() const {
  if (!(tau > 0.0)) throw ConfigError("tau must be positive");
  if (mode != Mode::Calibrate && !(T >= tau)) throw ConfigError("T must be at least tau");
  if (mode == Mode::Pde && M < 2) throw ConfigError("M must be at least 2");
  if (!(length > 0.0)) throw ConfigError("length must be positive");
  if (closure == ClosureTag::NEQ && !(B > 0.0)) throw ConfigError("B must be positive");
  if ((mode == Mode::OdeCoupled || mode == Mode::Convergence) && !(A > 0.0)) {
    throw ConfigError("A must be positive");
  }
  if (mode == Mode::Convergence) {
    if (!(fine_tau > 0.0)) throw ConfigError("fine_tau must be positive");
    if (coarse_taus.empty()) throw ConfigError("coarse_taus must not be empty");
  }
  solver.validate();
  material();
  if (closure == ClosureTag::HYST || mode == Mode::Calibrate || mode == Mode::OdeDriven) {
    envelope();
  }
}

ScaledMaterial RunConfig::material() const { return ScaledMaterial(b, c_u, c_f, k_u, k_f); }

HysteresisEnvelope RunConfig::envelope() const {
  return calibrate_envelope(b, b_bar, theta0, envelope_variant);
}

ClosureKind RunConfig::closure_kind() const {
  switch (closure) {
    case ClosureTag::EQ: return Equilibrium{};
    case ClosureTag::NEQ: return make_kinetic(B);
    case ClosureTag::HYST: return Hysteretic{envelope()};
  }
  return Equilibrium{};
}

Scope RunConfig::curve_scope() const {
  Scope scope;
  const double steep = b;
  scope.functions["F"] = [steep](double u) { return equilibrium_fraction(u, steep); };
  const auto env = calibrate_envelope(b, b_bar, theta0, envelope_variant);
  scope.functions["G"] = [env](double u) { return env.upper(u); };
  return scope;
}

void apply_setting(RunConfig& cfg, std::string_view raw_key, std::string_view value) {
  value = trim(value);
  // "B" (relaxation rate) and "b" (steepness) differ only by case.
  if (trim(raw_key) == "B") {
    cfg.B = to_double("B", value);
    return;
  }
  const std::string key = lower(trim(raw_key));
  if (key == "mode") {
    if (parse_mode(value) != cfg.mode) {
      throw ConfigError("config mode '" + std::string(value) + "' does not match '" +
                        std::string(mode_name(cfg.mode)) + "'");
    }
  } else if (key == "closure") {
    cfg.closure = parse_closure(value);
  } else if (key == "m") {
    cfg.M = to_count(key, value);
  } else if (key == "tau") {
    cfg.tau = to_double(key, value);
  } else if (key == "t" || key == "t_end") {
    cfg.T = to_double(key, value);
  } else if (key == "length") {
    cfg.length = to_double(key, value);
  } else if (key == "b") {
    cfg.b = to_double(key, value);
  } else if (key == "c_u") {
    cfg.c_u = to_double(key, value);
  } else if (key == "c_f") {
    cfg.c_f = to_double(key, value);
  } else if (key == "k_u") {
    cfg.k_u = to_double(key, value);
  } else if (key == "k_f") {
    cfg.k_f = to_double(key, value);
  } else if (key == "b_bar") {
    cfg.b_bar = to_double(key, value);
  } else if (key == "theta0") {
    cfg.theta0 = to_double(key, value);
  } else if (key == "envelope") {
    const auto v = lower(value);
    if (v == "three" || v == "three-condition") {
      cfg.envelope_variant = EnvelopeVariant::ThreeCondition;
    } else if (v == "two" || v == "two-condition") {
      cfg.envelope_variant = EnvelopeVariant::TwoCondition;
    } else {
      throw ConfigError("envelope must be 'three' or 'two'");
    }
  } else if (key == "bc_left") {
    cfg.bc_left = PiecewiseLinearSchedule::parse(value);
  } else if (key == "bc_right") {
    cfg.bc_right = PiecewiseLinearSchedule::parse(value);
  } else if (key == "u_init") {
    cfg.u_init = Expression::parse(value);
  } else if (key == "chi_init") {
    cfg.chi_init = Expression::parse(value);
  } else if (key == "source") {
    cfg.source = Expression::parse(value);
  } else if (key == "output_times") {
    cfg.output_times = to_list(key, value);
  } else if (key == "face_averaging") {
    const auto v = lower(value);
    if (v == "harmonic") {
      cfg.face_averaging = FaceAveraging::Harmonic;
    } else if (v == "arithmetic") {
      cfg.face_averaging = FaceAveraging::Arithmetic;
    } else {
      throw ConfigError("face_averaging must be 'harmonic' or 'arithmetic'");
    }
  } else if (key == "a") {
    cfg.A = to_double(key, value);
  } else if (key == "forcing") {
    cfg.forcing = Expression::parse(value);
  } else if (key == "u_schedule") {
    cfg.u_schedule = Expression::parse(value);
  } else if (key == "fine_tau") {
    cfg.fine_tau = to_double(key, value);
  } else if (key == "coarse_taus") {
    cfg.coarse_taus = to_list(key, value);
  } else if (key == "solver") {
    cfg.solver.strategy = parse_strategy(value);
  } else if (key == "tol") {
    cfg.solver.tol = to_double(key, value);
  } else if (key == "max_iter" || key == "max_inner") {
    cfg.solver.max_inner = static_cast<int>(to_count(key, value));
  } else if (key == "max_outer") {
    cfg.solver.max_outer = static_cast<int>(to_count(key, value));
  } else if (key == "strict_init") {
    cfg.init_policy = to_bool(key, value) ? InitPolicy::Strict : InitPolicy::Clamp;
  } else if (key == "out_dir") {
    cfg.out_dir = std::string(value);
  } else {
    throw ConfigError("unknown configuration key '" + std::string(raw_key) + "'");
  }
}

RunConfig parse_config(std::string_view text, Mode mode) {
  RunConfig cfg = RunConfig::defaults(mode);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (!line.empty()) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
      }
      try {
        apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
      } catch (const ConfigError& e) {
        throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& file, Mode mode) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file '" + file.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), mode);
}

}  // namespace cryostef::harness
