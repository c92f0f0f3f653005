#include "cryostef/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <limits>
#include <string>

#include "cryostef/errors.hpp"
#include "cryostef/harness/csv.hpp"

namespace cryostef::harness {
namespace {

std::size_t step_count(double t_end, double tau) {
  return static_cast<std::size_t>(std::llround(t_end / tau));
}

SimulationRun integrate(const RunConfig& cfg, const Stepper& stepper, InitResult init,
                        std::vector<double> x) {
  SimulationRun run;
  run.config = cfg;
  run.x = std::move(x);
  run.adjusted_cells = init.adjusted_cells;
  const std::size_t steps = step_count(cfg.T, cfg.tau);
  run.states.reserve(steps + 1);
  run.reports.reserve(steps);
  run.balances.reserve(steps);
  run.states.push_back(std::move(init.state));
  for (std::size_t n = 1; n <= steps; ++n) {
    auto outcome = stepper.advance_to(run.states.back(), static_cast<double>(n) * cfg.tau, n);
    run.states.push_back(std::move(outcome.state));
    run.reports.push_back(std::move(outcome.report));
    run.balances.push_back(outcome.balance);
  }
  return run;
}

}  // namespace

IterationSummary summarize(const std::vector<StepReport>& reports) {
  IterationSummary s;
  if (reports.empty()) return s;
  s.n_min = std::numeric_limits<std::size_t>::max();
  double total = 0.0;
  for (const auto& r : reports) {
    s.n_min = std::min(s.n_min, r.inner_iters_total);
    s.n_max = std::max(s.n_max, r.inner_iters_total);
    total += static_cast<double>(r.inner_iters_total);
  }
  s.n_ave = total / static_cast<double>(reports.size());
  return s;
}

std::vector<std::size_t> SimulationRun::snapshot_steps() const {
  std::vector<std::size_t> out;
  const std::size_t last = states.empty() ? 0 : states.size() - 1;
  for (double t : config.output_times) {
    const double k = t / config.tau;
    const auto n = static_cast<std::size_t>(std::llround(k));
    if (t < 0.0 || n > last || std::abs(k - static_cast<double>(n)) > 0.5 + 1e-9) continue;
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  }
  return out;
}

SimulationRun run_pde(const RunConfig& cfg) {
  cfg.validate();
  const Grid1D grid(cfg.M, cfg.length);
  const ScaledMaterial material = cfg.material();
  const ClosureKind closure = cfg.closure_kind();

  Scope scope = cfg.curve_scope();
  std::vector<double> u0(grid.cells());
  std::vector<double> chi0(grid.cells());
  for (std::size_t j = 0; j < grid.cells(); ++j) {
    scope.variables["x"] = grid.centers()[j];
    u0[j] = cfg.u_init.evaluate(scope);
    scope.variables["u"] = u0[j];
    chi0[j] = cfg.chi_init.evaluate(scope);
  }
  auto init = initial_state(closure, cfg.b, std::move(u0), std::move(chi0), cfg.init_policy);

  const auto left = cfg.bc_left;
  const auto right = cfg.bc_right;
  auto op = pde_operator(grid, material, [left](double t) { return left(t); },
                         [right](double t) { return right(t); }, cfg.face_averaging);

  const auto source_expr = cfg.source;
  const auto centers = grid.centers();
  SourceFactory source = [source_expr, centers](double t) {
    Scope s;
    s.variables["t"] = t;
    std::vector<double> f(centers.size());
    for (std::size_t j = 0; j < centers.size(); ++j) {
      s.variables["x"] = centers[j];
      f[j] = source_expr.evaluate(s);
    }
    return f;
  };

  const Stepper stepper(closure, Capacity::from_material(material), cfg.b, std::move(op),
                        std::move(source), cfg.solver, grid.h());
  return integrate(cfg, stepper, std::move(init), grid.centers());
}

void write_pde_outputs(const SimulationRun& run, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    CsvWriter csv(dir / "snapshots.csv", {"t", "x", "u", "chi"});
    for (std::size_t n : run.snapshot_steps()) {
      const auto& s = run.states[n];
      for (std::size_t j = 0; j < run.x.size(); ++j) csv.row({s.t, run.x[j], s.u[j], s.fraction[j]});
    }
  }
  {
    CsvWriter csv(dir / "phase.csv", {"t", "x", "u", "chi"});
    for (std::size_t n = 1; n < run.states.size(); ++n) {
      const auto& s = run.states[n];
      for (std::size_t j = 0; j < run.x.size(); ++j) csv.row({s.t, run.x[j], s.u[j], s.fraction[j]});
    }
  }
  {
    CsvWriter csv(dir / "iterations.csv", {"step", "t", "outer", "inner_total", "residual"});
    for (std::size_t n = 1; n < run.states.size(); ++n) {
      const auto& r = run.reports[n - 1];
      csv.row({std::uint64_t{n}, run.states[n].t, std::uint64_t{r.outer_iters},
               std::uint64_t{r.inner_iters_total}, r.final_residual()});
    }
  }
  {
    const auto s = run.summary();
    CsvWriter csv(dir / "summary.csv", {"n_min", "n_max", "n_ave"});
    csv.row({std::uint64_t{s.n_min}, std::uint64_t{s.n_max}, s.n_ave});
  }
}

SimulationRun run_ode_coupled(const RunConfig& cfg) {
  cfg.validate();
  Scope scope = cfg.curve_scope();
  scope.variables["x"] = 0.0;
  const double u0 = cfg.u_init.evaluate(scope);
  scope.variables["u"] = u0;
  const double chi0 = cfg.chi_init.evaluate(scope);

  const ClosureKind closure = cfg.closure_kind();
  auto init = initial_state(closure, cfg.b, {u0}, {chi0}, cfg.init_policy);

  const auto forcing = cfg.forcing;
  SourceFactory source = [forcing](double t) {
    Scope s;
    s.variables["t"] = t;
    return std::vector<double>{forcing.evaluate(s)};
  };
  const Stepper stepper(closure, Capacity::identity(), cfg.b, scalar_operator(cfg.A),
                        std::move(source), cfg.solver);
  return integrate(cfg, stepper, std::move(init), {0.0});
}

PlayTrajectory run_ode_driven(const RunConfig& cfg) {
  cfg.validate();
  const auto env = cfg.envelope();
  const auto schedule = cfg.u_schedule;
  auto u_of_t = [schedule](double t) {
    Scope s;
    s.variables["t"] = t;
    return schedule.evaluate(s);
  };
  Scope scope = cfg.curve_scope();
  scope.variables["x"] = 0.0;
  scope.variables["u"] = u_of_t(0.0);
  const double v_init = cfg.chi_init.evaluate(scope);
  return drive_play(u_of_t, env, cfg.tau, cfg.T, v_init, cfg.init_policy);
}

void write_trajectory(const SimulationRun& run, const std::filesystem::path& file) {
  CsvWriter csv(file, {"t", "u", "chi"});
  for (std::size_t n = 1; n < run.states.size(); ++n) {
    const auto& s = run.states[n];
    csv.row({s.t, s.u.front(), s.fraction.front()});
  }
}

void write_trajectory(const PlayTrajectory& run, const std::filesystem::path& file) {
  CsvWriter csv(file, {"t", "u", "chi"});
  for (const auto& p : run.points) csv.row({p.t, p.u, p.v});
}

std::vector<OrderRow> convergence_study(const RunConfig& cfg, unsigned threads) {
  cfg.validate();
  std::vector<std::size_t> ratios;
  for (double tau : cfg.coarse_taus) {
    const double ratio = tau / cfg.fine_tau;
    const auto k = std::llround(ratio);
    if (k < 1 || std::abs(ratio - static_cast<double>(k)) > 1e-9 * ratio) {
      throw ConfigError("fine tau " + format_real(cfg.fine_tau) + " does not divide " +
                        format_real(tau));
    }
    ratios.push_back(static_cast<std::size_t>(k));
  }

  std::vector<RunConfig> jobs;
  RunConfig fine = cfg;
  fine.mode = Mode::OdeCoupled;
  fine.tau = cfg.fine_tau;
  jobs.push_back(fine);
  for (double tau : cfg.coarse_taus) {
    RunConfig c = fine;
    c.tau = tau;
    jobs.push_back(c);
  }

  // Results are stored by job index, so concurrency never changes the output.
  std::vector<SimulationRun> runs(jobs.size());
  const std::size_t width = std::max(1u, threads);
  for (std::size_t start = 0; start < jobs.size(); start += width) {
    std::vector<std::future<SimulationRun>> batch;
    const std::size_t stop = std::min(jobs.size(), start + width);
    for (std::size_t i = start; i < stop; ++i) {
      batch.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred,
                                 [&jobs, i] { return run_ode_coupled(jobs[i]); }));
    }
    for (std::size_t i = start; i < stop; ++i) runs[i] = batch[i - start].get();
  }

  const auto& fine_states = runs.front().states;
  std::vector<OrderRow> rows;
  for (std::size_t c = 0; c < cfg.coarse_taus.size(); ++c) {
    const auto& coarse = runs[c + 1].states;
    OrderRow row;
    row.tau = cfg.coarse_taus[c];
    double sum1 = 0.0;
    double sum2 = 0.0;
    for (std::size_t n = 1; n < coarse.size(); ++n) {
      const std::size_t nf = n * ratios[c];
      if (nf >= fine_states.size()) break;
      const double du = coarse[n].u.front() - fine_states[nf].u.front();
      const double dchi = coarse[n].fraction.front() - fine_states[nf].fraction.front();
      const double e = std::hypot(du, dchi);
      sum1 += row.tau * e;
      sum2 += row.tau * e * e;
      row.err_inf = std::max(row.err_inf, e);
    }
    row.err_l1 = sum1;
    row.err_l2 = std::sqrt(sum2);
    if (rows.empty()) {
      row.order_l1 = row.order_l2 = row.order_inf = std::numeric_limits<double>::quiet_NaN();
    } else {
      const auto& prev = rows.back();
      const double lr = std::log(prev.tau / row.tau);
      row.order_l1 = std::log(prev.err_l1 / row.err_l1) / lr;
      row.order_l2 = std::log(prev.err_l2 / row.err_l2) / lr;
      row.order_inf = std::log(prev.err_inf / row.err_inf) / lr;
    }
    rows.push_back(row);
  }
  return rows;
}

void write_orders(const std::vector<OrderRow>& rows, const std::filesystem::path& file) {
  CsvWriter csv(file,
                {"tau", "err_l1", "err_l2", "err_inf", "order_l1", "order_l2", "order_inf"});
  for (const auto& r : rows) {
    csv.row({r.tau, r.err_l1, r.err_l2, r.err_inf, r.order_l1, r.order_l2, r.order_inf});
  }
}

Calibration calibrate(const RunConfig& cfg, std::size_t points) {
  Calibration cal;
  cal.envelope = cfg.envelope();
  const double lo = cfg.theta0 - 2.0;
  const double hi = 2.0;
  cal.samples.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double theta =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(points - 1, 1));
    cal.samples.push_back({theta, cal.envelope.lower(theta), cal.envelope.upper(theta)});
  }
  return cal;
}

void write_envelope(const Calibration& cal, const std::filesystem::path& file) {
  CsvWriter csv(file, {"theta", "F", "G"});
  for (const auto& s : cal.samples) csv.row({s.theta, s.F, s.G});
}

unsigned sweep_threads_from_env() {
  const char* raw = std::getenv("CRYOSTEF_THREADS");
  if (raw == nullptr || *raw == '\0') return 1;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || v < 1) {
    throw ConfigError(std::string("CRYOSTEF_THREADS must be a positive integer, got '") + raw +
                      "'");
  }
  return static_cast<unsigned>(v);
}

}  // namespace cryostef::harness
