#pragma once

// Experiment drivers behind the `cryostef` CLI. Each returns its data in
// memory; the write_* functions emit the documented CSV files.

#include <cstddef>
#include <filesystem>
#include <vector>

#include "cryostef/harness/config.hpp"
#include "cryostef/play.hpp"
#include "cryostef/stepper.hpp"

namespace cryostef::harness {

struct IterationSummary {
  std::size_t n_min = 0;
  std::size_t n_max = 0;
  double n_ave = 0.0;
};

/// Statistics of inner_iters_total over all steps.
IterationSummary summarize(const std::vector<StepReport>& reports);

struct SimulationRun {
  RunConfig config;
  std::vector<double> x;            // cell centers (a single 0 for ODE runs)
  std::vector<TimeState> states;    // states[0] is the initial state
  std::vector<StepReport> reports;  // reports[n - 1] belongs to step n
  std::vector<EnergyBalance> balances;
  std::size_t adjusted_cells = 0;   // initial-data cells clamped or overwritten

  IterationSummary summary() const { return summarize(reports); }
  /// Step indices written to snapshots.csv.
  std::vector<std::size_t> snapshot_steps() const;
};

/// Throws NonConvergence (with the failing step) and InfeasibleState under
/// strict initialization.
SimulationRun run_pde(const RunConfig& cfg);

/// snapshots.csv, phase.csv, iterations.csv and summary.csv.
void write_pde_outputs(const SimulationRun& run, const std::filesystem::path& dir);

/// Scalar system u' + chi' + A u = f(t) with the hysteresis closure and c(u) = u.
SimulationRun run_ode_coupled(const RunConfig& cfg);

/// Prescribed input u(t) driving the generalized play.
PlayTrajectory run_ode_driven(const RunConfig& cfg);

/// trajectory.csv with rows t_1 .. t_N.
void write_trajectory(const SimulationRun& run, const std::filesystem::path& file);
void write_trajectory(const PlayTrajectory& run, const std::filesystem::path& file);

struct OrderRow {
  double tau = 0.0;
  double err_l1 = 0.0;
  double err_l2 = 0.0;
  double err_inf = 0.0;
  // NaN on the first row.
  double order_l1 = 0.0;
  double order_l2 = 0.0;
  double order_inf = 0.0;
};

/// Errors of coarse runs against the fine run, sampled at coarse time points.
/// Pointwise error is the Euclidean norm of (chi, u) differences; the L1 and
/// L2 norms are tau-weighted. Throws ConfigError if fine_tau does not divide
/// a coarse tau. Runs up to `threads` simulations concurrently.
std::vector<OrderRow> convergence_study(const RunConfig& cfg, unsigned threads = 1);

void write_orders(const std::vector<OrderRow>& rows, const std::filesystem::path& file);

struct EnvelopeSample {
  double theta;
  double F;
  double G;
};

struct Calibration {
  HysteresisEnvelope envelope;
  std::vector<EnvelopeSample> samples;  // uniform over [theta0 - 2, 2]
};

Calibration calibrate(const RunConfig& cfg, std::size_t points = 1000);
void write_envelope(const Calibration& cal, const std::filesystem::path& file);

/// CRYOSTEF_THREADS, default 1.
unsigned sweep_threads_from_env();

}  // namespace cryostef::harness
