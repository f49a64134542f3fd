#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qoc/gpm.hpp"
#include "qoc/minimal_time.hpp"

namespace qoc {

/// Full run configuration, loaded from JSON. States accept either a Bloch
/// 3-vector or a density matrix as four [re, im] pairs in row-major order.
struct RunConfig {
  SystemParams system;
  ControlBounds bounds;
  BlochVector initial_state;
  BlochVector target_state;

  double T = 70.0;
  int N = 0;         // 0 = derive from T (dt ~ 0.35)
  int substeps = 0;  // 0 = derive from dt (RK4 step <= 0.005, even)

  GpmSettings gpm;
  SweepSettings sweep;
  std::vector<double> sweep_grid;  // non-empty selects grid mode

  double sim_v = 0.0;  // constant controls for simulate
  double sim_n = 0.0;
  std::string control_csv;  // overrides constant controls when set

  std::string output_dir;
};

/// Parses and validates a config file; ConfigError messages name the
/// offending field.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);

/// Resolved discretization for the configured horizon.
FixedTimeProblem make_problem(const RunConfig& cfg);

// CSV emission. All floating-point fields use "%.17g" so identical runs
// produce byte-identical files.
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const ControlGrid& u);
void write_control_csv(const std::string& path, const ControlGrid& u);
void write_convergence_csv(const std::string& path,
                           const std::vector<IterRecord>& log);

/// Reads `t,v,n` (also accepts the trajectory header `t,x1,x2,x3,v,n`);
/// the grid is taken from the file itself.
ControlGrid read_control_csv(const std::string& path);

struct SimulateSummary {
  double J_final = 0.0;
  double norm_max = 0.0;
};

struct OptimizeSummary {
  double J_final = 0.0;
  int iterations = 0;
  Termination termination = Termination::MaxIters;
};

/// Subcommand drivers. Each writes its artifacts under cfg.output_dir.
SimulateSummary run_simulate(const RunConfig& cfg);
OptimizeSummary run_optimize(const RunConfig& cfg);
SweepResult run_sweep(const RunConfig& cfg);

/// Gradient pre-flight: max relative mismatch between the adjoint gradient
/// and central finite differences at the seeded control.
double run_grad_check(const RunConfig& cfg, double fd_step = 1e-3);

}  // namespace qoc
