#pragma once

#include <vector>

#include "qoc/gpm.hpp"

namespace qoc {

struct SweepSettings {
  double T_hi = 400.0;     // known-feasible starting horizon
  double T_lo = 0.0;
  double reach_tol = 1e-6; // J threshold declaring the target reached
  int bisect_iters = 8;
  bool warm_start = true;  // reuse the previous feasible control, resampled
};

struct TimeRecord {
  double T = 0.0;
  double J_final = 0.0;
  int iterations = 0;
  ControlGrid u_final;
};

struct SweepResult {
  double t_min_estimate = 0.0;   // smallest feasible T observed
  double bracket_lo = 0.0;       // infeasible under the optimizer budget
  double bracket_hi = 0.0;       // feasible
  std::vector<TimeRecord> records;
};

/// Fixed-time problem rescaled to horizon T, keeping dt (and the RK4 substep
/// count) of the template.
FixedTimeProblem problem_at_time(const FixedTimeProblem& tmpl, double T);

/// Nearest-interval resampling of a control onto a new grid.
ControlGrid resample_nearest(const ControlGrid& src, double T, int N);

/// Bisection on the horizon: T is feasible iff gpm_iterate attains
/// J <= reach_tol. Requires feasibility at T_hi (throws InfeasibleAtTHi).
/// The estimate is an upper bound on the true minimal time: infeasibility
/// verdicts are relative to the optimizer budget.
SweepResult find_minimal_time(const FixedTimeProblem& tmpl,
                              const SweepSettings& sweep,
                              const GpmSettings& gpm);

/// Literal mode: solve an explicit list of horizons independently.
std::vector<TimeRecord> solve_time_grid(const FixedTimeProblem& tmpl,
                                        const std::vector<double>& times,
                                        const GpmSettings& gpm);

}  // namespace qoc
