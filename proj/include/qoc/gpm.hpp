#pragma once

#include <utility>
#include <vector>

#include "qoc/integrator.hpp"

namespace qoc {

struct GpmSettings {
  double alpha = 1e3;     // gradient step scale
  double epsilon = 1e-9;  // stop when |J(u_{k+1}) - J(u_k)| < epsilon
  int max_iters = 500;
  int beta_grid_size = 32;
  int beta_refine_iters = 20;
  double v_seed = 1.0;  // initial coherent control (n seed is 0)
};

struct FixedTimeProblem {
  SystemParams params;
  ControlBounds bounds;
  BlochVector x0;
  BlochVector x_target;
  double T = 1.0;
  int N = 1;
  int substeps = 1;

  double dt() const { return T / N; }
};

struct GradientEval {
  std::vector<double> gv;  // dJ/dv per interval (function-space gradient)
  std::vector<double> gn;
  Trajectory traj;
  AdjointTrajectory adj;
  double J = 0.0;
};

enum class Termination { EpsilonReached, NoImprovingBeta, MaxIters };

const char* to_string(Termination t);

struct IterRecord {
  int iter = 0;
  double J = 0.0;
  double beta = 0.0;
  bool accepted = false;
};

struct OptResult {
  ControlGrid u_final;
  std::vector<double> J_history;  // non-increasing, J(u_0) first
  std::vector<IterRecord> iter_log;
  int iterations = 0;
  Termination termination = Termination::MaxIters;
  Trajectory final_trajectory;
};

/// Componentwise clip of v to [v_min, v_max] and n to [0, n_max].
ControlGrid project_controls(const ControlGrid& u, const ControlBounds& bounds);

/// Adjoint-based gradient: gv[i] = -mean of K_v over interval i (Simpson on
/// the substep nodes), likewise gn. The directional derivative of cost along
/// (dv, dn) is sum_i (gv[i] dv[i] + gn[i] dn[i]) dt.
GradientEval compute_gradient(const ControlGrid& u,
                              const FixedTimeProblem& problem);

/// Global minimization of f(beta) = J(u + beta (u_pr - u)) over (0, 1]:
/// uniform grid of beta_grid_size points, then golden-section refinement in
/// the bracket around the best grid point. Returns (beta_star, J_star).
std::pair<double, double> line_search_beta(const ControlGrid& u,
                                           const ControlGrid& u_pr,
                                           const FixedTimeProblem& problem,
                                           const GpmSettings& settings);

/// Gradient projection iteration with the beta line search. Every accepted
/// iterate lies in Q; J_history is non-increasing.
OptResult gpm_iterate(const ControlGrid& u0, const FixedTimeProblem& problem,
                      const GpmSettings& settings);

/// Default initial control v = v_seed, n = 0, clipped to the bounds.
/// A nonzero coherent seed avoids the K_v = 0 symmetry trap when x0 and the
/// target both sit on the x3 axis.
ControlGrid seed_control(const FixedTimeProblem& problem, double v_seed);

}  // namespace qoc
