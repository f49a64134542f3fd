#pragma once

#include <vector>

#include "qoc/dynamics.hpp"
#include "qoc/errors.hpp"
#include "qoc/types.hpp"

namespace qoc {

/// Piecewise-constant control pair on a uniform grid over [0, T]:
/// v[i], n[i] apply on [i dt, (i+1) dt), dt = T/N.
struct ControlGrid {
  double T = 1.0;
  int N = 1;
  std::vector<double> v;
  std::vector<double> n;

  double dt() const { return T / N; }

  static ControlGrid constant(double T, int N, double v_val, double n_val) {
    ControlGrid u;
    u.T = T;
    u.N = N;
    u.v.assign(static_cast<size_t>(N), v_val);
    u.n.assign(static_cast<size_t>(N), n_val);
    return u;
  }
};

struct Trajectory {
  std::vector<double> times;         // N+1 uniform points, 0 .. T
  std::vector<BlochVector> states;

  const BlochVector& final_state() const { return states.back(); }
};

struct AdjointTrajectory {
  std::vector<double> times;  // same grid as the associated Trajectory
  std::vector<AdjointVector> costates;
};

/// Uniform RK4 step <= 0.005 per control interval, rounded up to an even
/// count so the Simpson gradient quadrature applies directly.
int default_substeps(double T, int N);

/// Number of control intervals giving dt close to 0.35 (~18 samples per
/// Larmor period at omega = 1).
int default_intervals(double T);

/// Classical RK4 with step dt/substeps, control held constant within each
/// interval; states recorded at interval endpoints. Throws NonFiniteState.
Trajectory integrate_forward(const BlochVector& x0, const ControlGrid& u,
                             const SystemParams& params, int substeps);

/// Conjugate system integrated backward from t = T; same grid convention.
AdjointTrajectory integrate_adjoint(const AdjointVector& p_T,
                                    const ControlGrid& u,
                                    const SystemParams& params, int substeps);

/// ||x(T) - x_target||^2.
double cost(const Trajectory& traj, const BlochVector& x_target);

/// Substep-resolved states, N*substeps + 1 nodes. Feeds the per-interval
/// gradient quadrature.
std::vector<Vec3> integrate_forward_dense(const BlochVector& x0,
                                          const ControlGrid& u,
                                          const SystemParams& params,
                                          int substeps);

std::vector<Vec3> integrate_adjoint_dense(const AdjointVector& p_T,
                                          const ControlGrid& u,
                                          const SystemParams& params,
                                          int substeps);

}  // namespace qoc
