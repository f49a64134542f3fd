#include "qoc/integrator.hpp"

#include <cmath>

namespace qoc {

namespace {

constexpr double kMaxRkStep = 0.005;

template <class F>
Vec3 rk4_step(F&& f, const Vec3& y, double h) {
  const Vec3 k1 = f(y);
  const Vec3 k2 = f(y + 0.5 * h * k1);
  const Vec3 k3 = f(y + 0.5 * h * k2);
  const Vec3 k4 = f(y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

[[noreturn]] void throw_non_finite(const char* what, double t) {
  throw NonFiniteState(std::string(what) + " became non-finite at t = " +
                       std::to_string(t));
}

}  // namespace

int default_substeps(double T, int N) {
  int s = static_cast<int>(std::ceil(T / N / kMaxRkStep));
  if (s < 2) s = 2;
  if (s % 2) ++s;
  return s;
}

int default_intervals(double T) {
  const int n = static_cast<int>(std::lround(T / 0.35));
  return n < 1 ? 1 : n;
}

std::vector<Vec3> integrate_forward_dense(const BlochVector& x0,
                                          const ControlGrid& u,
                                          const SystemParams& params,
                                          int substeps) {
  const double h = u.dt() / substeps;
  std::vector<Vec3> nodes(static_cast<size_t>(u.N) * substeps + 1);
  Vec3 y = x0.vec();
  nodes[0] = y;
  for (int i = 0; i < u.N; ++i) {
    const double v = u.v[i], n = u.n[i];
    auto f = [&](const Vec3& s) {
      return bloch_rhs(BlochVector::from(s), v, n, params);
    };
    for (int j = 0; j < substeps; ++j) {
      y = rk4_step(f, y, h);
      nodes[static_cast<size_t>(i) * substeps + j + 1] = y;
    }
    if (!finite(y)) throw_non_finite("state", (i + 1) * u.dt());
  }
  return nodes;
}

Trajectory integrate_forward(const BlochVector& x0, const ControlGrid& u,
                             const SystemParams& params, int substeps) {
  const double h = u.dt() / substeps;
  Trajectory traj;
  traj.times.resize(static_cast<size_t>(u.N) + 1);
  traj.states.resize(static_cast<size_t>(u.N) + 1);
  Vec3 y = x0.vec();
  traj.times[0] = 0.0;
  traj.states[0] = x0;
  for (int i = 0; i < u.N; ++i) {
    const double v = u.v[i], n = u.n[i];
    auto f = [&](const Vec3& s) {
      return bloch_rhs(BlochVector::from(s), v, n, params);
    };
    for (int j = 0; j < substeps; ++j) y = rk4_step(f, y, h);
    if (!finite(y)) throw_non_finite("state", (i + 1) * u.dt());
    traj.times[i + 1] = (i + 1) * u.dt();
    traj.states[i + 1] = BlochVector::from(y);
  }
  traj.times[u.N] = u.T;
  return traj;
}

std::vector<Vec3> integrate_adjoint_dense(const AdjointVector& p_T,
                                          const ControlGrid& u,
                                          const SystemParams& params,
                                          int substeps) {
  const double h = u.dt() / substeps;
  std::vector<Vec3> nodes(static_cast<size_t>(u.N) * substeps + 1);
  Vec3 y = p_T.vec();
  nodes.back() = y;
  for (int i = u.N - 1; i >= 0; --i) {
    const double v = u.v[i], n = u.n[i];
    auto f = [&](const Vec3& s) {
      return adjoint_rhs(AdjointVector::from(s), v, n, params);
    };
    for (int j = substeps - 1; j >= 0; --j) {
      y = rk4_step(f, y, -h);  // reversed time
      nodes[static_cast<size_t>(i) * substeps + j] = y;
    }
    if (!finite(y)) throw_non_finite("costate", i * u.dt());
  }
  return nodes;
}

AdjointTrajectory integrate_adjoint(const AdjointVector& p_T,
                                    const ControlGrid& u,
                                    const SystemParams& params, int substeps) {
  const double h = u.dt() / substeps;
  AdjointTrajectory adj;
  adj.times.resize(static_cast<size_t>(u.N) + 1);
  adj.costates.resize(static_cast<size_t>(u.N) + 1);
  Vec3 y = p_T.vec();
  adj.times[u.N] = u.T;
  adj.costates[u.N] = p_T;
  for (int i = u.N - 1; i >= 0; --i) {
    const double v = u.v[i], n = u.n[i];
    auto f = [&](const Vec3& s) {
      return adjoint_rhs(AdjointVector::from(s), v, n, params);
    };
    for (int j = 0; j < substeps; ++j) y = rk4_step(f, y, -h);
    if (!finite(y)) throw_non_finite("costate", i * u.dt());
    adj.times[i] = i * u.dt();
    adj.costates[i] = AdjointVector::from(y);
  }
  return adj;
}

double cost(const Trajectory& traj, const BlochVector& x_target) {
  const Vec3 d = traj.final_state().vec() - x_target.vec();
  return dot(d, d);
}

}  // namespace qoc
