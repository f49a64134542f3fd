#include "qoc/gpm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qoc {

namespace {

// Simpson's rule needs an even subinterval count.
int even_substeps(int s) {
  if (s < 2) s = 2;
  return s % 2 ? s + 1 : s;
}

ControlGrid mix_controls(const ControlGrid& u, const ControlGrid& u_pr,
                         double beta) {
  if (beta == 1.0) return u_pr;  // keep the endpoint exact
  ControlGrid m = u;
  for (int i = 0; i < u.N; ++i) {
    m.v[i] = u.v[i] + beta * (u_pr.v[i] - u.v[i]);
    m.n[i] = u.n[i] + beta * (u_pr.n[i] - u.n[i]);
  }
  return m;
}

}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::EpsilonReached: return "EpsilonReached";
    case Termination::NoImprovingBeta: return "NoImprovingBeta";
    case Termination::MaxIters: return "MaxIters";
  }
  return "unknown";
}

ControlGrid project_controls(const ControlGrid& u,
                             const ControlBounds& bounds) {
  ControlGrid p = u;
  for (int i = 0; i < u.N; ++i) {
    p.v[i] = std::clamp(u.v[i], bounds.v_min, bounds.v_max);
    p.n[i] = std::clamp(u.n[i], 0.0, bounds.n_max);
  }
  return p;
}

ControlGrid seed_control(const FixedTimeProblem& problem, double v_seed) {
  return project_controls(
      ControlGrid::constant(problem.T, problem.N, v_seed, 0.0),
      problem.bounds);
}

GradientEval compute_gradient(const ControlGrid& u,
                              const FixedTimeProblem& problem) {
  const int s = even_substeps(problem.substeps);
  const auto xs = integrate_forward_dense(problem.x0, u, problem.params, s);
  const BlochVector x_T = BlochVector::from(xs.back());
  const AdjointVector p_T = terminal_adjoint(x_T, problem.x_target);
  const auto ps = integrate_adjoint_dense(p_T, u, problem.params, s);

  GradientEval out;
  out.gv.resize(static_cast<size_t>(u.N));
  out.gn.resize(static_cast<size_t>(u.N));
  for (int i = 0; i < u.N; ++i) {
    double acc_v = 0.0, acc_n = 0.0;
    for (int j = 0; j <= s; ++j) {
      const size_t idx = static_cast<size_t>(i) * s + j;
      const Switching K =
          switching_functions(AdjointVector::from(ps[idx]),
                              BlochVector::from(xs[idx]), problem.params);
      const double w = (j == 0 || j == s) ? 1.0 : (j % 2 ? 4.0 : 2.0);
      acc_v += w * K.k_v;
      acc_n += w * K.k_n;
    }
    const double mean_scale = 1.0 / (3.0 * s);  // (h/3) / dt
    out.gv[i] = -mean_scale * acc_v;
    out.gn[i] = -mean_scale * acc_n;
  }

  out.traj.times.resize(static_cast<size_t>(u.N) + 1);
  out.traj.states.resize(static_cast<size_t>(u.N) + 1);
  out.adj.times.resize(static_cast<size_t>(u.N) + 1);
  out.adj.costates.resize(static_cast<size_t>(u.N) + 1);
  for (int i = 0; i <= u.N; ++i) {
    const size_t idx = static_cast<size_t>(i) * s;
    out.traj.times[i] = i * u.dt();
    out.traj.states[i] = BlochVector::from(xs[idx]);
    out.adj.times[i] = i * u.dt();
    out.adj.costates[i] = AdjointVector::from(ps[idx]);
  }
  out.J = cost(out.traj, problem.x_target);
  return out;
}

std::pair<double, double> line_search_beta(const ControlGrid& u,
                                           const ControlGrid& u_pr,
                                           const FixedTimeProblem& problem,
                                           const GpmSettings& settings) {
  const int s = even_substeps(problem.substeps);
  auto f = [&](double beta) {
    const auto traj = integrate_forward(problem.x0, mix_controls(u, u_pr, beta),
                                        problem.params, s);
    return cost(traj, problem.x_target);
  };

  const int grid = std::max(2, settings.beta_grid_size);
  double best_beta = 1.0 / grid;
  double best_J = std::numeric_limits<double>::infinity();
  int best_j = 1;
  for (int j = 1; j <= grid; ++j) {
    const double beta = static_cast<double>(j) / grid;
    const double J = f(beta);
    if (J < best_J) {
      best_J = J;
      best_beta = beta;
      best_j = j;
    }
  }

  // Golden-section refinement inside the bracket around the best grid point.
  double lo = static_cast<double>(best_j - 1) / grid;  // interior points stay > 0
  double hi = std::min(1.0, static_cast<double>(best_j + 1) / grid);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - gr * (hi - lo);
  double d = lo + gr * (hi - lo);
  double fc = f(c), fd = f(d);
  auto consider = [&](double beta, double J) {
    if (J < best_J) {
      best_J = J;
      best_beta = beta;
    }
  };
  consider(c, fc);
  consider(d, fd);
  for (int it = 0; it < settings.beta_refine_iters; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = f(c);
      consider(c, fc);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = f(d);
      consider(d, fd);
    }
  }
  return {best_beta, best_J};
}

OptResult gpm_iterate(const ControlGrid& u0, const FixedTimeProblem& problem,
                      const GpmSettings& settings) {
  FixedTimeProblem pb = problem;
  pb.substeps = even_substeps(problem.substeps);

  OptResult res;
  ControlGrid u = project_controls(u0, pb.bounds);
  double J = cost(integrate_forward(pb.x0, u, pb.params, pb.substeps),
                  pb.x_target);
  res.J_history.push_back(J);
  res.iter_log.push_back({0, J, 0.0, true});

  Termination term = Termination::MaxIters;
  for (int k = 1; k <= settings.max_iters; ++k) {
    const GradientEval g = compute_gradient(u, pb);
    ControlGrid candidate = u;
    for (int i = 0; i < u.N; ++i) {
      candidate.v[i] -= settings.alpha * g.gv[i];
      candidate.n[i] -= settings.alpha * g.gn[i];
    }
    const ControlGrid u_pr = project_controls(candidate, pb.bounds);
    const auto [beta, J_beta] = line_search_beta(u, u_pr, pb, settings);
    if (!(J_beta < J)) {
      res.iter_log.push_back({k, J, beta, false});
      term = Termination::NoImprovingBeta;
      break;
    }
    u = mix_controls(u, u_pr, beta);
    // Convex combination of feasible controls; clip floating-point dust and
    // verify feasibility.
    u = project_controls(u, pb.bounds);
    const double J_prev = J;
    J = J_beta;
    res.J_history.push_back(J);
    res.iter_log.push_back({k, J, beta, true});
    if (std::abs(J - J_prev) < settings.epsilon) {
      term = Termination::EpsilonReached;
      break;
    }
  }
  res.termination = term;
  res.iterations = static_cast<int>(res.J_history.size()) - 1;
  res.u_final = u;
  res.final_trajectory =
      integrate_forward(pb.x0, u, pb.params, pb.substeps);
  return res;
}

}  // namespace qoc
