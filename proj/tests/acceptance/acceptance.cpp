// Acceptance suite: one pass/fail line per criterion.
// Usage: acceptance [criterion-number ...]; no arguments runs all.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "qoc/gpm.hpp"
#include "qoc/integrator.hpp"
#include "qoc/minimal_time.hpp"
#include "qoc/quantum_state.hpp"

using namespace qoc;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", x);
  return buf;
}

BlochVector random_ball_point(std::mt19937& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  while (true) {
    BlochVector x{d(rng), d(rng), d(rng)};
    if (x.norm2() <= 1.0) return x;
  }
}

FixedTimeProblem reference_problem(double T) {
  FixedTimeProblem pb;  // defaults carry the reference parameter set
  pb.x0 = {0.0, 0.0, -1.0};
  pb.x_target = {0.0, 0.0, 0.5};
  pb.T = T;
  pb.N = default_intervals(T);
  pb.substeps = default_substeps(pb.T, pb.N);
  return pb;
}

GpmSettings reference_settings() {
  GpmSettings st;  // alpha = 1e3, epsilon = 1e-9
  st.max_iters = 2000;
  return st;
}

// Criterion 1: density-level and Bloch-level right-hand sides agree.
Check criterion1() {
  Check c;
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> dv(-10.0, 10.0);
  std::uniform_real_distribution<double> dn(0.0, 1.0);
  const SystemParams prm;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const BlochVector x = random_ball_point(rng);
    const double v = dv(rng), n = dn(rng);
    const Vec3 img =
        bloch_image(master_rhs_density(density_from_bloch(x), v, n, prm));
    const Vec3 ref = bloch_rhs(x, v, n, prm);
    for (int i = 0; i < 3; ++i)
      worst = std::max(worst, std::abs(img[i] - ref[i]));
  }
  c.require(worst <= 1e-10, "max mismatch " + num(worst) + " > 1e-10");
  c.note("max component mismatch " + num(worst));
  return c;
}

// Criterion 2: integrator accuracy and observed order on free dynamics.
Check criterion2() {
  Check c;
  const SystemParams prm;
  const double T = 400.0;
  const int N = default_intervals(T);
  const auto u = ControlGrid::constant(T, N, 0.0, 0.0);

  auto max_err = [&](int substeps) {
    const Vec3 x0{std::sqrt(0.5), 0.0, std::sqrt(0.5)};
    const auto traj =
        integrate_forward(BlochVector::from(x0), u, prm, substeps);
    double worst = 0.0;
    for (size_t i = 0; i < traj.times.size(); ++i) {
      const double t = traj.times[i];
      const std::complex<double> z =
          std::complex<double>(x0[0], x0[1]) *
          std::exp(std::complex<double>(-0.5 * prm.gamma, -prm.omega) * t);
      const Vec3 ref{z.real(), z.imag(),
                     1.0 + (x0[2] - 1.0) * std::exp(-prm.gamma * t)};
      worst = std::max(worst, norm(traj.states[i].vec() - ref));
    }
    return worst;
  };

  const double err_default = max_err(default_substeps(T, N));
  c.require(err_default <= 1e-8,
            "default-step error " + num(err_default) + " > 1e-8");
  c.note("default-step error " + num(err_default));

  // Order estimate on a coarser step, inside the asymptotic regime.
  const double e1 = max_err(8);
  const double e2 = max_err(16);
  const double order = std::log2(e1 / e2);
  c.require(order >= 3.5 && order <= 4.5,
            "observed order " + num(order) + " outside [3.5, 4.5]");
  c.note("observed order " + num(order));
  return c;
}

// Criterion 3: adjoint gradient vs componentwise central differences.
Check criterion3() {
  Check c;
  std::mt19937 rng(303);
  FixedTimeProblem pb = reference_problem(70.0);
  pb.N = 200;
  pb.substeps = default_substeps(pb.T, pb.N);
  std::uniform_real_distribution<double> dv(pb.bounds.v_min, pb.bounds.v_max);
  std::uniform_real_distribution<double> dn(0.0, pb.bounds.n_max);

  // Step balances truncation against roundoff: FD noise ~ eps * J / (2h)
  // must stay small relative to the 1e-10 magnitude cutoff below.
  const double fd_step = 1e-3;
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    ControlGrid u = ControlGrid::constant(pb.T, pb.N, 0.0, 0.0);
    for (int i = 0; i < pb.N; ++i) {
      u.v[i] = dv(rng);
      u.n[i] = dn(rng);
    }
    const GradientEval g = compute_gradient(u, pb);
    auto J_of = [&](const ControlGrid& uu) {
      return cost(integrate_forward(pb.x0, uu, pb.params, pb.substeps),
                  pb.x_target);
    };
    for (int i = 0; i < pb.N; ++i) {
      for (int comp = 0; comp < 2; ++comp) {
        ControlGrid up = u, um = u;
        double adj;
        if (comp == 0) {
          up.v[i] += fd_step;
          um.v[i] -= fd_step;
          adj = g.gv[i] * u.dt();
        } else {
          up.n[i] += fd_step;
          um.n[i] -= fd_step;
          adj = g.gn[i] * u.dt();
        }
        const double fd = (J_of(up) - J_of(um)) / (2.0 * fd_step);
        if (std::abs(fd) > 1e-10)
          worst = std::max(worst, std::abs(adj - fd) / std::abs(fd));
      }
    }
  }
  c.require(worst <= 1e-4, "max relative error " + num(worst) + " > 1e-4");
  c.note("max relative error " + num(worst));
  return c;
}

OptResult solve_reference(double T, const GpmSettings& st) {
  const FixedTimeProblem pb = reference_problem(T);
  return gpm_iterate(seed_control(pb, st.v_seed), pb, st);
}

// Criterion 4: feasibility at the three advertised horizons.
Check criterion4() {
  Check c;
  const GpmSettings st = reference_settings();
  for (double T : {400.0, 200.0, 70.0}) {
    const OptResult res = solve_reference(T, st);
    const double J = res.J_history.back();
    c.require(J <= 1e-3,
              "T = " + num(T) + ": J = " + num(J) + " > 1e-3");
    c.note("T = " + num(T) + ": J = " + num(J) + " in " +
           std::to_string(res.iterations) + " iters");
  }
  if (!c.ok)
    c.note("note: v cancels in d|x|^2/dt, so |x(t)| >= (4/3)e^{-3 gamma t} "
           "- 1/3; shrinking |x| from 1 to 0.5 needs t >= ln(1.6)/(3 gamma) "
           "~ 78.3, hence J <= 1e-3 is unreachable at T = 70");
  return c;
}

// Criterion 5: T = 70 convergence history is monotone and spans >= 1e3.
Check criterion5() {
  Check c;
  const OptResult res = solve_reference(70.0, reference_settings());
  bool monotone = true;
  for (size_t k = 1; k < res.J_history.size(); ++k)
    if (res.J_history[k] > res.J_history[k - 1]) monotone = false;
  c.require(monotone, "J history not monotone non-increasing");
  const double span = res.J_history.front() / res.J_history.back();
  c.require(span >= 1e3, "span " + num(span) + " < 1e3");
  c.note("span " + num(span) + " over " + std::to_string(res.iterations) +
         " iters");
  if (!c.ok)
    c.note("note: the norm-shrinkage bound caps the attainable J at T = 70 "
           "near 1.2e-2 (J(0) ~ 1.5), so a 1e3 span is unreachable here");
  return c;
}

// Criterion 6: pure state (0,-1,0) to the completely mixed state via sweep.
Check criterion6() {
  Check c;
  FixedTimeProblem tmpl = reference_problem(400.0);
  tmpl.x0 = {0.0, -1.0, 0.0};
  tmpl.x_target = {0.0, 0.0, 0.0};
  SweepSettings sw;
  sw.T_hi = 400.0;
  sw.T_lo = 0.0;
  sw.reach_tol = 1e-3;
  sw.bisect_iters = 3;
  GpmSettings st = reference_settings();
  st.max_iters = 300;  // keeps infeasible bisection legs inside the budget
  try {
    const SweepResult res = find_minimal_time(tmpl, sw, st);
    double bestJ = 1e300, bestT = 0.0;
    for (const auto& r : res.records)
      if (r.J_final < bestJ) {
        bestJ = r.J_final;
        bestT = r.T;
      }
    c.require(bestJ <= 1e-3, "best J " + num(bestJ) + " > 1e-3");
    c.note("best J " + num(bestJ) + " at T = " + num(bestT) + ", bracket [" +
           num(res.bracket_lo) + ", " + num(res.bracket_hi) + "]");
  } catch (const InfeasibleAtTHi& e) {
    c.require(false, std::string("infeasible at T_hi: ") + e.what());
  }
  return c;
}

// Criterion 7: invariant bundle.
Check criterion7() {
  Check c;
  std::mt19937 rng(707);
  const SystemParams prm;
  const ControlBounds bounds;
  std::uniform_real_distribution<double> dv(bounds.v_min, bounds.v_max);
  std::uniform_real_distribution<double> dn(0.0, bounds.n_max);

  // Boundary dissipativity at 100 random sphere points.
  double worst_diss = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    BlochVector x = random_ball_point(rng);
    const double r = std::sqrt(x.norm2());
    x = {x.x1 / r, x.x2 / r, x.x3 / r};
    const double v = dv(rng), n = dn(rng);
    const double radial = dot(x.vec(), bloch_rhs(x, v, n, prm));
    const double formula = -0.5 * prm.gamma * (1.0 - x.x3) * (1.0 - x.x3) -
                           prm.gamma * n * (1.0 + x.x3 * x.x3);
    worst_diss = std::max(worst_diss, std::abs(radial - formula));
  }
  c.require(worst_diss <= 1e-12,
            "dissipativity mismatch " + num(worst_diss) + " > 1e-12");

  // Ball membership along trajectories under random admissible controls.
  double worst_norm = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    ControlGrid u = ControlGrid::constant(70.0, 200, 0.0, 0.0);
    for (int i = 0; i < u.N; ++i) {
      u.v[i] = dv(rng);
      u.n[i] = dn(rng);
    }
    const auto traj = integrate_forward(random_ball_point(rng), u, prm,
                                        default_substeps(70.0, 200));
    for (const auto& x : traj.states)
      worst_norm = std::max(worst_norm, x.norm2());
  }
  c.require(worst_norm <= 1.0 + 1e-6,
            "|x|^2 reached " + num(worst_norm) + " > 1 + 1e-6");

  // Projection idempotence and non-expansiveness on sampled pairs.
  std::uniform_real_distribution<double> wild(-40.0, 40.0);
  for (int trial = 0; trial < 50; ++trial) {
    ControlGrid a = ControlGrid::constant(1.0, 8, 0.0, 0.0);
    ControlGrid b = a;
    for (int i = 0; i < a.N; ++i) {
      a.v[i] = wild(rng);
      a.n[i] = wild(rng);
      b.v[i] = wild(rng);
      b.n[i] = wild(rng);
    }
    const ControlGrid pa = project_controls(a, bounds);
    const ControlGrid pb2 = project_controls(b, bounds);
    const ControlGrid ppa = project_controls(pa, bounds);
    double d_pp = 0.0, d_ab = 0.0, d_idem = 0.0;
    for (int i = 0; i < a.N; ++i) {
      d_idem += std::abs(ppa.v[i] - pa.v[i]) + std::abs(ppa.n[i] - pa.n[i]);
      d_pp += (pa.v[i] - pb2.v[i]) * (pa.v[i] - pb2.v[i]) +
              (pa.n[i] - pb2.n[i]) * (pa.n[i] - pb2.n[i]);
      d_ab += (a.v[i] - b.v[i]) * (a.v[i] - b.v[i]) +
              (a.n[i] - b.n[i]) * (a.n[i] - b.n[i]);
      c.require(bounds.contains(pa.v[i], pa.n[i]), "projection left Q");
    }
    c.require(d_idem == 0.0, "projection not idempotent");
    c.require(d_pp <= d_ab + 1e-12, "projection expanded a pair");
  }

  // GPM run: feasible iterates and monotone history.
  FixedTimeProblem pb = reference_problem(70.0);
  GpmSettings st;
  st.max_iters = 40;
  const OptResult res = gpm_iterate(seed_control(pb, st.v_seed), pb, st);
  for (size_t k = 1; k < res.J_history.size(); ++k)
    c.require(res.J_history[k] <= res.J_history[k - 1],
              "J history increased");
  for (int i = 0; i < res.u_final.N; ++i)
    c.require(bounds.contains(res.u_final.v[i], res.u_final.n[i]),
              "final control left Q");
  for (const auto& x : res.final_trajectory.states)
    c.require(x.norm2() <= 1.0 + 1e-6, "optimized trajectory left the ball");

  c.note("dissipativity mismatch " + num(worst_diss) + ", max |x|^2 " +
         num(worst_norm));
  return c;
}

// Criterion 8: minimal-time bracket contract on the Figure 1 problem.
Check criterion8() {
  Check c;
  const FixedTimeProblem tmpl = reference_problem(400.0);
  SweepSettings sw;
  sw.T_hi = 400.0;
  sw.T_lo = 0.0;
  sw.reach_tol = 1e-3;
  sw.bisect_iters = 4;
  const GpmSettings st = reference_settings();
  try {
    const SweepResult res = find_minimal_time(tmpl, sw, st);
    const double width = res.bracket_hi - res.bracket_lo;
    const double budget =
        (sw.T_hi - sw.T_lo) / std::pow(2.0, sw.bisect_iters);
    c.require(width <= budget + 1e-9,
              "bracket width " + num(width) + " > " + num(budget));

    // Upper end must be feasible on re-solve from the stored control.
    bool checked = false;
    for (const auto& rec : res.records) {
      if (rec.T != res.t_min_estimate) continue;
      const FixedTimeProblem p = problem_at_time(tmpl, rec.T);
      const OptResult re = gpm_iterate(rec.u_final, p, st);
      c.require(re.J_history.back() <= sw.reach_tol,
                "re-solve at bracket top gave J = " +
                    num(re.J_history.back()));
      checked = true;
    }
    c.require(checked, "no record at the bracket top");
    c.note("bracket [" + num(res.bracket_lo) + ", " + num(res.bracket_hi) +
           "]");
  } catch (const InfeasibleAtTHi& e) {
    c.require(false, std::string("infeasible at T_hi: ") + e.what());
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::pair<std::string, std::function<Check()>>> crits{
      {1, {"oracle equivalence (master equation vs Bloch RHS)", criterion1}},
      {2, {"integrator accuracy and RK4 order", criterion2}},
      {3, {"adjoint gradient vs finite differences", criterion3}},
      {4, {"state transfer feasibility at T = 400, 200, 70", criterion4}},
      {5, {"monotone convergence spanning 3 decades (T = 70)", criterion5}},
      {6, {"pure-to-mixed transfer via minimal-time sweep", criterion6}},
      {7, {"invariant suite", criterion7}},
      {8, {"minimal-time bracket contract", criterion8}},
  };

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (const auto& [id, _] : crits) selected.push_back(id);

  int failures = 0;
  for (int id : selected) {
    const auto it = crits.find(id);
    if (it == crits.end()) {
      std::fprintf(stderr, "unknown criterion %d\n", id);
      return 64;
    }
    const auto start = std::chrono::steady_clock::now();
    const Check c = it->second.second();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] criterion %d: %s (%.1fs)%s%s\n",
                c.ok ? "PASS" : "FAIL", id, it->second.first.c_str(), secs,
                c.detail.empty() ? "" : " -- ", c.detail.c_str());
    std::fflush(stdout);
    if (!c.ok) ++failures;
  }
  return failures;
}
