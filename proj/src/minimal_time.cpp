#include "qoc/minimal_time.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qoc {

FixedTimeProblem problem_at_time(const FixedTimeProblem& tmpl, double T) {
  FixedTimeProblem p = tmpl;
  p.T = T;
  p.N = std::max(1, static_cast<int>(std::lround(tmpl.N * T / tmpl.T)));
  return p;
}

ControlGrid resample_nearest(const ControlGrid& src, double T, int N) {
  ControlGrid out;
  out.T = T;
  out.N = N;
  out.v.resize(static_cast<size_t>(N));
  out.n.resize(static_cast<size_t>(N));
  for (int i = 0; i < N; ++i) {
    const double t_center = (i + 0.5) * T / N;
    int j = static_cast<int>(t_center / src.dt());
    j = std::clamp(j, 0, src.N - 1);
    out.v[i] = src.v[j];
    out.n[i] = src.n[j];
  }
  return out;
}

namespace {

TimeRecord solve_at(const FixedTimeProblem& tmpl, double T,
                    const GpmSettings& gpm, const ControlGrid* warm) {
  const FixedTimeProblem pb = problem_at_time(tmpl, T);
  ControlGrid u0 = warm ? project_controls(resample_nearest(*warm, pb.T, pb.N),
                                           pb.bounds)
                        : seed_control(pb, gpm.v_seed);
  const OptResult r = gpm_iterate(u0, pb, gpm);
  return {T, r.J_history.back(), r.iterations, r.u_final};
}

}  // namespace

SweepResult find_minimal_time(const FixedTimeProblem& tmpl,
                              const SweepSettings& sweep,
                              const GpmSettings& gpm) {
  SweepResult res;
  TimeRecord hi_rec = solve_at(tmpl, sweep.T_hi, gpm, nullptr);
  res.records.push_back(hi_rec);
  if (hi_rec.J_final > sweep.reach_tol) {
    std::ostringstream msg;
    msg << "fixed-time solve at T_hi = " << sweep.T_hi
        << " reached only J = " << hi_rec.J_final << " > reach_tol = "
        << sweep.reach_tol
        << "; raise T_hi, loosen bounds, or enlarge the optimizer budget";
    throw InfeasibleAtTHi(msg.str());
  }

  double lo = sweep.T_lo;
  double hi = sweep.T_hi;
  ControlGrid best_u = hi_rec.u_final;
  for (int i = 0; i < sweep.bisect_iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    const TimeRecord rec =
        solve_at(tmpl, mid, gpm, sweep.warm_start ? &best_u : nullptr);
    res.records.push_back(rec);
    if (rec.J_final <= sweep.reach_tol) {
      hi = mid;
      best_u = rec.u_final;
    } else {
      lo = mid;
    }
  }
  res.bracket_lo = lo;
  res.bracket_hi = hi;
  res.t_min_estimate = hi;
  return res;
}

std::vector<TimeRecord> solve_time_grid(const FixedTimeProblem& tmpl,
                                        const std::vector<double>& times,
                                        const GpmSettings& gpm) {
  std::vector<TimeRecord> records;
  records.reserve(times.size());
  for (double T : times) records.push_back(solve_at(tmpl, T, gpm, nullptr));
  return records;
}

}  // namespace qoc
