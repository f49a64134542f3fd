#include "qoc/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qoc/quantum_state.hpp"

namespace qoc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

double get_num(const json& j, const std::string& key, const std::string& path,
               double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number())
    throw ConfigError("config field " + path + ": expected a number");
  return j.at(key).get<double>();
}

int get_int(const json& j, const std::string& key, const std::string& path,
            int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer())
    throw ConfigError("config field " + path + ": expected an integer");
  return j.at(key).get<int>();
}

bool get_bool(const json& j, const std::string& key, const std::string& path,
              bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean())
    throw ConfigError("config field " + path + ": expected a boolean");
  return j.at(key).get<bool>();
}

// A state is either a Bloch 3-vector [x1, x2, x3] or a density matrix as
// four [re, im] pairs in row-major order.
BlochVector parse_state(const json& j, const std::string& path) {
  if (!j.is_array())
    throw ConfigError("config field " + path +
                      ": expected a Bloch 3-vector or 4 [re, im] pairs");
  if (j.size() == 3 && j[0].is_number()) {
    BlochVector x{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
    if (!x.in_ball())
      throw ConfigError("config field " + path +
                        ": Bloch vector outside the unit ball (|x|^2 = " +
                        fmt(x.norm2()) + ")");
    return x;
  }
  if (j.size() == 4 && j[0].is_array()) {
    Mat2 m;
    for (size_t i = 0; i < 4; ++i) {
      if (!j[i].is_array() || j[i].size() != 2 || !j[i][0].is_number())
        throw ConfigError("config field " + path +
                          ": density entries must be [re, im] pairs");
      m[i] = Complex(j[i][0].get<double>(), j[i][1].get<double>());
    }
    try {
      return bloch_from_density(DensityMatrix(m));
    } catch (const InvalidDensity& e) {
      throw ConfigError("config field " + path + ": " + e.what());
    }
  }
  throw ConfigError("config field " + path +
                    ": expected a Bloch 3-vector or 4 [re, im] pairs");
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }

  RunConfig cfg;
  const json sys = j.value("system", json::object());
  cfg.system.omega = get_num(sys, "omega", "system.omega", cfg.system.omega);
  cfg.system.gamma = get_num(sys, "gamma", "system.gamma", cfg.system.gamma);
  cfg.system.kappa = get_num(sys, "kappa", "system.kappa", cfg.system.kappa);
  if (cfg.system.omega <= 0.0)
    throw ConfigError("config field system.omega: must be > 0");
  if (cfg.system.gamma <= 0.0)
    throw ConfigError("config field system.gamma: must be > 0");
  if (cfg.system.kappa == 0.0)
    throw ConfigError("config field system.kappa: must be nonzero");

  const json bnd = j.value("bounds", json::object());
  cfg.bounds.v_min = get_num(bnd, "v_min", "bounds.v_min", cfg.bounds.v_min);
  cfg.bounds.v_max = get_num(bnd, "v_max", "bounds.v_max", cfg.bounds.v_max);
  cfg.bounds.n_max = get_num(bnd, "n_max", "bounds.n_max", cfg.bounds.n_max);
  if (cfg.bounds.v_min > cfg.bounds.v_max)
    throw ConfigError("config field bounds.v_min: exceeds bounds.v_max");
  if (cfg.bounds.n_max < 0.0)
    throw ConfigError("config field bounds.n_max: must be >= 0");

  if (j.contains("initial_state"))
    cfg.initial_state = parse_state(j.at("initial_state"), "initial_state");
  if (j.contains("target_state"))
    cfg.target_state = parse_state(j.at("target_state"), "target_state");

  const json grid = j.value("grid", json::object());
  cfg.T = get_num(grid, "T", "grid.T", cfg.T);
  cfg.N = get_int(grid, "N", "grid.N", 0);
  cfg.substeps = get_int(grid, "substeps", "grid.substeps", 0);
  if (cfg.T <= 0.0) throw ConfigError("config field grid.T: must be > 0");
  if (cfg.N < 0) throw ConfigError("config field grid.N: must be >= 1");
  if (cfg.substeps < 0)
    throw ConfigError("config field grid.substeps: must be >= 1");

  const json gpm = j.value("gpm", json::object());
  cfg.gpm.alpha = get_num(gpm, "alpha", "gpm.alpha", cfg.gpm.alpha);
  cfg.gpm.epsilon = get_num(gpm, "epsilon", "gpm.epsilon", cfg.gpm.epsilon);
  cfg.gpm.max_iters =
      get_int(gpm, "max_iters", "gpm.max_iters", cfg.gpm.max_iters);
  cfg.gpm.beta_grid_size =
      get_int(gpm, "beta_grid_size", "gpm.beta_grid_size",
              cfg.gpm.beta_grid_size);
  cfg.gpm.beta_refine_iters =
      get_int(gpm, "beta_refine_iters", "gpm.beta_refine_iters",
              cfg.gpm.beta_refine_iters);
  cfg.gpm.v_seed = get_num(gpm, "v_seed", "gpm.v_seed", cfg.gpm.v_seed);
  if (cfg.gpm.alpha <= 0.0)
    throw ConfigError("config field gpm.alpha: must be > 0");
  if (cfg.gpm.epsilon <= 0.0)
    throw ConfigError("config field gpm.epsilon: must be > 0");
  if (cfg.gpm.beta_grid_size < 2)
    throw ConfigError("config field gpm.beta_grid_size: must be >= 2");
  if (cfg.gpm.beta_refine_iters < 0)
    throw ConfigError("config field gpm.beta_refine_iters: must be >= 0");

  const json sw = j.value("sweep", json::object());
  cfg.sweep.T_hi = get_num(sw, "T_hi", "sweep.T_hi", cfg.sweep.T_hi);
  cfg.sweep.T_lo = get_num(sw, "T_lo", "sweep.T_lo", cfg.sweep.T_lo);
  cfg.sweep.reach_tol =
      get_num(sw, "reach_tol", "sweep.reach_tol", cfg.sweep.reach_tol);
  cfg.sweep.bisect_iters =
      get_int(sw, "bisect_iters", "sweep.bisect_iters",
              cfg.sweep.bisect_iters);
  cfg.sweep.warm_start =
      get_bool(sw, "warm_start", "sweep.warm_start", cfg.sweep.warm_start);
  if (sw.contains("grid")) {
    if (!sw.at("grid").is_array())
      throw ConfigError("config field sweep.grid: expected an array of times");
    for (const auto& t : sw.at("grid")) {
      if (!t.is_number() || t.get<double>() <= 0.0)
        throw ConfigError("config field sweep.grid: times must be > 0");
      cfg.sweep_grid.push_back(t.get<double>());
    }
  }
  if (cfg.sweep.T_lo < 0.0)
    throw ConfigError("config field sweep.T_lo: must be >= 0");
  if (cfg.sweep.T_lo >= cfg.sweep.T_hi)
    throw ConfigError("config field sweep.T_lo: must be < sweep.T_hi");
  if (cfg.sweep.reach_tol <= 0.0)
    throw ConfigError("config field sweep.reach_tol: must be > 0");
  if (cfg.sweep.bisect_iters < 0)
    throw ConfigError("config field sweep.bisect_iters: must be >= 0");

  const json sim = j.value("simulate", json::object());
  cfg.sim_v = get_num(sim, "v", "simulate.v", 0.0);
  cfg.sim_n = get_num(sim, "n", "simulate.n", 0.0);
  if (sim.contains("controls_csv"))
    cfg.control_csv = sim.at("controls_csv").get<std::string>();

  cfg.output_dir = j.value("output_dir", std::string());
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

FixedTimeProblem make_problem(const RunConfig& cfg) {
  FixedTimeProblem pb;
  pb.params = cfg.system;
  pb.bounds = cfg.bounds;
  pb.x0 = cfg.initial_state;
  pb.x_target = cfg.target_state;
  pb.T = cfg.T;
  pb.N = cfg.N > 0 ? cfg.N : default_intervals(cfg.T);
  if (cfg.substeps > 0)
    pb.substeps = cfg.substeps + (cfg.substeps % 2);  // Simpson needs even
  else
    pb.substeps = default_substeps(pb.T, pb.N);
  return pb;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const ControlGrid& u) {
  std::ofstream out(path);
  out << "t,x1,x2,x3,v,n\n";
  const size_t rows = traj.times.size();
  for (size_t i = 0; i < rows; ++i) {
    // Controls apply to the interval starting at t; final row repeats.
    const size_t ci = i < static_cast<size_t>(u.N) ? i : u.N - 1;
    out << fmt(traj.times[i]) << ',' << fmt(traj.states[i].x1) << ','
        << fmt(traj.states[i].x2) << ',' << fmt(traj.states[i].x3) << ','
        << fmt(u.v[ci]) << ',' << fmt(u.n[ci]) << '\n';
  }
}

void write_control_csv(const std::string& path, const ControlGrid& u) {
  std::ofstream out(path);
  out << "t,v,n\n";
  for (int i = 0; i <= u.N; ++i) {
    const int ci = i < u.N ? i : u.N - 1;
    out << fmt(i < u.N ? i * u.dt() : u.T) << ',' << fmt(u.v[ci]) << ','
        << fmt(u.n[ci]) << '\n';
  }
}

void write_convergence_csv(const std::string& path,
                           const std::vector<IterRecord>& log) {
  std::ofstream out(path);
  out << "iter,J,beta,step_accepted\n";
  for (const auto& r : log)
    out << r.iter << ',' << fmt(r.J) << ',' << fmt(r.beta) << ','
        << (r.accepted ? 1 : 0) << '\n';
}

ControlGrid read_control_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open control CSV: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw ConfigError("control CSV is empty: " + path);

  // Locate t, v, n columns; accepts both `t,v,n` and `t,x1,x2,x3,v,n`.
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  int ti = -1, vi = -1, ni = -1;
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "t") ti = static_cast<int>(i);
    if (header[i] == "v") vi = static_cast<int>(i);
    if (header[i] == "n") ni = static_cast<int>(i);
  }
  if (ti < 0 || vi < 0 || ni < 0)
    throw ConfigError("control CSV " + path +
                      ": header must contain columns t, v, n");

  std::vector<double> t, v, n;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError("control CSV " + path + ": line " +
                          std::to_string(lineno) + ": bad number '" + cell +
                          "'");
      }
    }
    if (row.size() != header.size())
      throw ConfigError("control CSV " + path + ": line " +
                        std::to_string(lineno) + ": wrong column count");
    t.push_back(row[ti]);
    v.push_back(row[vi]);
    n.push_back(row[ni]);
  }
  if (t.size() < 2)
    throw ConfigError("control CSV " + path + ": needs at least 2 rows");

  ControlGrid u;
  u.N = static_cast<int>(t.size()) - 1;
  u.T = t.back();
  if (u.T <= 0.0)
    throw ConfigError("control CSV " + path + ": final time must be > 0");
  u.v.assign(v.begin(), v.end() - 1);
  u.n.assign(n.begin(), n.end() - 1);
  return u;
}

namespace {

json params_json(const SystemParams& p) {
  return {{"omega", p.omega}, {"gamma", p.gamma}, {"kappa", p.kappa}};
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  out << j.dump(2) << '\n';
}

void ensure_output_dir(const RunConfig& cfg) {
  if (cfg.output_dir.empty())
    throw ConfigError("output_dir is required for file-emitting commands");
  fs::create_directories(cfg.output_dir);
}

std::string join(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.output_dir) / name).string();
}

std::string time_tag(double T) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", T);
  return buf;
}

}  // namespace

SimulateSummary run_simulate(const RunConfig& cfg) {
  ensure_output_dir(cfg);
  const FixedTimeProblem pb = make_problem(cfg);
  ControlGrid u;
  if (!cfg.control_csv.empty()) {
    u = read_control_csv(cfg.control_csv);
  } else {
    u = ControlGrid::constant(pb.T, pb.N, cfg.sim_v, cfg.sim_n);
  }
  const int substeps = cfg.substeps > 0 ? cfg.substeps + (cfg.substeps % 2)
                                        : default_substeps(u.T, u.N);
  const Trajectory traj =
      integrate_forward(cfg.initial_state, u, cfg.system, substeps);

  SimulateSummary sum;
  sum.J_final = cost(traj, cfg.target_state);
  for (const auto& x : traj.states)
    sum.norm_max = std::max(sum.norm_max, std::sqrt(x.norm2()));

  write_trajectory_csv(join(cfg, "trajectory.csv"), traj, u);
  write_json(join(cfg, "summary.json"),
             {{"J_final", sum.J_final},
              {"norm_max", sum.norm_max},
              {"params", params_json(cfg.system)},
              {"T", u.T},
              {"N", u.N},
              {"substeps", substeps}});
  return sum;
}

OptimizeSummary run_optimize(const RunConfig& cfg) {
  ensure_output_dir(cfg);
  const FixedTimeProblem pb = make_problem(cfg);
  const ControlGrid u0 = seed_control(pb, cfg.gpm.v_seed);
  const OptResult res = gpm_iterate(u0, pb, cfg.gpm);

  write_control_csv(join(cfg, "control.csv"), res.u_final);
  write_trajectory_csv(join(cfg, "trajectory.csv"), res.final_trajectory,
                       res.u_final);
  write_convergence_csv(join(cfg, "convergence.csv"), res.iter_log);
  write_json(join(cfg, "summary.json"),
             {{"J_final", res.J_history.back()},
              {"iterations", res.iterations},
              {"termination", to_string(res.termination)},
              {"params", params_json(cfg.system)},
              {"T", pb.T},
              {"N", pb.N},
              {"substeps", pb.substeps}});
  return {res.J_history.back(), res.iterations, res.termination};
}

SweepResult run_sweep(const RunConfig& cfg) {
  ensure_output_dir(cfg);
  FixedTimeProblem tmpl = make_problem(cfg);

  SweepResult res;
  if (!cfg.sweep_grid.empty()) {
    res.records = solve_time_grid(tmpl, cfg.sweep_grid, cfg.gpm);
    res.bracket_lo = 0.0;
    res.bracket_hi = 0.0;
    res.t_min_estimate = 0.0;
    for (const auto& r : res.records)
      if (r.J_final <= cfg.sweep.reach_tol &&
          (res.t_min_estimate == 0.0 || r.T < res.t_min_estimate))
        res.t_min_estimate = r.T;
  } else {
    res = find_minimal_time(tmpl, cfg.sweep, cfg.gpm);
  }

  json records = json::array();
  for (const auto& r : res.records) {
    const std::string control_file = "control_T" + time_tag(r.T) + ".csv";
    write_control_csv(join(cfg, control_file), r.u_final);
    const Trajectory traj =
        integrate_forward(cfg.initial_state, r.u_final, cfg.system,
                          tmpl.substeps);
    write_trajectory_csv(join(cfg, "trajectory_T" + time_tag(r.T) + ".csv"),
                         traj, r.u_final);
    records.push_back({{"T", r.T},
                       {"J_final", r.J_final},
                       {"iterations", r.iterations},
                       {"control_file", control_file}});
  }
  json report = {{"t_min_estimate", res.t_min_estimate},
                 {"records", records},
                 {"reach_tol", cfg.sweep.reach_tol},
                 {"params", params_json(cfg.system)}};
  if (cfg.sweep_grid.empty()) {
    report["mode"] = "bisect";
    report["bracket"] = {res.bracket_lo, res.bracket_hi};
    // The estimate is relative to the optimizer budget (local first-order
    // method); it upper-bounds the true minimal time.
    report["estimate_kind"] = "upper_bound";
  } else {
    report["mode"] = "grid";
  }
  write_json(join(cfg, "sweep_report.json"), report);
  return res;
}

double run_grad_check(const RunConfig& cfg, double fd_step) {
  const FixedTimeProblem pb = make_problem(cfg);
  ControlGrid u = cfg.control_csv.empty()
                      ? seed_control(pb, cfg.gpm.v_seed)
                      : project_controls(read_control_csv(cfg.control_csv),
                                         pb.bounds);
  const GradientEval g = compute_gradient(u, pb);
  const double dt = u.dt();
  auto J_of = [&](const ControlGrid& uu) {
    return cost(integrate_forward(pb.x0, uu, pb.params, pb.substeps),
                pb.x_target);
  };
  double worst = 0.0;
  for (int i = 0; i < u.N; ++i) {
    for (int comp = 0; comp < 2; ++comp) {
      ControlGrid up = u, um = u;
      double adj;
      if (comp == 0) {
        up.v[i] += fd_step;
        um.v[i] -= fd_step;
        adj = g.gv[i] * dt;
      } else {
        up.n[i] += fd_step;
        um.n[i] -= fd_step;
        adj = g.gn[i] * dt;
      }
      const double fd = (J_of(up) - J_of(um)) / (2.0 * fd_step);
      if (std::abs(fd) > 1e-10)
        worst = std::max(worst, std::abs(adj - fd) / std::abs(fd));
    }
  }
  return worst;
}

}  // namespace qoc
