// Command-line front end: simulate, optimize, sweep, grad-check.
//
// Exit codes: 0 success, 2 config error, 3 infeasible at T_hi,
// 4 numerical failure (NaN/Inf during integration).

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qoc/errors.hpp"
#include "qoc/io.hpp"

namespace {

struct Overrides {
  std::optional<double> T;
  std::optional<int> N;
  std::optional<int> substeps;
  std::optional<double> alpha;
  std::optional<int> max_iters;
  std::optional<double> v_seed;
  std::optional<double> sim_v;
  std::optional<double> sim_n;
  std::optional<std::string> controls;
  std::optional<double> t_hi;
  std::optional<double> t_lo;
  std::optional<double> reach_tol;
  std::optional<int> bisect_iters;
  std::string grid;  // comma-separated T list
  std::string output_dir;
};

void apply(qoc::RunConfig& cfg, const Overrides& ov) {
  if (ov.T) cfg.T = *ov.T;
  if (ov.N) cfg.N = *ov.N;
  if (ov.substeps) cfg.substeps = *ov.substeps;
  if (ov.alpha) cfg.gpm.alpha = *ov.alpha;
  if (ov.max_iters) cfg.gpm.max_iters = *ov.max_iters;
  if (ov.v_seed) cfg.gpm.v_seed = *ov.v_seed;
  if (ov.sim_v) cfg.sim_v = *ov.sim_v;
  if (ov.sim_n) cfg.sim_n = *ov.sim_n;
  if (ov.controls) cfg.control_csv = *ov.controls;
  if (ov.t_hi) cfg.sweep.T_hi = *ov.t_hi;
  if (ov.t_lo) cfg.sweep.T_lo = *ov.t_lo;
  if (ov.reach_tol) cfg.sweep.reach_tol = *ov.reach_tol;
  if (ov.bisect_iters) cfg.sweep.bisect_iters = *ov.bisect_iters;
  if (!ov.grid.empty()) {
    cfg.sweep_grid.clear();
    std::stringstream ss(ov.grid);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        cfg.sweep_grid.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw qoc::ConfigError("--grid: bad time value '" + cell + "'");
      }
    }
  }
  if (!ov.output_dir.empty()) cfg.output_dir = ov.output_dir;
}

void add_common(CLI::App* cmd, std::string& config_path, Overrides& ov,
                bool need_output) {
  cmd->add_option("-c,--config", config_path, "JSON config file")->required();
  auto* out = cmd->add_option("-o,--output-dir", ov.output_dir,
                              "directory for emitted files");
  if (need_output) out->required();
  cmd->add_option("--T", ov.T, "final time override");
  cmd->add_option("--N", ov.N, "control intervals override");
  cmd->add_option("--substeps", ov.substeps, "RK4 substeps per interval");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Minimal-time coherent/incoherent control of a two-level open quantum "
      "system in the Bloch ball"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;
  bool grad_preflight = false;

  auto* sim = app.add_subcommand("simulate", "integrate the Bloch system");
  add_common(sim, config_path, ov, true);
  sim->add_option("--v", ov.sim_v, "constant coherent control");
  sim->add_option("--n", ov.sim_n, "constant incoherent control");
  sim->add_option("--controls", ov.controls, "control CSV (t,v,n)");

  auto* opt = app.add_subcommand("optimize", "fixed-time GPM solve");
  add_common(opt, config_path, ov, true);
  opt->add_option("--alpha", ov.alpha, "gradient step scale");
  opt->add_option("--max-iters", ov.max_iters, "iteration cap");
  opt->add_option("--v-seed", ov.v_seed, "initial coherent control");
  opt->add_flag("--grad-check", grad_preflight,
                "finite-difference gradient pre-flight");

  auto* swp = app.add_subcommand("sweep", "minimal-time search over horizons");
  add_common(swp, config_path, ov, true);
  swp->add_option("--t-hi", ov.t_hi, "known-feasible starting horizon");
  swp->add_option("--t-lo", ov.t_lo, "lower horizon bound");
  swp->add_option("--reach-tol", ov.reach_tol, "J threshold for feasibility");
  swp->add_option("--bisect-iters", ov.bisect_iters, "bisection steps");
  swp->add_option("--grid", ov.grid,
                  "comma-separated horizons (grid mode instead of bisection)");
  swp->add_option("--alpha", ov.alpha, "gradient step scale");
  swp->add_option("--max-iters", ov.max_iters, "iteration cap");
  swp->add_option("--v-seed", ov.v_seed, "initial coherent control");

  auto* gck = app.add_subcommand("grad-check",
                                 "adjoint gradient vs finite differences");
  add_common(gck, config_path, ov, false);
  gck->add_option("--controls", ov.controls, "control CSV (t,v,n)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    qoc::RunConfig cfg = qoc::load_config(config_path);
    apply(cfg, ov);

    if (sim->parsed()) {
      const auto s = qoc::run_simulate(cfg);
      std::printf("J_final = %.12g, norm_max = %.12g\n", s.J_final,
                  s.norm_max);
    } else if (opt->parsed()) {
      if (grad_preflight) {
        const double worst = qoc::run_grad_check(cfg);
        std::printf("grad-check: max relative FD mismatch = %.6g\n", worst);
        if (worst > 1e-4) {
          std::fprintf(stderr, "grad-check failed (> 1e-4), aborting\n");
          return 4;
        }
      }
      const auto s = qoc::run_optimize(cfg);
      std::printf("J_final = %.12g after %d iterations (%s)\n", s.J_final,
                  s.iterations, qoc::to_string(s.termination));
    } else if (swp->parsed()) {
      const auto r = qoc::run_sweep(cfg);
      if (cfg.sweep_grid.empty())
        std::printf("T_min estimate = %.12g, bracket = [%.12g, %.12g]\n",
                    r.t_min_estimate, r.bracket_lo, r.bracket_hi);
      else
        std::printf("grid sweep done, %zu records, smallest feasible T = "
                    "%.12g\n",
                    r.records.size(), r.t_min_estimate);
    } else if (gck->parsed()) {
      const double worst = qoc::run_grad_check(cfg);
      std::printf("max relative FD mismatch = %.6g\n", worst);
      if (worst > 1e-4) return 4;
    }
  } catch (const qoc::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const qoc::InfeasibleAtTHi& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const qoc::NonFiniteState& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
