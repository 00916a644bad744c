// dbclab command line driver.
//
// Exit codes: 0 success, 1 configuration error, 2 solver failure,
// 3 a requested threshold (sweep.min_slope) was not met.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "dbclab/apriori.hpp"
#include "dbclab/checks.hpp"
#include "dbclab/error.hpp"
#include "dbclab/norms.hpp"
#include "dbclab/operators.hpp"
#include "dbclab/report.hpp"
#include "dbclab/run_config.hpp"
#include "dbclab/stability.hpp"
#include "dbclab/sweeps.hpp"

namespace fs = std::filesystem;
using namespace dbclab;

namespace {

constexpr int kConfigError = 1;
constexpr int kSolverError = 2;
constexpr int kThresholdError = 3;

struct Common {
  std::string config;
  std::string out = ".";
  unsigned jobs = 1;
  bool csv = false;
};

void write_file(const Common& opt, const std::string& name, const std::function<void(std::ostream&)>& body) {
  fs::create_directories(opt.out);
  const fs::path path = fs::path(opt.out) / name;
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  body(f);
  std::cout << "wrote " << path.string() << "\n";
}

int cmd_run(const Common& opt) {
  const RunConfig cfg = load_config(opt.config);
  const Grid grid = cfg.grid();
  const ProblemVariant variant = cfg.problem();
  Stepper stepper(grid, variant, cfg.stepper());
  const Expression u0 = cfg.initial();
  const Expression u0g = cfg.initial_gamma();
  const CoupledState init = stepper.initial_state(u0, u0g.empty() ? nullptr : &u0g);
  const RunResult result = run(stepper, init, cfg.final_time);

  std::size_t newton = 0, linear = 0;
  for (const auto& d : result.diagnostics) {
    newton += d.newton_iterations;
    linear += d.linear_iterations;
  }
  const PotentialPair pair = cfg.potentials();
  const double kappa = variant.surface_diffusion();
  fmt::print("variant            {}\n", variant.name());
  fmt::print("grid               {} x {}, R = {}\n", grid.nr(), grid.ntheta(), grid.radius());
  fmt::print("steps              {} (dt = {}, T = {})\n", result.diagnostics.size(), cfg.dt, cfg.final_time);
  fmt::print("newton iterations  {} (linear {})\n", newton, linear);
  fmt::print("surface mean       {:.15g} -> {:.15g}\n", surface_mean(grid, init.uGamma),
             surface_mean(grid, result.final_state.uGamma));
  fmt::print("energy             {:.10g} -> {:.10g}\n", energy(grid, init, pair, kappa, cfg.lambda),
             energy(grid, result.final_state, pair, kappa, cfg.lambda));
  double umax = 0.0;
  for (double v : result.final_state.u.values) umax = std::max(umax, std::abs(v));
  fmt::print("max |u|            {:.10g}\n", umax);
  if (opt.csv)
    write_file(opt, "diagnostics.csv", [&](std::ostream& o) { write_diagnostics_csv(o, result.diagnostics); });
  return 0;
}

int finish_sweep(const Common& opt, const RunConfig& cfg, const RateReport& report) {
  std::cout << format_rate_report(report);
  if (opt.csv) {
    write_file(opt, fmt::format("rates_{}.csv", to_string(report.kind)),
               [&](std::ostream& o) { write_rate_csv(o, report); });
    write_file(opt, fmt::format("apriori_{}.csv", to_string(report.kind)),
               [&](std::ostream& o) { write_apriori_csv(o, report.apriori); });
  }
  if (cfg.min_slope) {
    bool ok = true;
    for (const char* name : {"linf_l2_u", "linf_vdual_u_gamma"}) {
      const auto& m = report.metric(name);
      const bool pass = m.fit && m.fit->slope >= *cfg.min_slope;
      fmt::print("{} slope of {} >= {}\n", pass ? "PASS" : "FAIL", name, *cfg.min_slope);
      ok = ok && pass;
    }
    if (!ok) return kThresholdError;
  }
  return 0;
}

std::vector<double> sweep_values(const RunConfig& cfg) {
  if (cfg.sweep_values.empty()) throw ConfigError("[sweep] values is required for this command");
  return cfg.sweep_values;
}

int cmd_sweep(const Common& opt, SweepKind kind) {
  const RunConfig cfg = load_config(opt.config);
  const SweepOptions so{opt.jobs, cfg.stabilization};
  const std::vector<double> values = sweep_values(cfg);
  RateReport report;
  switch (kind) {
    case SweepKind::Kappa: report = sweep_kappa(cfg, values, so); break;
    case SweepKind::Eps: report = sweep_eps(cfg, values, so); break;
    case SweepKind::Joint: {
      std::vector<SweepPoint> points;
      for (double v : values) points.push_back({v, v});
      report = sweep_joint(cfg, points, so);
      break;
    }
  }
  return finish_sweep(opt, cfg, report);
}

int cmd_cont_dep(const Common& opt) {
  const RunConfig cfg = load_config(opt.config);
  const std::vector<double> deltas =
      cfg.sweep_values.empty() ? std::vector<double>{1e-1, 1e-2, 1e-3} : cfg.sweep_values;
  const auto reports = continuous_dependence(cfg, cfg.perturbation, deltas, opt.jobs);
  std::cout << format_stability(reports);
  if (opt.csv) write_file(opt, "stability.csv", [&](std::ostream& o) { write_stability_csv(o, reports); });
  return 0;
}

int cmd_apriori(const Common& opt, const std::string& parameter) {
  const RunConfig cfg = load_config(opt.config);
  const AprioriTable table = apriori(cfg, parameter, sweep_values(cfg), opt.jobs);
  std::cout << format_apriori(table);
  const UniformityResult u = consecutive_uniformity(table);
  fmt::print("largest ratio between neighbouring rows: {:.4f} ({})\n", u.worst_ratio,
             u.worst_quantity.empty() ? "-" : u.worst_quantity);
  if (opt.csv) write_file(opt, "apriori.csv", [&](std::ostream& o) { write_apriori_csv(o, table); });
  return 0;
}

int cmd_check(const Common& opt, const std::vector<std::string>& grids) {
  std::vector<std::pair<std::size_t, std::size_t>> sizes;
  for (const auto& g : grids) {
    std::size_t nr = 0, nt = 0;
    char x = 0;
    std::istringstream in(g);
    if (!(in >> nr >> x >> nt) || x != 'x' || !in.eof())
      throw ConfigError("grid '" + g + "' is not of the form NRxNTHETA");
    sizes.emplace_back(nr, nt);
  }
  CheckReport report;
  try {
    report = check_operators(sizes);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  std::cout << format_checks(report);
  if (opt.csv)
    write_file(opt, "checks.csv", [&](std::ostream& o) {
      o << "grid,name,defect,tolerance,passed\n";
      for (const auto& e : report.entries)
        o << fmt::format("{},{},{:.6e},{:.1e},{}\n", e.grid, e.name, e.value, e.tolerance, e.passed);
    });
  return report.passed() ? 0 : kThresholdError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bulk-surface Cahn-Hilliard / Allen-Cahn solver and asymptotic-limit experiments"};
  app.require_subcommand(1);
  Common opt;
  std::string parameter = "kappa";
  std::vector<std::string> grids = {"4x8", "16x32", "32x64"};

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", opt.config, "INI configuration file");
    if (needs_config) c->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "Directory for CSV output")->capture_default_str();
    sub->add_option("--jobs", opt.jobs, "Concurrent runs")->capture_default_str()->check(CLI::Range(1u, 256u));
    sub->add_flag("--csv", opt.csv, "Write CSV files to --out");
  };
  auto* run_cmd = app.add_subcommand("run", "Run one simulation");
  auto* sk = app.add_subcommand("sweep-kappa", "Full problem vs eps-limit over [sweep] values of kappa");
  auto* se = app.add_subcommand("sweep-eps", "Full problem vs kappa-limit over [sweep] values of eps");
  auto* sj = app.add_subcommand("sweep-joint", "Full problem vs double limit, eps = kappa = [sweep] values");
  auto* cd = app.add_subcommand("cont-dep", "Continuous dependence on data perturbations");
  auto* ap = app.add_subcommand("apriori", "Uniform bounds over a parameter sweep");
  auto* ch = app.add_subcommand("check-operators", "Exactness checks of the discrete operators");
  for (auto* s : {run_cmd, sk, se, sj, cd, ap}) add_common(s, true);
  add_common(ch, false);
  ap->add_option("--parameter", parameter, "kappa or eps")->check(CLI::IsMember({"kappa", "eps"}));
  ch->add_option("--grids", grids, "Grid sizes NRxNTHETA")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kConfigError;
  }

  try {
    if (*run_cmd) return cmd_run(opt);
    if (*sk) return cmd_sweep(opt, SweepKind::Kappa);
    if (*se) return cmd_sweep(opt, SweepKind::Eps);
    if (*sj) return cmd_sweep(opt, SweepKind::Joint);
    if (*cd) return cmd_cont_dep(opt);
    if (*ap) return cmd_apriori(opt, parameter);
    if (*ch) return cmd_check(opt, grids);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DomainError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kSolverError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverError;
  }
  return 0;
}
