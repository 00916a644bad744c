#include "dbclab/run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "dbclab/error.hpp"

namespace dbclab {
namespace {

namespace pt = boost::property_tree;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "grid.nr",          "grid.ntheta",         "grid.radius",         "time.dt",
      "time.T",           "problem.variant",     "problem.eps",         "problem.kappa",
      "problem.tau",      "problem.lambda",      "potentials.bulk_graph", "potentials.bulk_pi",
      "potentials.surf_graph", "potentials.surf_pi", "potentials.rho",  "potentials.c0",
      "potentials.cbeta", "data.u0",             "data.u0_gamma",       "data.f",
      "data.f_gamma",     "solver.newton_tol",   "solver.newton_maxit", "solver.linear",
      "solver.linear_tol", "sweep.values",       "sweep.min_slope",     "sweep.stabilization",
      "perturbation.du0", "perturbation.du0_gamma", "perturbation.df",  "perturbation.df_gamma"};
  return keys;
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = boost::trim_copy(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != t.size() || !std::isfinite(v))
    throw ConfigError(fmt::format("{}: expected a number, got '{}'", key, text));
  return v;
}

std::size_t to_size(const std::string& key, const std::string& text) {
  const double v = to_double(key, text);
  if (v < 0.0 || v != std::floor(v) || v > 1e9)
    throw ConfigError(fmt::format("{}: expected a non-negative integer, got '{}'", key, text));
  return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string t = boost::to_lower_copy(boost::trim_copy(text));
  if (t == "true" || t == "yes" || t == "1" || t == "on") return true;
  if (t == "false" || t == "no" || t == "0" || t == "off") return false;
  throw ConfigError(fmt::format("{}: expected a boolean, got '{}'", key, text));
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(", \t"), boost::token_compress_on);
  std::vector<double> out;
  for (const auto& p : parts)
    if (!boost::trim_copy(p).empty()) out.push_back(to_double(key, p));
  return out;
}

Expression parse_field(const char* name, const std::string& text) {
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw ConfigError(fmt::format("data.{}: {}", name, e.what()));
  }
}

Expression parse_optional(const char* name, const std::string& text) {
  if (boost::trim_copy(text).empty()) return {};
  return parse_field(name, text);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("config line {}: {}", e.line(), e.message()));
  }

  RunConfig c;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError(fmt::format("key '{}' must belong to a section", section));
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      if (!known_keys().count(full)) throw ConfigError(fmt::format("unknown config key '{}'", full));
      const std::string v = boost::trim_copy(value.data());
      if (full == "grid.nr") c.nr = to_size(full, v);
      else if (full == "grid.ntheta") c.ntheta = to_size(full, v);
      else if (full == "grid.radius") c.radius = to_double(full, v);
      else if (full == "time.dt") c.dt = to_double(full, v);
      else if (full == "time.T") c.final_time = to_double(full, v);
      else if (full == "problem.variant") c.variant = v;
      else if (full == "problem.eps") c.eps = to_double(full, v);
      else if (full == "problem.kappa") c.kappa = to_double(full, v);
      else if (full == "problem.tau") c.tau = to_double(full, v);
      else if (full == "problem.lambda") c.lambda = to_double(full, v);
      else if (full == "potentials.bulk_graph") c.bulk_graph = v;
      else if (full == "potentials.bulk_pi") c.bulk_pi = v;
      else if (full == "potentials.surf_graph") c.surf_graph = v;
      else if (full == "potentials.surf_pi") c.surf_pi = v;
      else if (full == "potentials.rho") c.rho = to_double(full, v);
      else if (full == "potentials.c0") c.c0 = to_double(full, v);
      else if (full == "potentials.cbeta") c.cbeta = to_double(full, v);
      else if (full == "data.u0") c.u0 = v;
      else if (full == "data.u0_gamma") c.u0_gamma = v;
      else if (full == "data.f") c.f = v;
      else if (full == "data.f_gamma") c.f_gamma = v;
      else if (full == "solver.newton_tol") c.newton_tol = to_double(full, v);
      else if (full == "solver.newton_maxit") c.newton_maxit = to_size(full, v);
      else if (full == "solver.linear") c.linear = v;
      else if (full == "solver.linear_tol") c.linear_tol = to_double(full, v);
      else if (full == "sweep.values") c.sweep_values = to_list(full, v);
      else if (full == "sweep.min_slope") c.min_slope = to_double(full, v);
      else if (full == "sweep.stabilization") c.stabilization = to_bool(full, v);
      else if (full == "perturbation.du0") c.perturbation.du0 = v;
      else if (full == "perturbation.du0_gamma") c.perturbation.du0_gamma = v;
      else if (full == "perturbation.df") c.perturbation.df = v;
      else if (full == "perturbation.df_gamma") c.perturbation.df_gamma = v;
    }
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

Grid RunConfig::grid() const {
  try {
    return build_grid(nr, ntheta, radius);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
}

ProblemVariant RunConfig::problem() const { return parse_variant(variant, eps, kappa, tau); }

PotentialPair RunConfig::potentials() const {
  PotentialPair p;
  p.bulk_graph = parse_graph(bulk_graph);
  p.bulk_pi = parse_perturbation(bulk_pi);
  p.surface_graph = parse_graph(surf_graph);
  p.surface_pi = parse_perturbation(surf_pi);
  p.rho = rho;
  p.c0 = c0;
  p.c_beta = cbeta;
  return p;
}

StepperConfig RunConfig::stepper() const {
  StepperConfig s;
  s.dt = dt;
  s.lambda = lambda;
  s.newton.tol = newton_tol;
  s.newton.maxit = newton_maxit;
  s.linear_tol = linear_tol;
  if (linear == "direct") s.linear_solver = LinearSolverKind::Direct;
  else if (linear == "bicgstab") s.linear_solver = LinearSolverKind::BiCGStab;
  else throw ConfigError("solver.linear must be 'direct' or 'bicgstab', got '" + linear + "'");
  s.potentials = potentials();
  s.f = parse_optional("f", f);
  s.f_gamma = parse_optional("f_gamma", f_gamma);
  return s;
}

Expression RunConfig::initial() const { return parse_field("u0", u0); }

Expression RunConfig::initial_gamma() const { return parse_optional("u0_gamma", u0_gamma); }

std::size_t RunConfig::steps() const { return step_count(final_time, dt); }

void RunConfig::validate() const {
  (void)grid();
  (void)problem();
  if (!(lambda > 0.0)) throw ConfigError(fmt::format("problem.lambda must be positive, got {}", lambda));
  if (!(newton_tol > 0.0) || !(linear_tol > 0.0)) throw ConfigError("solver tolerances must be positive");
  (void)stepper();
  (void)initial();
  (void)initial_gamma();
  (void)steps();
  parse_optional("du0", perturbation.du0);
  parse_optional("du0_gamma", perturbation.du0_gamma);
  parse_optional("df", perturbation.df);
  parse_optional("df_gamma", perturbation.df_gamma);
  const AssumptionReport report = validate_assumptions(potentials(), 400, Interval{-2.0, 2.0});
  if (!report.passed) throw ConfigError("potentials violate the structural assumptions: " + report.violation);
}

std::uint64_t discretization_hash(const RunConfig& c) {
  auto canon = [](const std::string& e) {
    return boost::trim_copy(e).empty() ? std::string("0") : parse(e).print();
  };
  const std::string text = fmt::format(
      "{}|{}|{:a}|{:a}|{:a}|{:a}|{}|{}|{}|{}|{:a}|{:a}|{}|{}|{}|{}|{}|{:a}|{}|{}|{:a}", c.nr,
      c.ntheta, c.radius, c.dt, c.final_time, c.lambda, c.bulk_graph, c.bulk_pi, c.surf_graph,
      c.surf_pi, c.rho, c.c0, canon(c.u0), c.u0_gamma.empty() ? "-" : canon(c.u0_gamma), canon(c.f),
      canon(c.f_gamma), c.newton_maxit, c.newton_tol, c.linear, c.cbeta ? fmt::format("{:a}", *c.cbeta) : std::string("-"), c.linear_tol);
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace dbclab
