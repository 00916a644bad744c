#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dbclab/forcing.hpp"
#include "dbclab/geometry.hpp"
#include "dbclab/potentials.hpp"
#include "dbclab/stepper.hpp"

namespace dbclab {

/// Data perturbation for continuous-dependence studies; each member is added
/// (times delta) to the corresponding datum.  Empty expressions mean zero.
struct Perturbation {
  std::string du0;
  std::string du0_gamma;
  std::string df;
  std::string df_gamma;

  bool empty() const noexcept {
    return du0.empty() && du0_gamma.empty() && df.empty() && df_gamma.empty();
  }
};

/// Everything needed to run one simulation or a sweep, as read from an INI file.
struct RunConfig {
  // [grid]
  std::size_t nr = 16;
  std::size_t ntheta = 32;
  double radius = 1.0;
  // [time]
  double dt = 1e-3;
  double final_time = 0.1;
  // [problem]
  std::string variant = "full";
  double eps = 1.0;
  double kappa = 1.0;
  double tau = 0.0;
  double lambda = 0.1;
  // [potentials]
  std::string bulk_graph = "cubic";
  std::string bulk_pi = "neg_identity";
  std::string surf_graph = "cubic";
  std::string surf_pi = "neg_identity";
  double rho = 1.0;
  double c0 = 1.0;
  std::optional<double> cbeta;
  // [data]
  std::string u0 = "0";
  std::string u0_gamma;
  std::string f;
  std::string f_gamma;
  // [solver]
  double newton_tol = 1e-11;
  std::size_t newton_maxit = 30;
  std::string linear = "direct";
  double linear_tol = 1e-12;
  // [sweep]
  std::vector<double> sweep_values;
  std::optional<double> min_slope;
  bool stabilization = true;
  // [perturbation]
  Perturbation perturbation;

  Grid grid() const;
  ProblemVariant problem() const;
  PotentialPair potentials() const;
  /// Stepper settings; throws ConfigError on malformed expressions.
  StepperConfig stepper() const;
  Expression initial() const;
  /// Empty Expression when u0_gamma is not set.
  Expression initial_gamma() const;
  std::size_t steps() const;

  /// Parses all expressions, checks parameter ranges, T/dt, and the structural
  /// assumptions on the potentials.  Throws ConfigError.
  void validate() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Stable 64-bit hash of the discretization and data (grid, dt, T, lambda,
/// potentials, data expressions, solver tolerances); excludes eps, kappa, tau
/// and the variant, so all members of a sweep share it.
std::uint64_t discretization_hash(const RunConfig& cfg);

}  // namespace dbclab
