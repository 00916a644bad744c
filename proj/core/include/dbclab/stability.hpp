#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dbclab/run_config.hpp"

namespace dbclab {

/// Both sides of the continuous-dependence inequality for one perturbation size.
struct StabilityReport {
  std::string variant;
  double delta = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  std::vector<std::pair<std::string, double>> lhs_terms;
  std::vector<std::pair<std::string, double>> rhs_terms;
};

/// Compares the base run of `base` (a limit variant: eps_limit, kappa_limit or
/// double_limit) with runs whose data are shifted by delta * perturbation.
///
/// Left side: max_t ||u||_H + ||u||_{L2 V} + max_t ||u_Gamma||_{V_Gamma'} of the
/// difference, plus ||u_Gamma||_{L2 V_Gamma} for kappa_limit.  Right side:
/// ||u0||_H + ||u0_Gamma||_{V_Gamma'} + ||f||_{L2 H} + ||f_Gamma||_{L2 H_Gamma}
/// (||f_Gamma||_{L2 V_Gamma'} for kappa_limit) of the data difference; the L2 H
/// norm of f stands in for its L2 V' norm, which it bounds from above.
///
/// Throws ConfigError when the perturbed boundary datum changes the surface
/// mean by more than 1e-12, when the perturbation is zero, or for the full variant.
std::vector<StabilityReport> continuous_dependence(const RunConfig& base,
                                                   const Perturbation& perturbation,
                                                   const std::vector<double>& deltas,
                                                   unsigned jobs = 1);

}  // namespace dbclab
