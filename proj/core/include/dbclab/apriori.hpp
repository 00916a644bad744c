#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dbclab/norms.hpp"
#include "dbclab/run_config.hpp"
#include "dbclab/stepper.hpp"

namespace dbclab {

/// Uniform-bound quantities of one run (time norms over the sampled levels t_0..t_N).
struct AprioriRow {
  double param = 0.0;
  double dtu_l2h = 0.0;                   // ||d_t u||_{L2 H}, difference quotients
  double u_linf_v = 0.0;                  // ||u||_{Linf V}
  double sqrt_kappa_ugamma_linf_v = 0.0;  // sqrt(kappa) ||u_Gamma||_{Linf V_Gamma}
  double beta_hat_linf_l1 = 0.0;          // ||beta_hat_lambda(u)||_{Linf L1}
  double beta_hat_gamma_linf_l1 = 0.0;    // ||beta_hat_Gamma,lambda(u_Gamma)||_{Linf L1}
  double sqrt_eps_grad_mu_l2h = 0.0;      // sqrt(eps) ||grad mu||_{L2 H}; 0 without bulk mu
  double grad_mu_gamma_l2h = 0.0;         // ||grad_Gamma mu_Gamma||_{L2 H_Gamma}
  double dtu_gamma_l2_vdual = 0.0;        // ||d_t u_Gamma||_{L2 V_Gamma'}
  std::optional<double> sqrt_tau_dtu_gamma_l2h;  // only for tau > 0

  /// Named quantities in table order.
  std::vector<std::pair<std::string, double>> columns() const;
};

/// Accumulates an AprioriRow along a run.
class AprioriObserver : public Observer {
 public:
  AprioriObserver(const Grid& grid, const ProblemVariant& variant, const PotentialPair& pair,
                  double lambda, double dt);
  void start(const CoupledState& s) override;
  void step(const CoupledState& prev, const CoupledState& next) override;
  AprioriRow row(double param) const;

 private:
  void sample(const CoupledState& s);

  Grid grid_;
  ProblemVariant variant_;
  RegularizedGraph bulk_;
  RegularizedGraph surface_;
  double dt_;
  NormAccumulator dtu_, u_v_, ug_v_, bhat_, bhat_g_, grad_mu_, grad_mug_, dtug_dual_, dtug_h_;
};

struct AprioriTable {
  std::string parameter;  // "kappa" or "eps"
  std::vector<AprioriRow> rows;
};

/// Runs the base configuration for each parameter value ("kappa" or "eps"),
/// using up to `jobs` threads.
AprioriTable apriori(const RunConfig& base, const std::string& parameter,
                     const std::vector<double>& values, unsigned jobs = 1);

struct UniformityResult {
  bool passed = true;
  std::string worst_quantity;
  double worst_ratio = 1.0;
};

/// Consecutive rows (one parameter halving apart) must agree within `factor`
/// for every quantity; pairs where both entries are below `floor` are skipped.
UniformityResult consecutive_uniformity(const AprioriTable& table, double factor = 2.0,
                                        double floor = 1e-12);

/// Over all rows, max / min of every quantity stays below `factor`; quantities
/// that stay below `floor` in every row are skipped.
UniformityResult spread_uniformity(const AprioriTable& table, double factor = 2.0,
                                   double floor = 1e-12);

/// The named quantity stays below `factor` times its value in the first row.
UniformityResult bounded_by_first(const AprioriTable& table, const std::string& quantity,
                                  double factor = 2.0);

}  // namespace dbclab
