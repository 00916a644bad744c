#include "dbclab/apriori.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dbclab/error.hpp"
#include "dbclab/sweeps.hpp"

namespace dbclab {

std::vector<std::pair<std::string, double>> AprioriRow::columns() const {
  std::vector<std::pair<std::string, double>> c = {
      {"dtu_l2h", dtu_l2h},
      {"u_linf_v", u_linf_v},
      {"sqrt_kappa_ugamma_linf_v", sqrt_kappa_ugamma_linf_v},
      {"beta_hat_linf_l1", beta_hat_linf_l1},
      {"beta_hat_gamma_linf_l1", beta_hat_gamma_linf_l1},
      {"sqrt_eps_grad_mu_l2h", sqrt_eps_grad_mu_l2h},
      {"grad_mu_gamma_l2h", grad_mu_gamma_l2h},
      {"dtu_gamma_l2_vdual", dtu_gamma_l2_vdual},
  };
  if (sqrt_tau_dtu_gamma_l2h) c.emplace_back("sqrt_tau_dtu_gamma_l2h", *sqrt_tau_dtu_gamma_l2h);
  return c;
}

AprioriObserver::AprioriObserver(const Grid& grid, const ProblemVariant& variant,
                                 const PotentialPair& pair, double lambda, double dt)
    : grid_(grid),
      variant_(variant),
      bulk_(pair.bulk_graph, lambda),
      surface_(pair.surface_graph, lambda),
      dt_(dt) {}

void AprioriObserver::sample(const CoupledState& s) {
  u_v_.add(h1_bulk(grid_, s.u, s.uGamma), dt_);
  ug_v_.add(std::sqrt(variant_.surface_diffusion()) * h1_surface(grid_, s.uGamma), dt_);
  double b = 0.0;
  for (std::size_t i = 0; i < grid_.nr(); ++i) {
    double ring = 0.0;
    for (std::size_t j = 0; j < grid_.ntheta(); ++j) ring += bulk_.potential(s.u[grid_.cell(i, j)]);
    b += ring * grid_.volume(i);
  }
  bhat_.add(b, dt_);
  double bg = 0.0;
  for (double z : s.uGamma.values) bg += surface_.potential(z);
  bhat_g_.add(bg * grid_.face_length(), dt_);
}

void AprioriObserver::start(const CoupledState& s) { sample(s); }

void AprioriObserver::step(const CoupledState& prev, const CoupledState& next) {
  sample(next);
  const double inv = 1.0 / dt_;
  dtu_.add(l2_bulk(grid_, inv * (next.u - prev.u)), dt_);
  const SurfaceField dug = inv * (next.uGamma - prev.uGamma);
  dtug_dual_.add(vdual_surface(grid_, dug), dt_);
  if (variant_.viscosity() > 0.0) dtug_h_.add(std::sqrt(variant_.viscosity()) * l2_surface(grid_, dug), dt_);
  if (next.has_mu())
    grad_mu_.add(std::sqrt(variant_.bulk_weight()) * grad_bulk(grid_, next.mu, next.muGamma), dt_);
  grad_mug_.add(grad_surface(grid_, next.muGamma), dt_);
}

AprioriRow AprioriObserver::row(double param) const {
  AprioriRow r;
  r.param = param;
  r.dtu_l2h = dtu_.l2();
  r.u_linf_v = u_v_.linf();
  r.sqrt_kappa_ugamma_linf_v = ug_v_.linf();
  r.beta_hat_linf_l1 = bhat_.linf();
  r.beta_hat_gamma_linf_l1 = bhat_g_.linf();
  r.sqrt_eps_grad_mu_l2h = grad_mu_.l2();
  r.grad_mu_gamma_l2h = grad_mug_.l2();
  r.dtu_gamma_l2_vdual = dtug_dual_.l2();
  if (variant_.viscosity() > 0.0) r.sqrt_tau_dtu_gamma_l2h = dtug_h_.l2();
  return r;
}

AprioriTable apriori(const RunConfig& base, const std::string& parameter,
                     const std::vector<double>& values, unsigned jobs) {
  if (parameter != "kappa" && parameter != "eps")
    throw ConfigError("apriori: parameter must be 'kappa' or 'eps', got '" + parameter + "'");
  if (values.empty()) throw ConfigError("apriori: empty parameter list");
  AprioriTable table;
  table.parameter = parameter;
  table.rows.resize(values.size());
  const Grid grid = base.grid();
  const PotentialPair pair = base.potentials();
  parallel_for(values.size(), jobs, [&](std::size_t k) {
    RunConfig cfg = base;
    (parameter == "kappa" ? cfg.kappa : cfg.eps) = values[k];
    const ProblemVariant variant = cfg.problem();
    AprioriObserver obs(grid, variant, pair, cfg.lambda, cfg.dt);
    simulate(cfg, variant, {&obs});
    table.rows[k] = obs.row(values[k]);
  });
  return table;
}

UniformityResult consecutive_uniformity(const AprioriTable& table, double factor, double floor) {
  UniformityResult res;
  for (std::size_t k = 1; k < table.rows.size(); ++k) {
    const auto a = table.rows[k - 1].columns();
    const auto b = table.rows[k].columns();
    for (std::size_t q = 0; q < std::min(a.size(), b.size()); ++q) {
      const double x = std::abs(a[q].second), y = std::abs(b[q].second);
      if (x < floor && y < floor) continue;
      const double ratio = (std::min(x, y) > 0.0) ? std::max(x, y) / std::min(x, y)
                                                   : std::numeric_limits<double>::infinity();
      if (ratio > res.worst_ratio) {
        res.worst_ratio = ratio;
        res.worst_quantity = a[q].first;
      }
    }
  }
  res.passed = res.worst_ratio < factor;
  return res;
}

UniformityResult spread_uniformity(const AprioriTable& table, double factor, double floor) {
  UniformityResult res;
  if (table.rows.empty()) return res;
  const std::size_t nq = table.rows.front().columns().size();
  for (std::size_t q = 0; q < nq; ++q) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    std::string name;
    for (const auto& r : table.rows) {
      const auto cols = r.columns();
      name = cols[q].first;
      lo = std::min(lo, std::abs(cols[q].second));
      hi = std::max(hi, std::abs(cols[q].second));
    }
    if (hi < floor) continue;
    const double ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    if (ratio > res.worst_ratio) {
      res.worst_ratio = ratio;
      res.worst_quantity = name;
    }
  }
  res.passed = res.worst_ratio < factor;
  return res;
}

UniformityResult bounded_by_first(const AprioriTable& table, const std::string& quantity,
                                  double factor) {
  UniformityResult res;
  res.worst_quantity = quantity;
  if (table.rows.empty()) return res;
  auto value = [&](const AprioriRow& r) {
    for (const auto& [name, v] : r.columns())
      if (name == quantity) return v;
    throw std::invalid_argument("unknown a priori quantity '" + quantity + "'");
  };
  const double first = value(table.rows.front());
  for (const auto& r : table.rows) {
    const double ratio = first > 0.0 ? value(r) / first : (value(r) > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
    res.worst_ratio = std::max(res.worst_ratio, ratio);
  }
  res.passed = res.worst_ratio < factor;
  return res;
}

}  // namespace dbclab
