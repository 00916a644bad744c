#include "dbclab/stability.hpp"

#include <cmath>

#include <fmt/format.h>

#include "dbclab/error.hpp"
#include "dbclab/norms.hpp"
#include "dbclab/operators.hpp"
#include "dbclab/sweeps.hpp"

namespace dbclab {
namespace {

std::string shifted(const std::string& base, const std::string& change, double delta) {
  if (change.empty()) return base;
  const std::string b = base.empty() ? "0" : base;
  return fmt::format("({}) + ({:.17g}) * ({})", b, delta, change);
}

RunConfig perturbed(const RunConfig& base, const Perturbation& p, double delta) {
  RunConfig c = base;
  c.u0 = shifted(base.u0, p.du0, delta);
  // A boundary datum is only needed when the perturbation moves it away from the trace of u0.
  if (!p.du0_gamma.empty() || !base.u0_gamma.empty())
    c.u0_gamma = shifted(base.u0_gamma.empty() ? base.u0 : base.u0_gamma,
                         p.du0_gamma.empty() ? p.du0 : p.du0_gamma, delta);
  c.f = shifted(base.f, p.df, delta);
  c.f_gamma = shifted(base.f_gamma, p.df_gamma, delta);
  return c;
}

BulkField sample(const Grid& g, const std::string& text, double t) {
  BulkField out(g, 0.0);
  if (text.empty()) return out;
  const Expression e = parse(text);
  for (std::size_t i = 0; i < g.nr(); ++i)
    for (std::size_t j = 0; j < g.ntheta(); ++j)
      out[g.cell(i, j)] = e.eval(Bindings::polar(g.center_radius(i), g.angle(j), t));
  return out;
}

SurfaceField sample_trace(const Grid& g, const std::string& text, double t) {
  SurfaceField out(g, 0.0);
  if (text.empty()) return out;
  const Expression e = parse(text);
  for (std::size_t j = 0; j < g.ntheta(); ++j) out[j] = e.eval(Bindings::polar(g.radius(), g.angle(j), t));
  return out;
}

SurfaceField boundary_datum(const Grid& g, const RunConfig& c) {
  return sample_trace(g, c.u0_gamma.empty() ? c.u0 : c.u0_gamma, 0.0);
}

class Recorder : public Observer {
 public:
  void start(const CoupledState& s) override { states.push_back(s); }
  void step(const CoupledState&, const CoupledState& next) override { states.push_back(next); }
  std::vector<CoupledState> states;
};

class DifferenceObserver : public Observer {
 public:
  DifferenceObserver(const Grid& grid, const std::vector<CoupledState>& ref, double dt)
      : grid_(grid), ref_(ref), dt_(dt) {}
  void start(const CoupledState& s) override { sample(s, 0, false); }
  void step(const CoupledState&, const CoupledState& next) override { sample(next, ++n_, true); }

  NormAccumulator u_h, u_v, ug_dual, ug_v;

 private:
  void sample(const CoupledState& s, std::size_t n, bool timed) {
    const CoupledState& r = ref_.at(n);
    const BulkField du = s.u - r.u;
    const SurfaceField dug = s.uGamma - r.uGamma;
    u_h.add(l2_bulk(grid_, du), 0.0);
    ug_dual.add(vdual_surface(grid_, dug), 0.0);
    if (timed) {
      u_v.add(h1_bulk(grid_, du, dug), dt_);
      ug_v.add(h1_surface(grid_, dug), dt_);
    }
  }
  const Grid& grid_;
  const std::vector<CoupledState>& ref_;
  double dt_;
  std::size_t n_ = 0;
};

}  // namespace

std::vector<StabilityReport> continuous_dependence(const RunConfig& base,
                                                   const Perturbation& perturbation,
                                                   const std::vector<double>& deltas,
                                                   unsigned jobs) {
  base.validate();
  const ProblemVariant variant = base.problem();
  if (variant.kind == ProblemVariant::Kind::FullEpsKappa)
    throw ConfigError("continuous dependence is measured for eps_limit, kappa_limit or double_limit");
  if (deltas.empty()) throw ConfigError("continuous dependence needs at least one perturbation size");
  if (perturbation.empty()) throw ConfigError("zero perturbation: the ratio is undefined");
  const bool kappa_limit = variant.kind == ProblemVariant::Kind::KappaLimit;

  const Grid grid = base.grid();
  const SurfaceField g1 = boundary_datum(grid, base);
  std::vector<RunConfig> configs;
  for (double d : deltas) {
    if (d == 0.0) throw ConfigError("zero perturbation: the ratio is undefined");
    RunConfig c = perturbed(base, perturbation, d);
    c.validate();
    const double shift = surface_mean(grid, boundary_datum(grid, c)) - surface_mean(grid, g1);
    if (std::abs(shift) > 1e-12)
      throw ConfigError(fmt::format(
          "perturbation at delta = {} changes the boundary mean by {:.3e}; the two data must share it",
          d, shift));
    configs.push_back(std::move(c));
  }

  Recorder ref;
  simulate(base, variant, {&ref});

  const std::size_t steps = base.steps();
  std::vector<StabilityReport> reports(deltas.size());
  parallel_for(deltas.size(), jobs, [&](std::size_t k) {
    const RunConfig& c = configs[k];
    DifferenceObserver diff(grid, ref.states, base.dt);
    simulate(c, variant, {&diff});

    StabilityReport r;
    r.variant = variant.name();
    r.delta = deltas[k];
    r.lhs_terms = {{"linf_h_u", diff.u_h.linf()},
                   {"l2_v_u", diff.u_v.l2()},
                   {"linf_vdual_u_gamma", diff.ug_dual.linf()}};
    if (kappa_limit) r.lhs_terms.emplace_back("l2_v_u_gamma", diff.ug_v.l2());

    const BulkField du0 = sample(grid, c.u0, 0.0) - sample(grid, base.u0, 0.0);
    const SurfaceField du0g = boundary_datum(grid, c) - g1;
    NormAccumulator f_h, fg;
    for (std::size_t n = 1; n <= steps; ++n) {
      const double t = static_cast<double>(n) * base.dt;
      f_h.add(l2_bulk(grid, sample(grid, c.f, t) - sample(grid, base.f, t)), base.dt);
      const SurfaceField dfg = sample_trace(grid, c.f_gamma, t) - sample_trace(grid, base.f_gamma, t);
      fg.add(kappa_limit ? vdual_surface(grid, dfg) : l2_surface(grid, dfg), base.dt);
    }
    r.rhs_terms = {{"h_u0", l2_bulk(grid, du0)},
                   {"vdual_u0_gamma", vdual_surface(grid, du0g)},
                   {"l2_h_f", f_h.l2()},
                   {kappa_limit ? "l2_vdual_f_gamma" : "l2_h_f_gamma", fg.l2()}};
    for (const auto& t : r.lhs_terms) r.lhs += t.second;
    for (const auto& t : r.rhs_terms) r.rhs += t.second;
    if (!(r.rhs > 0.0))
      throw ConfigError(fmt::format("perturbation at delta = {} vanishes on the grid", deltas[k]));
    r.ratio = r.lhs / r.rhs;
    reports[k] = std::move(r);
  });
  return reports;
}

}  // namespace dbclab
