#include "dbclab/sweeps.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "dbclab/error.hpp"
#include "dbclab/norms.hpp"

namespace dbclab {

RunResult simulate(const RunConfig& cfg, const ProblemVariant& variant,
                   const std::vector<Observer*>& observers) {
  const Grid grid = cfg.grid();
  Stepper stepper(grid, variant, cfg.stepper());
  const Expression u0 = cfg.initial();
  const Expression u0g = cfg.initial_gamma();
  const CoupledState init = stepper.initial_state(u0, u0g.empty() ? nullptr : &u0g);
  return run(stepper, init, cfg.final_time, observers);
}

RunResult simulate(const RunConfig& cfg, const std::vector<Observer*>& observers) {
  return simulate(cfg, cfg.problem(), observers);
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& job) {
  std::vector<std::exception_ptr> errors(n);
  auto guarded = [&](std::size_t k) {
    try {
      job(k);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };
  const std::size_t workers = std::min<std::size_t>(std::max(1u, jobs), n);
  if (workers <= 1) {
    for (std::size_t k = 0; k < n; ++k) guarded(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < n; k = next++) guarded(k);
      });
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names = {
      "linf_l2_u",         "l2_h1_u",
      "sqrt_eps_conv_grad_mu", "conv_grad_mu_gamma",
      "sqrt_kappa_grad_u_gamma", "linf_vdual_u_gamma"};
  return names;
}

std::vector<MetricSeries> fit_metrics(const std::vector<double>& abscissa,
                                      std::vector<MetricSeries> series) {
  for (auto& s : series) {
    if (s.values.size() != abscissa.size())
      throw std::invalid_argument("fit_metrics: series '" + s.name + "' has the wrong length");
    const bool positive = std::all_of(s.values.begin(), s.values.end(), [](double v) { return v > 0.0; });
    s.fit = positive ? std::optional<RateFit>(fit_rate(abscissa, s.values)) : std::nullopt;
  }
  return series;
}

const MetricSeries& RateReport::metric(const std::string& name) const {
  for (const auto& m : metrics)
    if (m.name == name) return m;
  throw std::invalid_argument("unknown metric '" + name + "'");
}

std::optional<double> RateReport::stabilization_shift(const std::string& name) const {
  for (const auto& m : half_dt)
    if (m.name == name) {
      const auto& full = metric(name);
      if (!m.fit || !full.fit) return std::nullopt;
      return std::abs(full.fit->slope - m.fit->slope);
    }
  return std::nullopt;
}

std::string to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::Kappa: return "kappa";
    case SweepKind::Eps: return "eps";
    case SweepKind::Joint: return "joint";
  }
  return "?";
}

namespace {

class Recorder : public Observer {
 public:
  explicit Recorder(bool keep_mu) : keep_mu_(keep_mu) {}
  void start(const CoupledState& s) override { push(s); }
  void step(const CoupledState&, const CoupledState& next) override { push(next); }
  std::vector<CoupledState> states;

 private:
  void push(CoupledState s) {
    if (!keep_mu_) s.mu.values.clear();
    states.push_back(std::move(s));
  }
  bool keep_mu_;
};

// Differences between a member run and the stored reference, step by step.
class ErrorObserver : public Observer {
 public:
  ErrorObserver(const Grid& grid, const std::vector<CoupledState>& ref, SweepKind kind, double eps,
                double kappa, double dt)
      : grid_(grid), ref_(ref), kind_(kind), eps_(eps), kappa_(kappa), dt_(dt) {}

  void step(const CoupledState&, const CoupledState& next) override {
    ++n_;
    if (n_ >= ref_.size()) throw std::logic_error("reference trajectory is shorter than the run");
    const CoupledState& r = ref_[n_];
    const BulkField du = next.u - r.u;
    const SurfaceField dug = next.uGamma - r.uGamma;
    const SurfaceField dmug = next.muGamma - r.muGamma;
    linf_l2_u_.add(l2_bulk(grid_, du), dt_);
    l2_h1_u_.add(h1_bulk(grid_, du, dug), dt_);
    if (kind_ == SweepKind::Kappa) {
      conv_mu_.add((next.mu - r.mu).values, dt_);
      conv_mu_trace_.add(dmug.values, dt_);
    } else {
      conv_mu_.add(next.mu.values, dt_);
      conv_mu_trace_.add(next.muGamma.values, dt_);
    }
    conv_mug_.add(dmug.values, dt_);
    grad_mu_.add(grad_bulk(grid_, BulkField(conv_mu_.value()), SurfaceField(conv_mu_trace_.value())), dt_);
    grad_mug_.add(grad_surface(grid_, SurfaceField(conv_mug_.value())), dt_);
    grad_ug_.add(grad_surface(grid_, kind_ == SweepKind::Eps ? dug : next.uGamma), dt_);
    vdual_.add(vdual_surface(grid_, dug), dt_);
  }

  std::vector<double> values() const {
    return {linf_l2_u_.linf(),
            l2_h1_u_.l2(),
            std::sqrt(eps_) * grad_mu_.linf(),
            grad_mug_.linf(),
            std::sqrt(kappa_) * grad_ug_.l2(),
            vdual_.linf()};
  }

 private:
  const Grid& grid_;
  const std::vector<CoupledState>& ref_;
  SweepKind kind_;
  double eps_, kappa_, dt_;
  std::size_t n_ = 0;
  NormAccumulator linf_l2_u_, l2_h1_u_, grad_mu_, grad_mug_, grad_ug_, vdual_;
  Convolution conv_mu_, conv_mu_trace_, conv_mug_;
};

ProblemVariant reference_variant(SweepKind kind, const RunConfig& base) {
  switch (kind) {
    case SweepKind::Kappa: return ProblemVariant::eps_limit(base.eps);
    case SweepKind::Eps: return ProblemVariant::kappa_limit(base.kappa);
    case SweepKind::Joint: return ProblemVariant::double_limit();
  }
  return ProblemVariant::double_limit();
}

RunConfig member_config(const RunConfig& base, const SweepPoint& p) {
  RunConfig c = base;
  c.variant = "full";
  c.eps = p.eps;
  c.kappa = p.kappa;
  return c;
}

std::string point_label(SweepKind kind, const SweepPoint& p) {
  switch (kind) {
    case SweepKind::Kappa: return fmt::format("kappa = {}", p.kappa);
    case SweepKind::Eps: return fmt::format("eps = {}", p.eps);
    case SweepKind::Joint: return fmt::format("(eps, kappa) = ({}, {})", p.eps, p.kappa);
  }
  return "?";
}

std::vector<MetricSeries> run_pass(const RunConfig& cfg, SweepKind kind,
                                   const std::vector<SweepPoint>& points, unsigned jobs,
                                   AprioriTable* apriori) {
  const Grid grid = cfg.grid();
  const ProblemVariant ref_variant = reference_variant(kind, cfg);
  Recorder recorder(kind == SweepKind::Kappa);
  try {
    simulate(cfg, ref_variant, {&recorder});
  } catch (const SolverError& e) {
    throw SolverError(fmt::format("reference run {} failed: {}", ref_variant.name(), e.what()));
  }

  const PotentialPair pair = cfg.potentials();
  std::vector<std::vector<double>> values(points.size());
  if (apriori) apriori->rows.assign(points.size(), AprioriRow{});
  parallel_for(points.size(), jobs, [&](std::size_t k) {
    const RunConfig member = member_config(cfg, points[k]);
    const ProblemVariant variant = member.problem();
    ErrorObserver errors(grid, recorder.states, kind, points[k].eps, points[k].kappa, cfg.dt);
    AprioriObserver bounds(grid, variant, pair, cfg.lambda, cfg.dt);
    try {
      simulate(member, variant, {&errors, &bounds});
    } catch (const SolverError& e) {
      throw SolverError(fmt::format("run at {} failed: {}", point_label(kind, points[k]), e.what()));
    }
    values[k] = errors.values();
    if (apriori)
      apriori->rows[k] = bounds.row(kind == SweepKind::Eps ? points[k].eps : points[k].kappa);
  });

  std::vector<MetricSeries> series;
  for (std::size_t m = 0; m < metric_names().size(); ++m) {
    MetricSeries s;
    s.name = metric_names()[m];
    for (const auto& v : values) s.values.push_back(v[m]);
    series.push_back(std::move(s));
  }
  return series;
}

RateReport run_sweep(const RunConfig& base, SweepKind kind, const std::vector<SweepPoint>& points,
                     const SweepOptions& options) {
  if (points.size() < 2)
    throw ConfigError(fmt::format("{} sweep needs at least two parameter values to fit a rate, got {}",
                                  to_string(kind), points.size()));
  base.validate();

  RateReport report;
  report.kind = kind;
  report.points = points;
  for (const auto& p : points) {
    (void)member_config(base, p).problem();  // range check
    switch (kind) {
      case SweepKind::Kappa: report.abscissa.push_back(p.kappa); break;
      case SweepKind::Eps: report.abscissa.push_back(p.eps); break;
      case SweepKind::Joint: report.abscissa.push_back(std::sqrt(p.eps) + std::sqrt(p.kappa)); break;
    }
  }
  report.abscissa_name = kind == SweepKind::Joint ? "sqrt_eps_plus_sqrt_kappa" : to_string(kind);
  if (kind != SweepKind::Joint)
    for (std::size_t k = 1; k < report.abscissa.size(); ++k)
      if (!(report.abscissa[k] < report.abscissa[k - 1]))
        throw ConfigError(fmt::format("{} values must be strictly decreasing", to_string(kind)));

  // All members must share the discretization and data of the reference run.
  report.config_hash = discretization_hash(base);
  for (const auto& p : points)
    if (discretization_hash(member_config(base, p)) != report.config_hash)
      throw std::logic_error("sweep member differs from the reference discretization");

  report.apriori.parameter = kind == SweepKind::Eps ? "eps" : "kappa";
  report.metrics =
      fit_metrics(report.abscissa, run_pass(base, kind, points, options.jobs, &report.apriori));
  if (options.stabilization) {
    RunConfig half = base;
    half.dt = base.dt / 2.0;
    report.half_dt = fit_metrics(report.abscissa, run_pass(half, kind, points, options.jobs, nullptr));
  }
  return report;
}

}  // namespace

RateReport sweep_kappa(const RunConfig& base, const std::vector<double>& kappas,
                       const SweepOptions& options) {
  std::vector<SweepPoint> points;
  for (double k : kappas) points.push_back({base.eps, k});
  return run_sweep(base, SweepKind::Kappa, points, options);
}

RateReport sweep_eps(const RunConfig& base, const std::vector<double>& epss, const SweepOptions& options) {
  std::vector<SweepPoint> points;
  for (double e : epss) points.push_back({e, base.kappa});
  return run_sweep(base, SweepKind::Eps, points, options);
}

RateReport sweep_joint(const RunConfig& base, const std::vector<SweepPoint>& points,
                       const SweepOptions& options) {
  if (points.empty()) throw ConfigError("joint sweep needs a non-empty list of (eps, kappa) pairs");
  return run_sweep(base, SweepKind::Joint, points, options);
}

}  // namespace dbclab
