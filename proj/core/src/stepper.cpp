#include "dbclab/stepper.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "dbclab/error.hpp"
#include "dbclab/operators.hpp"

namespace dbclab {

void ProblemVariant::validate() const {
  auto unit = [](double v, const char* what) {
    if (!(v > 0.0 && v <= 1.0))
      throw ConfigError(fmt::format("{} must lie in (0, 1], got {}", what, v));
  };
  switch (kind) {
    case Kind::FullEpsKappa:
      unit(eps, "eps");
      unit(kappa, "kappa");
      if (!(tau >= 0.0 && tau <= 1.0))
        throw ConfigError(fmt::format("tau must lie in [0, 1], got {}", tau));
      break;
    case Kind::EpsLimit: unit(eps, "eps"); break;
    case Kind::KappaLimit: unit(kappa, "kappa"); break;
    case Kind::DoubleLimit: break;
  }
}

std::string ProblemVariant::name() const {
  switch (kind) {
    case Kind::FullEpsKappa: return fmt::format("full(eps={}, kappa={}, tau={})", eps, kappa, tau);
    case Kind::EpsLimit: return fmt::format("eps_limit(eps={})", eps);
    case Kind::KappaLimit: return fmt::format("kappa_limit(kappa={})", kappa);
    case Kind::DoubleLimit: return "double_limit";
  }
  return "?";
}

ProblemVariant parse_variant(const std::string& name, double eps, double kappa, double tau) {
  ProblemVariant v;
  if (name == "full") v = ProblemVariant::full(eps, kappa, tau);
  else if (name == "eps_limit") v = ProblemVariant::eps_limit(eps);
  else if (name == "kappa_limit") v = ProblemVariant::kappa_limit(kappa);
  else if (name == "double_limit") v = ProblemVariant::double_limit();
  else
    throw ConfigError("unknown variant '" + name +
                      "' (expected full, eps_limit, kappa_limit or double_limit)");
  v.validate();
  return v;
}

namespace {


BulkField sample_expression_bulk(const Grid& grid, const Expression& e, double t) {
  BulkField out(grid, 0.0);
  if (e.empty()) return out;
  for (std::size_t i = 0; i < grid.nr(); ++i)
    for (std::size_t j = 0; j < grid.ntheta(); ++j)
      out[grid.cell(i, j)] = e.eval(Bindings::polar(grid.center_radius(i), grid.angle(j), t));
  return out;
}

SurfaceField sample_expression_surface(const Grid& grid, const Expression& e, double t) {
  SurfaceField out(grid, 0.0);
  if (e.empty()) return out;
  for (std::size_t j = 0; j < grid.ntheta(); ++j)
    out[j] = e.eval(Bindings::polar(grid.radius(), grid.angle(j), t));
  return out;
}

}  // namespace

Stepper::Stepper(const Grid& grid, ProblemVariant variant, StepperConfig config)
    : grid_(grid),
      variant_(variant),
      config_(std::move(config)),
      bulk_(config_.potentials.bulk_graph, config_.lambda),
      surface_(config_.potentials.surface_graph, config_.lambda),
      n_cells_(grid.cell_count()),
      n_faces_(grid.face_count()) {
  variant_.validate();
  if (!(config_.dt > 0.0) || !std::isfinite(config_.dt))
    throw ConfigError(fmt::format("dt must be positive, got {}", config_.dt));
  full_ = make_layout(variant_.has_bulk_mu());
  const bool eliminate =
      variant_.has_bulk_mu() && variant_.viscosity() == 0.0 && config_.eliminate_bulk_mu;
  solve_ = eliminate ? make_layout(false) : full_;
  solve_.dtn = eliminate;
  if (eliminate) build_dtn();
  time_dependent_forcing_ = config_.f.uses(Expression::Variable::T) ||
                            config_.f_gamma.uses(Expression::Variable::T);
}

Stepper::Layout Stepper::make_layout(bool mu_block) const {
  Layout l;
  l.mu_block = mu_block;
  l.ug = n_cells_;
  l.mu = l.ug + n_faces_;
  l.mug = l.mu + (mu_block ? n_cells_ : 0);
  l.size = l.mug + n_faces_;
  return l;
}

void Stepper::build_dtn() {
  // Rotating the grid by one face permutes cells without changing any
  // coefficient, so the extension operator is circulant in the angular index.
  SurfaceField e0(grid_, 0.0);
  e0[0] = 1.0;
  unit_extension_ = harmonic_extension(e0).values;
  const std::size_t last = grid_.cell(grid_.nr() - 1, 0);
  const double tout = outer_transmissibility(grid_);
  dtn_row_.assign(n_faces_, 0.0);
  for (std::size_t d = 0; d < n_faces_; ++d)
    dtn_row_[d] = tout * ((d == 0 ? 1.0 : 0.0) - unit_extension_[last + d]);
}

BulkField Stepper::extend_by_symmetry(const SurfaceField& trace) const {
  const std::size_t nt = grid_.ntheta();
  BulkField out(grid_, 0.0);
  for (std::size_t i = 0; i < grid_.nr(); ++i) {
    const double* h = unit_extension_.data() + grid_.cell(i, 0);
    for (std::size_t j = 0; j < nt; ++j) {
      double sum = 0.0;
      for (std::size_t k = 0; k < nt; ++k) sum += trace[k] * h[j >= k ? j - k : j + nt - k];
      out[grid_.cell(i, j)] = sum;
    }
  }
  return out;
}

std::size_t Stepper::unknowns() const noexcept { return full_.size; }

Vector Stepper::pack(const Layout& l, const CoupledState& s) const {
  check_size(grid_, s.u);
  check_size(grid_, s.uGamma);
  check_size(grid_, s.muGamma);
  if (l.mu_block) check_size(grid_, s.mu);
  Vector x(l.size);
  std::copy(s.u.values.begin(), s.u.values.end(), x.begin());
  std::copy(s.uGamma.values.begin(), s.uGamma.values.end(), x.begin() + l.ug);
  if (l.mu_block) std::copy(s.mu.values.begin(), s.mu.values.end(), x.begin() + l.mu);
  std::copy(s.muGamma.values.begin(), s.muGamma.values.end(), x.begin() + l.mug);
  return x;
}

CoupledState Stepper::unpack(const Layout& l, std::span<const double> x, double t) const {
  if (x.size() != l.size) throw std::invalid_argument("unpack: vector size mismatch");
  CoupledState s;
  s.t = t;
  s.u.values.assign(x.begin(), x.begin() + l.ug);
  s.uGamma.values.assign(x.begin() + l.ug, x.begin() + l.mu);
  if (l.mu_block) s.mu.values.assign(x.begin() + l.mu, x.begin() + l.mug);
  s.muGamma.values.assign(x.begin() + l.mug, x.end());
  return s;
}

Vector Stepper::pack(const CoupledState& s) const { return pack(full_, s); }

CoupledState Stepper::unpack(std::span<const double> x, double t) const { return unpack(full_, x, t); }

const Stepper::Forcing& Stepper::forcing_at(double t) const {
  if (cached_forcing_ && (!time_dependent_forcing_ || cached_time_ == t)) return *cached_forcing_;
  cached_forcing_ = Forcing{sample_expression_bulk(grid_, config_.f, t),
                            sample_expression_surface(grid_, config_.f_gamma, t)};
  cached_time_ = t;
  return *cached_forcing_;
}

void Stepper::residual_into(const Layout& l, const Vector& prev, std::span<const double> x,
                            const Forcing& data, Vector& out) const {
  const std::size_t nr = grid_.nr();
  const std::size_t nt = grid_.ntheta();
  const double inv_dt = 1.0 / config_.dt;
  const bool with_mu = l.mu_block;
  const double eps = variant_.bulk_weight();
  const double kappa = variant_.surface_diffusion();
  const double tau = variant_.viscosity();
  const double s = grid_.face_length();
  const double tout = outer_transmissibility(grid_);
  const auto& pb = config_.potentials.bulk_pi;
  const auto& ps = config_.potentials.surface_pi;
  out.assign(x.size(), 0.0);

  // out[c] collects -sum T (u_nb - u_c); out[mu + c] collects -eps sum T (mu_nb - mu_c).
  auto add_flux = [&](std::size_t a, std::size_t b, double t) {
    const double q = t * (x[b] - x[a]);
    out[a] -= q;
    out[b] += q;
    if (with_mu) {
      const double qm = eps * t * (x[l.mu + b] - x[l.mu + a]);
      out[l.mu + a] -= qm;
      out[l.mu + b] += qm;
    }
  };
  for (std::size_t i = 0; i < nr; ++i) {
    const double ta = angular_transmissibility(grid_, i);
    for (std::size_t j = 0; j < nt; ++j) add_flux(grid_.cell(i, j), grid_.cell(i, grid_.next_angle(j)), ta);
  }
  for (std::size_t i = 0; i + 1 < nr; ++i) {
    const double tr = radial_transmissibility(grid_, i);
    for (std::size_t j = 0; j < nt; ++j) add_flux(grid_.cell(i, j), grid_.cell(i + 1, j), tr);
  }

  for (std::size_t i = 0; i < nr; ++i) {
    const double w = grid_.volume(i);
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t c = grid_.cell(i, j);
      const double u = x[c];
      const double dudt = (u - prev[c]) * inv_dt;
      double local = dudt + bulk_.value(u) + pb.value(u) - data.f[c];
      if (with_mu) {
        local -= tau * x[l.mu + c];
        out[l.mu + c] += w * tau * dudt;
      }
      out[c] += w * local;
    }
  }

  for (std::size_t j = 0; j < nt; ++j) {
    const std::size_t last = grid_.cell(nr - 1, j);
    const std::size_t ug = l.ug + j;
    const std::size_t mg = l.mug + j;
    const std::size_t jp = grid_.next_angle(j), jm = grid_.prev_angle(j);
    const double ugv = x[ug];
    // The outer face of the last ring couples u to uGamma and mu to muGamma.
    out[last] -= tout * (ugv - x[last]);
    const double lb_mu = (x[l.mug + jp] - 2.0 * x[mg] + x[l.mug + jm]) / s;
    double row = s * (ugv - prev[ug]) * inv_dt - lb_mu;
    if (with_mu) {
      const double qm = eps * tout * (x[mg] - x[l.mu + last]);
      out[l.mu + last] -= qm;
      row += qm;
    } else if (l.dtn) {
      double flux = 0.0;
      for (std::size_t k = 0; k < nt; ++k) flux += dtn_row_[j >= k ? j - k : j + nt - k] * x[l.mug + k];
      row += eps * flux;
    }
    out[ug] = row;

    const double dn_u = (ugv - x[last]) * 2.0 / grid_.hr();
    const double lb_u = (x[l.ug + jp] - 2.0 * ugv + x[l.ug + jm]) / (s * s);
    out[mg] = s * (x[mg] - tau * (ugv - prev[ug]) * inv_dt - dn_u + kappa * lb_u -
                   surface_.value(ugv) - ps.value(ugv) + data.f_gamma[j]);
  }
}

Vector Stepper::assemble_residual(const CoupledState& prev, const CoupledState& guess) const {
  const Vector p = pack(full_, prev);
  const Vector x = pack(full_, guess);
  Vector out;
  residual_into(full_, p, x, forcing_at(guess.t), out);
  return out;
}

SparseMatrix Stepper::jacobian_at(const Layout& l, std::span<const double> x) const {
  const std::size_t nr = grid_.nr();
  const std::size_t nt = grid_.ntheta();
  const double inv_dt = 1.0 / config_.dt;
  const bool with_mu = l.mu_block;
  const double eps = variant_.bulk_weight();
  const double kappa = variant_.surface_diffusion();
  const double tau = variant_.viscosity();
  const double s = grid_.face_length();
  const double tout = outer_transmissibility(grid_);
  const auto& pb = config_.potentials.bulk_pi;
  const auto& ps = config_.potentials.surface_pi;

  std::vector<Triplet> t;
  t.reserve((with_mu ? 12 : 6) * n_cells_ + (14 + (l.dtn ? nt : 0)) * n_faces_);

  auto couple = [&](std::size_t a, std::size_t b, double tr) {
    t.push_back({a, a, tr});
    t.push_back({a, b, -tr});
    t.push_back({b, b, tr});
    t.push_back({b, a, -tr});
    if (with_mu) {
      const std::size_t ma = l.mu + a, mb = l.mu + b;
      t.push_back({ma, ma, eps * tr});
      t.push_back({ma, mb, -eps * tr});
      t.push_back({mb, mb, eps * tr});
      t.push_back({mb, ma, -eps * tr});
    }
  };
  for (std::size_t i = 0; i < nr; ++i) {
    const double ta = angular_transmissibility(grid_, i);
    for (std::size_t j = 0; j < nt; ++j) couple(grid_.cell(i, j), grid_.cell(i, grid_.next_angle(j)), ta);
  }
  for (std::size_t i = 0; i + 1 < nr; ++i) {
    const double tr = radial_transmissibility(grid_, i);
    for (std::size_t j = 0; j < nt; ++j) couple(grid_.cell(i, j), grid_.cell(i + 1, j), tr);
  }
  for (std::size_t i = 0; i < nr; ++i) {
    const double w = grid_.volume(i);
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t c = grid_.cell(i, j);
      const double u = x[c];
      t.push_back({c, c, w * (inv_dt + bulk_.slope(u) + pb.slope(u))});
      if (with_mu) {
        t.push_back({c, l.mu + c, -w * tau});
        t.push_back({l.mu + c, c, w * tau * inv_dt});
      }
    }
  }
  const double two_hr = 2.0 / grid_.hr();
  for (std::size_t j = 0; j < nt; ++j) {
    const std::size_t last = grid_.cell(nr - 1, j);
    const std::size_t ug = l.ug + j, mg = l.mug + j;
    const std::size_t jp = grid_.next_angle(j), jm = grid_.prev_angle(j);
    t.push_back({last, last, tout});
    t.push_back({last, ug, -tout});

    t.push_back({ug, ug, s * inv_dt});
    t.push_back({ug, mg, 2.0 / s});
    t.push_back({ug, l.mug + jp, -1.0 / s});
    t.push_back({ug, l.mug + jm, -1.0 / s});
    if (with_mu) {
      const std::size_t ml = l.mu + last;
      t.push_back({ug, mg, eps * tout});
      t.push_back({ug, ml, -eps * tout});
      t.push_back({ml, ml, eps * tout});
      t.push_back({ml, mg, -eps * tout});
    } else if (l.dtn) {
      for (std::size_t k = 0; k < nt; ++k)
        t.push_back({ug, l.mug + k, eps * dtn_row_[j >= k ? j - k : j + nt - k]});
    }

    const double ugv = x[ug];
    t.push_back({mg, mg, s});
    t.push_back({mg, ug,
                 s * (-tau * inv_dt - two_hr - 2.0 * kappa / (s * s) - surface_.slope(ugv) -
                      ps.slope(ugv))});
    t.push_back({mg, l.ug + jp, kappa / s});
    t.push_back({mg, l.ug + jm, kappa / s});
    t.push_back({mg, last, s * two_hr});
  }
  return assemble(t, l.size);
}

SparseMatrix Stepper::assemble_jacobian(const CoupledState& /*prev*/, const CoupledState& guess) const {
  return jacobian_at(full_, pack(full_, guess));
}

LinearSolution Stepper::solve_linear(const SparseMatrix& a, std::span<const double> b) {
  if (config_.linear_solver == LinearSolverKind::Direct) return {direct_.solve(a, b), 1};
  KrylovResult r = solve_bicgstab(a, b, config_.linear_tol, config_.linear_maxit);
  return {std::move(r.x), r.iterations};
}

Stepper::StepResult Stepper::step(const CoupledState& prev) {
  const double t_next = prev.t + config_.dt;
  const Vector p = pack(solve_, prev);
  const Forcing& data = forcing_at(t_next);
  Vector x = p;
  Vector scratch;
  auto residual = [&](std::span<const double> y) {
    residual_into(solve_, p, y, data, scratch);
    for (double v : scratch)
      if (!std::isfinite(v)) throw std::domain_error("non-finite residual");
    return scratch;
  };
  auto jacobian = [&](std::span<const double> y) { return jacobian_at(solve_, y); };
  auto linear = [&](const SparseMatrix& a, std::span<const double> b) { return solve_linear(a, b); };

  NewtonReport report;
  try {
    report = newton_solve(residual, jacobian, x, config_.newton, linear);
  } catch (const SolverError& e) {
    throw SolverError(fmt::format(
        "step to t = {:.6g} failed ({}): {}; try a smaller dt or a larger lambda", t_next,
        variant_.name(), e.what()));
  }
  CoupledState next = unpack(solve_, x, t_next);
  if (solve_.dtn) next.mu = extend_by_symmetry(next.muGamma);
  return {std::move(next), report};
}

BulkField Stepper::harmonic_extension(const SurfaceField& trace) {
  check_size(grid_, trace);
  const std::size_t nr = grid_.nr();
  const std::size_t nt = grid_.ntheta();
  std::vector<Triplet> t;
  auto couple = [&](std::size_t a, std::size_t b, double tr) {
    t.push_back({a, a, tr});
    t.push_back({a, b, -tr});
    t.push_back({b, b, tr});
    t.push_back({b, a, -tr});
  };
  for (std::size_t i = 0; i < nr; ++i) {
    const double ta = angular_transmissibility(grid_, i);
    for (std::size_t j = 0; j < nt; ++j) couple(grid_.cell(i, j), grid_.cell(i, grid_.next_angle(j)), ta);
  }
  for (std::size_t i = 0; i + 1 < nr; ++i) {
    const double tr = radial_transmissibility(grid_, i);
    for (std::size_t j = 0; j < nt; ++j) couple(grid_.cell(i, j), grid_.cell(i + 1, j), tr);
  }
  const double tout = outer_transmissibility(grid_);
  Vector rhs(n_cells_, 0.0);
  for (std::size_t j = 0; j < nt; ++j) {
    const std::size_t c = grid_.cell(nr - 1, j);
    t.push_back({c, c, tout});
    rhs[c] = tout * trace[j];
  }
  return BulkField(laplace_solver_.solve(assemble(t, n_cells_), rhs));
}

CoupledState Stepper::initial_state(const Expression& u0, const Expression* u0_gamma) {
  if (u0.empty()) throw ConfigError("initial datum u0 is empty");
  CoupledState s;
  s.t = 0.0;
  try {
    s.u = sample_expression_bulk(grid_, u0, 0.0);
    s.uGamma = sample_expression_surface(grid_, u0, 0.0);
    if (u0_gamma != nullptr && !u0_gamma->empty()) {
      const SurfaceField g = sample_expression_surface(grid_, *u0_gamma, 0.0);
      for (std::size_t j = 0; j < grid_.ntheta(); ++j) {
        if (std::abs(g[j] - s.uGamma[j]) > 1e-12)
          throw ConfigError(fmt::format(
              "u0_gamma is not the trace of u0: at theta = {:.6g} u0(R) = {:.17g} but u0_gamma = {:.17g}",
              grid_.angle(j), s.uGamma[j], g[j]));
      }
      s.uGamma = g;
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("initial data evaluation failed: ") + e.what());
  }

  const Forcing& data = forcing_at(0.0);
  const SurfaceField dn = normal_derivative(grid_, s.u, s.uGamma);
  const SurfaceField lb = laplace_beltrami(grid_, s.uGamma);
  const double kappa = variant_.surface_diffusion();
  s.muGamma = SurfaceField(grid_, 0.0);
  for (std::size_t j = 0; j < grid_.ntheta(); ++j) {
    const double z = s.uGamma[j];
    s.muGamma[j] = dn[j] - kappa * lb[j] + surface_.value(z) +
                   config_.potentials.surface_pi.value(z) - data.f_gamma[j];
  }
  if (variant_.has_bulk_mu()) s.mu = harmonic_extension(s.muGamma);
  // Forcing for t > 0 is resampled on demand.
  if (time_dependent_forcing_) cached_forcing_.reset();
  return s;
}

std::size_t step_count(double final_time, double dt) {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(final_time >= 0.0)) throw ConfigError("final time must be non-negative");
  const double ratio = final_time / dt;
  const double n = std::round(ratio);
  if (std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio))
    throw ConfigError(fmt::format("T = {} is not an integer multiple of dt = {}", final_time, dt));
  return static_cast<std::size_t>(n);
}

RunResult run(Stepper& stepper, const CoupledState& initial, double final_time,
              const std::vector<Observer*>& observers) {
  const double dt = stepper.config().dt;
  const std::size_t n = step_count(final_time, dt);
  RunResult result;
  result.diagnostics.reserve(n);
  for (Observer* o : observers) o->start(initial);
  CoupledState current = initial;
  for (std::size_t k = 0; k < n; ++k) {
    CoupledState prev = current;
    prev.t = static_cast<double>(k) * dt;
    Stepper::StepResult r = stepper.step(prev);
    r.state.t = static_cast<double>(k + 1) * dt;
    for (Observer* o : observers) o->step(current, r.state);
    result.diagnostics.push_back(
        {r.state.t, r.report.iterations, r.report.linear_iterations, r.report.residual});
    current = std::move(r.state);
  }
  result.final_state = std::move(current);
  return result;
}

}  // namespace dbclab
