#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dbclab/forcing.hpp"
#include "dbclab/geometry.hpp"
#include "dbclab/linalg.hpp"
#include "dbclab/potentials.hpp"

namespace dbclab {

/// Which of the four coupled systems is stepped.
///
///   FullEpsKappa  bulk Laplace equation for mu (weight eps), surface diffusion kappa,
///                 optional viscous regularization tau
///   EpsLimit      kappa = 0
///   KappaLimit    no bulk chemical potential; surface Cahn-Hilliard with kappa
///   DoubleLimit   no bulk chemical potential, kappa = 0
struct ProblemVariant {
  enum class Kind { FullEpsKappa, EpsLimit, KappaLimit, DoubleLimit };

  Kind kind = Kind::DoubleLimit;
  double eps = 0.0;
  double kappa = 0.0;
  double tau = 0.0;

  static ProblemVariant full(double eps, double kappa, double tau = 0.0) {
    return {Kind::FullEpsKappa, eps, kappa, tau};
  }
  static ProblemVariant eps_limit(double eps) { return {Kind::EpsLimit, eps, 0.0, 0.0}; }
  static ProblemVariant kappa_limit(double kappa) { return {Kind::KappaLimit, 0.0, kappa, 0.0}; }
  static ProblemVariant double_limit() { return {Kind::DoubleLimit, 0.0, 0.0, 0.0}; }

  bool has_bulk_mu() const noexcept {
    return kind == Kind::FullEpsKappa || kind == Kind::EpsLimit;
  }
  /// Weight of the bulk chemical potential flux (0 when mu is absent).
  double bulk_weight() const noexcept { return has_bulk_mu() ? eps : 0.0; }
  /// Surface diffusion coefficient (0 for the kappa -> 0 limits).
  double surface_diffusion() const noexcept {
    return (kind == Kind::FullEpsKappa || kind == Kind::KappaLimit) ? kappa : 0.0;
  }
  double viscosity() const noexcept { return kind == Kind::FullEpsKappa ? tau : 0.0; }

  /// eps, kappa in (0, 1] where present, tau in [0, 1]; throws ConfigError.
  void validate() const;
  std::string name() const;
};

ProblemVariant parse_variant(const std::string& name, double eps, double kappa, double tau);

/// Unknowns at one time level.  mu is empty for variants without a bulk chemical potential.
struct CoupledState {
  double t = 0.0;
  BulkField u;
  SurfaceField uGamma;
  BulkField mu;
  SurfaceField muGamma;

  bool has_mu() const noexcept { return !mu.values.empty(); }
};

enum class LinearSolverKind { Direct, BiCGStab };

struct StepperConfig {
  double dt = 1e-3;
  double lambda = 0.1;
  NewtonOptions newton{};
  double linear_tol = 1e-12;
  std::size_t linear_maxit = 5000;
  LinearSolverKind linear_solver = LinearSolverKind::Direct;
  /// With tau = 0 the bulk chemical potential is the harmonic extension of
  /// muGamma; eliminate it through the Dirichlet-to-Neumann map during Newton
  /// and reconstruct it after each step.
  bool eliminate_bulk_mu = true;
  PotentialPair potentials{};
  Expression f;        // empty: zero
  Expression f_gamma;  // empty: zero
};

/// Implicit-Euler stepper with analytic-Jacobian Newton for one variant on one grid.
///
/// Unknowns are packed as [u cells | uGamma faces | mu cells (if any) | muGamma faces].
/// Residual rows are the cell/face-integrated equations (bulk rows carry the
/// cell volume, surface rows the face length):
///
///   u      w (u - u_old)/dt - w lap(u) + w (beta(u) + pi(u) - f - tau mu)
///   uGamma s (uGamma - uGamma_old)/dt + eps s dn(mu) - s lb(muGamma)
///   mu     w tau (u - u_old)/dt - eps w lap(mu)
///   muGamma s (muGamma - tau (uGamma - uGamma_old)/dt - dn(u) + kappa lb(uGamma)
///              - beta_Gamma(uGamma) - pi_Gamma(uGamma) + f_Gamma)
///
/// with f, f_Gamma sampled at the new time level.  assemble_residual and
/// assemble_jacobian always use this monolithic layout; step() may solve the
/// equivalent reduced system (see StepperConfig::eliminate_bulk_mu).  A Stepper
/// owns its linear solver workspace and must not be shared across threads.
class Stepper {
 public:
  Stepper(const Grid& grid, ProblemVariant variant, StepperConfig config);

  const Grid& grid() const noexcept { return grid_; }
  const ProblemVariant& variant() const noexcept { return variant_; }
  const StepperConfig& config() const noexcept { return config_; }
  const RegularizedGraph& bulk_graph() const noexcept { return bulk_; }
  const RegularizedGraph& surface_graph() const noexcept { return surface_; }

  /// u from u0 on cells; uGamma from u0 at r = R unless u0_gamma is given, in
  /// which case both must agree to 1e-12 on every face.  muGamma from the
  /// constitutive surface relation at t = 0 and mu as its discrete harmonic
  /// extension.  Throws ConfigError on incompatible traces or failed evaluation.
  CoupledState initial_state(const Expression& u0, const Expression* u0_gamma = nullptr);

  std::size_t unknowns() const noexcept;
  Vector pack(const CoupledState& s) const;
  CoupledState unpack(std::span<const double> x, double t) const;

  Vector assemble_residual(const CoupledState& prev, const CoupledState& guess) const;
  SparseMatrix assemble_jacobian(const CoupledState& prev, const CoupledState& guess) const;

  struct StepResult {
    CoupledState state;
    NewtonReport report;
  };
  /// One implicit Euler step; throws SolverError naming the time on Newton failure.
  StepResult step(const CoupledState& prev);

  /// Discrete harmonic extension of a trace: lap(v) = 0 with v|Gamma = trace.
  BulkField harmonic_extension(const SurfaceField& trace);

 private:
  struct Forcing {
    BulkField f;
    SurfaceField f_gamma;
  };
  struct Layout {
    bool mu_block = false;  // bulk mu carried as unknowns
    bool dtn = false;       // eps * DtN(muGamma) replaces the eliminated mu block
    std::size_t ug = 0, mu = 0, mug = 0, size = 0;
  };
  Layout make_layout(bool mu_block) const;
  Vector pack(const Layout& l, const CoupledState& s) const;
  CoupledState unpack(const Layout& l, std::span<const double> x, double t) const;
  const Forcing& forcing_at(double t) const;
  void residual_into(const Layout& l, const Vector& prev, std::span<const double> x,
                     const Forcing& data, Vector& out) const;
  SparseMatrix jacobian_at(const Layout& l, std::span<const double> x) const;
  LinearSolution solve_linear(const SparseMatrix& a, std::span<const double> b);
  void build_dtn();
  BulkField extend_by_symmetry(const SurfaceField& trace) const;

  Grid grid_;
  ProblemVariant variant_;
  StepperConfig config_;
  RegularizedGraph bulk_;
  RegularizedGraph surface_;
  std::size_t n_cells_;
  std::size_t n_faces_;
  Layout full_;
  Layout solve_;
  // Harmonic extension of the unit trace at face 0 and the circulant row of
  // the Dirichlet-to-Neumann map s dn(H e_0); only built when mu is eliminated.
  std::vector<double> unit_extension_;
  std::vector<double> dtn_row_;
  DirectSolver direct_;
  DirectSolver laplace_solver_;
  mutable std::optional<Forcing> cached_forcing_;
  mutable double cached_time_ = 0.0;
  bool time_dependent_forcing_ = true;
};

/// Receives the initial state and then every accepted step.
class Observer {
 public:
  virtual ~Observer() = default;
  virtual void start(const CoupledState&) {}
  virtual void step(const CoupledState& /*prev*/, const CoupledState& /*next*/) {}
};

struct StepDiagnostics {
  double t = 0.0;
  std::size_t newton_iterations = 0;
  std::size_t linear_iterations = 0;
  double residual = 0.0;
};

struct RunResult {
  CoupledState final_state;
  std::vector<StepDiagnostics> diagnostics;
};

/// N = T/dt steps from `initial` (T must be an integer multiple of dt to 1e-9
/// relative).  Step failures are rethrown with the failing time.
RunResult run(Stepper& stepper, const CoupledState& initial, double final_time,
              const std::vector<Observer*>& observers = {});

std::size_t step_count(double final_time, double dt);

}  // namespace dbclab
