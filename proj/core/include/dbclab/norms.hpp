#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dbclab/geometry.hpp"
#include "dbclab/potentials.hpp"
#include "dbclab/stepper.hpp"

namespace dbclab {

/// sqrt(sum v^2 w).
double l2_bulk(const Grid& grid, const BulkField& v);
/// sqrt(sum z^2 s).
double l2_surface(const Grid& grid, const SurfaceField& z);
/// sqrt(dirichlet_form(v, v)), the discrete L2 norm of the gradient (trace included).
double grad_bulk(const Grid& grid, const BulkField& v, const SurfaceField& vGamma);
/// sqrt(surface_dirichlet_form(z, z)).
double grad_surface(const Grid& grid, const SurfaceField& z);
double h1_bulk(const Grid& grid, const BulkField& v, const SurfaceField& vGamma);
double h1_surface(const Grid& grid, const SurfaceField& z);

/// Dual norm on the boundary: the H^-1 seminorm of the zero-mean part plus the
/// mean, sqrt(<z0, F^-1 z0> + |Gamma| mean^2).
double vdual_surface(const Grid& grid, const SurfaceField& z);

/// Time norms of a scalar sampled at t_1, ..., t_n.
class NormAccumulator {
 public:
  void add(double value, double dt);
  double linf() const noexcept { return max_; }
  double l2() const noexcept;
  std::size_t samples() const noexcept { return count_; }

 private:
  double max_ = 0.0;
  double sum_sq_ = 0.0;
  std::size_t count_ = 0;
};

/// Running time integral (1 * g)(t_n) = sum_{m=1..n} g(t_m) dt of a grid field.
class Convolution {
 public:
  void add(std::span<const double> g, double dt);
  const std::vector<double>& value() const noexcept { return sum_; }
  bool empty() const noexcept { return sum_.empty(); }

 private:
  std::vector<double> sum_;
};

/// Free energy with the regularized potentials at the given lambda:
/// a(u, u)/2 + sum w (beta_hat(u) + pi_hat(u)) + kappa/2 surface form + sum s (beta_hat_G + pi_hat_G).
double energy(const Grid& grid, const CoupledState& state, const PotentialPair& pair, double kappa,
              double lambda);

}  // namespace dbclab
