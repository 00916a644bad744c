#include "dbclab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dbclab/operators.hpp"

namespace dbclab {

double l2_bulk(const Grid& grid, const BulkField& v) {
  check_size(grid, v);
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.nr(); ++i) {
    double ring = 0.0;
    for (std::size_t j = 0; j < grid.ntheta(); ++j) ring += v[grid.cell(i, j)] * v[grid.cell(i, j)];
    sum += ring * grid.volume(i);
  }
  return std::sqrt(sum);
}

double l2_surface(const Grid& grid, const SurfaceField& z) {
  check_size(grid, z);
  double sum = 0.0;
  for (double x : z.values) sum += x * x;
  return std::sqrt(sum * grid.face_length());
}

double grad_bulk(const Grid& grid, const BulkField& v, const SurfaceField& vGamma) {
  return std::sqrt(std::max(0.0, dirichlet_form(grid, v, vGamma, v, vGamma)));
}

double grad_surface(const Grid& grid, const SurfaceField& z) {
  return std::sqrt(std::max(0.0, surface_dirichlet_form(grid, z, z)));
}

double h1_bulk(const Grid& grid, const BulkField& v, const SurfaceField& vGamma) {
  const double a = l2_bulk(grid, v);
  const double g = grad_bulk(grid, v, vGamma);
  return std::sqrt(a * a + g * g);
}

double h1_surface(const Grid& grid, const SurfaceField& z) {
  const double a = l2_surface(grid, z);
  const double g = grad_surface(grid, z);
  return std::sqrt(a * a + g * g);
}

double vdual_surface(const Grid& grid, const SurfaceField& z) {
  check_size(grid, z);
  const double mean = surface_mean(grid, z);
  SurfaceField z0 = z;
  double zmax = 0.0;
  for (double& v : z0.values) {
    v -= mean;
    zmax = std::max(zmax, std::abs(v));
  }
  double dual = 0.0;
  if (zmax > 0.0) {
    // Remove the round-off mean left by the subtraction before inverting.
    const double resid = surface_mean(grid, z0);
    for (double& v : z0.values) v -= resid;
    const SurfaceField y = inverse_surface_laplacian(grid, z0);
    for (std::size_t j = 0; j < z0.size(); ++j) dual += z0[j] * y[j];
    dual *= grid.face_length();
  }
  return std::sqrt(std::max(0.0, dual) + grid.boundary_length() * mean * mean);
}

void NormAccumulator::add(double value, double dt) {
  if (!std::isfinite(value)) throw std::domain_error("NormAccumulator: non-finite sample");
  max_ = std::max(max_, std::abs(value));
  sum_sq_ += value * value * dt;
  ++count_;
}

double NormAccumulator::l2() const noexcept { return std::sqrt(sum_sq_); }

void Convolution::add(std::span<const double> g, double dt) {
  if (sum_.empty()) sum_.assign(g.size(), 0.0);
  if (g.size() != sum_.size()) throw std::invalid_argument("Convolution: field size changed");
  for (std::size_t k = 0; k < g.size(); ++k) sum_[k] += g[k] * dt;
}

double energy(const Grid& grid, const CoupledState& state, const PotentialPair& pair, double kappa,
              double lambda) {
  check_size(grid, state.u);
  check_size(grid, state.uGamma);
  const RegularizedGraph bulk(pair.bulk_graph, lambda);
  const RegularizedGraph surf(pair.surface_graph, lambda);
  double e = 0.5 * dirichlet_form(grid, state.u, state.uGamma, state.u, state.uGamma);
  for (std::size_t i = 0; i < grid.nr(); ++i) {
    double ring = 0.0;
    for (std::size_t j = 0; j < grid.ntheta(); ++j) {
      const double u = state.u[grid.cell(i, j)];
      ring += bulk.potential(u) + pair.bulk_pi.antiderivative(u);
    }
    e += ring * grid.volume(i);
  }
  e += 0.5 * kappa * surface_dirichlet_form(grid, state.uGamma, state.uGamma);
  double surface = 0.0;
  for (double z : state.uGamma.values) surface += surf.potential(z) + pair.surface_pi.antiderivative(z);
  return e + surface * grid.face_length();
}

}  // namespace dbclab
