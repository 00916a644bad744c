#include "dbclab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace dbclab {

double radial_transmissibility(const Grid& grid, std::size_t i) noexcept {
  return grid.face_radius(i + 1) * grid.htheta() / grid.hr();
}

double angular_transmissibility(const Grid& grid, std::size_t i) noexcept {
  return grid.hr() / (grid.center_radius(i) * grid.htheta());
}

double outer_transmissibility(const Grid& grid) noexcept {
  return grid.face_length() / (0.5 * grid.hr());
}

BulkField laplacian_bulk(const Grid& grid, const BulkField& u, const SurfaceField& uGamma) {
  check_size(grid, u);
  check_size(grid, uGamma);
  const std::size_t nr = grid.nr();
  const std::size_t nt = grid.ntheta();
  BulkField flux(grid, 0.0);

  for (std::size_t i = 0; i < nr; ++i) {
    const double ta = angular_transmissibility(grid, i);
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t c = grid.cell(i, j);
      const std::size_t e = grid.cell(i, grid.next_angle(j));
      const double q = ta * (u[e] - u[c]);
      flux[c] += q;
      flux[e] -= q;
    }
  }
  for (std::size_t i = 0; i + 1 < nr; ++i) {
    const double tr = radial_transmissibility(grid, i);
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t c = grid.cell(i, j);
      const std::size_t n = grid.cell(i + 1, j);
      const double q = tr * (u[n] - u[c]);
      flux[c] += q;
      flux[n] -= q;
    }
  }
  const double tout = outer_transmissibility(grid);
  for (std::size_t j = 0; j < nt; ++j) {
    const std::size_t c = grid.cell(nr - 1, j);
    flux[c] += tout * (uGamma[j] - u[c]);
  }
  for (std::size_t i = 0; i < nr; ++i) {
    const double inv_w = 1.0 / grid.volume(i);
    for (std::size_t j = 0; j < nt; ++j) flux[grid.cell(i, j)] *= inv_w;
  }
  return flux;
}

double dirichlet_form(const Grid& grid, const BulkField& u, const SurfaceField& uGamma,
                      const BulkField& v, const SurfaceField& vGamma) {
  check_size(grid, u);
  check_size(grid, v);
  check_size(grid, uGamma);
  check_size(grid, vGamma);
  const std::size_t nr = grid.nr();
  const std::size_t nt = grid.ntheta();
  double total = 0.0;
  for (std::size_t i = 0; i < nr; ++i) {
    const double ta = angular_transmissibility(grid, i);
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t c = grid.cell(i, j);
      const std::size_t e = grid.cell(i, grid.next_angle(j));
      total += ta * (u[e] - u[c]) * (v[e] - v[c]);
    }
  }
  for (std::size_t i = 0; i + 1 < nr; ++i) {
    const double tr = radial_transmissibility(grid, i);
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t c = grid.cell(i, j);
      const std::size_t n = grid.cell(i + 1, j);
      total += tr * (u[n] - u[c]) * (v[n] - v[c]);
    }
  }
  const double tout = outer_transmissibility(grid);
  for (std::size_t j = 0; j < nt; ++j) {
    const std::size_t c = grid.cell(nr - 1, j);
    total += tout * (uGamma[j] - u[c]) * (vGamma[j] - v[c]);
  }
  return total;
}

SurfaceField normal_derivative(const Grid& grid, const BulkField& u, const SurfaceField& uGamma) {
  check_size(grid, u);
  check_size(grid, uGamma);
  SurfaceField out(grid, 0.0);
  const double inv_half = 2.0 / grid.hr();
  for (std::size_t j = 0; j < grid.ntheta(); ++j)
    out[j] = (uGamma[j] - u[grid.cell(grid.nr() - 1, j)]) * inv_half;
  return out;
}

SurfaceField laplace_beltrami(const Grid& grid, const SurfaceField& z) {
  check_size(grid, z);
  const double h = grid.face_length();
  const double scale = 1.0 / (h * h);
  SurfaceField out(grid, 0.0);
  for (std::size_t j = 0; j < grid.ntheta(); ++j)
    out[j] = (z[grid.next_angle(j)] - 2.0 * z[j] + z[grid.prev_angle(j)]) * scale;
  return out;
}

double surface_dirichlet_form(const Grid& grid, const SurfaceField& z, const SurfaceField& w) {
  check_size(grid, z);
  check_size(grid, w);
  double total = 0.0;
  for (std::size_t j = 0; j < grid.ntheta(); ++j) {
    const std::size_t n = grid.next_angle(j);
    total += (z[n] - z[j]) * (w[n] - w[j]);
  }
  return total / grid.face_length();
}

double surface_mean(const Grid& grid, const SurfaceField& z) {
  return integrate(grid, z) / grid.boundary_length();
}

SurfaceField inverse_surface_laplacian(const Grid& grid, const SurfaceField& z) {
  check_size(grid, z);
  double zmax = 0.0;
  for (double v : z.values) zmax = std::max(zmax, std::abs(v));
  const double mean = surface_mean(grid, z);
  if (std::abs(mean) > 1e-12 * zmax) {
    std::ostringstream msg;
    msg << "inverse_surface_laplacian: right-hand side has mean " << mean
        << "; the periodic problem needs a zero-mean datum";
    throw std::invalid_argument(msg.str());
  }

  // The constant null vector is removed by pinning y_0 = 0.  What remains is the
  // Dirichlet second difference on faces 1..n-1, solved by the Thomas algorithm;
  // the dropped row is implied by the zero-mean datum.  The mean is restored last.
  const std::size_t n = grid.ntheta();
  const double h = grid.face_length();
  const std::size_t m = n - 1;
  std::vector<double> c(m, 0.0), d(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) d[k] = z[k + 1] * h * h;
  // Tridiagonal (-1, 2, -1): forward sweep.
  double denom = 2.0;
  c[0] = -1.0 / denom;
  d[0] = d[0] / denom;
  for (std::size_t k = 1; k < m; ++k) {
    denom = 2.0 + c[k - 1];
    c[k] = -1.0 / denom;
    d[k] = (d[k] + d[k - 1]) / denom;
  }
  SurfaceField y(grid, 0.0);
  y[m] = d[m - 1];
  for (std::size_t k = m - 1; k-- > 0;) y[k + 1] = d[k] - c[k] * y[k + 2];
  const double ymean = surface_mean(grid, y);
  for (double& v : y.values) v -= ymean;
  return y;
}

}  // namespace dbclab
