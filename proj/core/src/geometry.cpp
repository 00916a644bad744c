#include "dbclab/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dbclab {

Grid::Grid(std::size_t nr, std::size_t ntheta, double radius)
    : nr_(nr), ntheta_(ntheta), radius_(radius) {
  if (nr < 2) throw std::invalid_argument("grid: nr must be at least 2, got " + std::to_string(nr));
  if (ntheta < 4 || ntheta % 2 != 0)
    throw std::invalid_argument("grid: ntheta must be even and at least 4, got " + std::to_string(ntheta));
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw std::invalid_argument("grid: radius must be positive and finite");
  hr_ = radius_ / static_cast<double>(nr_);
  htheta_ = 2.0 * std::numbers::pi / static_cast<double>(ntheta_);
  volumes_.resize(nr_);
  for (std::size_t i = 0; i < nr_; ++i) volumes_[i] = center_radius(i) * hr_ * htheta_;
}

double Grid::boundary_length() const noexcept {
  return face_length() * static_cast<double>(ntheta_);
}

double Grid::area() const noexcept {
  double total = 0.0;
  for (double w : volumes_) total += w;
  return total * static_cast<double>(ntheta_);
}

Grid build_grid(std::size_t nr, std::size_t ntheta, double radius) {
  return Grid(nr, ntheta, radius);
}

BulkField operator-(const BulkField& a, const BulkField& b) {
  if (a.size() != b.size()) throw std::invalid_argument("bulk field size mismatch");
  BulkField out(a);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] -= b[k];
  return out;
}

SurfaceField operator-(const SurfaceField& a, const SurfaceField& b) {
  if (a.size() != b.size()) throw std::invalid_argument("surface field size mismatch");
  SurfaceField out(a);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] -= b[k];
  return out;
}

BulkField operator*(double s, const BulkField& a) {
  BulkField out(a);
  for (double& v : out.values) v *= s;
  return out;
}

SurfaceField operator*(double s, const SurfaceField& a) {
  SurfaceField out(a);
  for (double& v : out.values) v *= s;
  return out;
}

void check_size(const Grid& grid, const BulkField& f) {
  if (f.size() != grid.cell_count())
    throw std::invalid_argument("bulk field has " + std::to_string(f.size()) + " values, grid has " +
                                std::to_string(grid.cell_count()) + " cells");
}

void check_size(const Grid& grid, const SurfaceField& f) {
  if (f.size() != grid.face_count())
    throw std::invalid_argument("surface field has " + std::to_string(f.size()) +
                                " values, grid has " + std::to_string(grid.face_count()) + " faces");
}

BulkField sample_bulk(const Grid& grid, const std::function<double(double, double)>& g) {
  BulkField out(grid, 0.0);
  for (std::size_t i = 0; i < grid.nr(); ++i) {
    const double r = grid.center_radius(i);
    for (std::size_t j = 0; j < grid.ntheta(); ++j) {
      const double v = g(r, grid.angle(j));
      if (!std::isfinite(v))
        throw std::domain_error("non-finite bulk sample at cell (" + std::to_string(i) + ", " +
                                std::to_string(j) + ")");
      out[grid.cell(i, j)] = v;
    }
  }
  return out;
}

SurfaceField sample_surface(const Grid& grid, const std::function<double(double)>& g) {
  SurfaceField out(grid, 0.0);
  for (std::size_t j = 0; j < grid.ntheta(); ++j) {
    const double v = g(grid.angle(j));
    if (!std::isfinite(v))
      throw std::domain_error("non-finite surface sample at face " + std::to_string(j));
    out[j] = v;
  }
  return out;
}

double integrate(const Grid& grid, const BulkField& v) {
  check_size(grid, v);
  double total = 0.0;
  for (std::size_t i = 0; i < grid.nr(); ++i) {
    double ring = 0.0;
    for (std::size_t j = 0; j < grid.ntheta(); ++j) ring += v[grid.cell(i, j)];
    total += ring * grid.volume(i);
  }
  return total;
}

double integrate(const Grid& grid, const SurfaceField& z) {
  check_size(grid, z);
  double total = 0.0;
  for (double v : z.values) total += v;
  return total * grid.face_length();
}

}  // namespace dbclab
