#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace dbclab {

/// Polar finite-volume layout of the disk of radius R and its boundary circle.
///
/// Cells are cell-centered in radius, r_i = (i + 1/2) hr, and uniform periodic
/// in angle, theta_j = (j + 1/2) htheta.  Bulk cells are stored row-major in
/// the radial index: cell (i, j) lives at i * ntheta + j.  Boundary face j is
/// the outer edge of cell (nr - 1, j).
class Grid {
 public:
  Grid(std::size_t nr, std::size_t ntheta, double radius);

  std::size_t nr() const noexcept { return nr_; }
  std::size_t ntheta() const noexcept { return ntheta_; }
  std::size_t cell_count() const noexcept { return nr_ * ntheta_; }
  std::size_t face_count() const noexcept { return ntheta_; }
  double radius() const noexcept { return radius_; }
  double hr() const noexcept { return hr_; }
  double htheta() const noexcept { return htheta_; }

  std::size_t cell(std::size_t i, std::size_t j) const noexcept { return i * ntheta_ + j; }
  std::size_t next_angle(std::size_t j) const noexcept { return j + 1 == ntheta_ ? 0 : j + 1; }
  std::size_t prev_angle(std::size_t j) const noexcept { return j == 0 ? ntheta_ - 1 : j - 1; }

  double center_radius(std::size_t i) const noexcept { return (static_cast<double>(i) + 0.5) * hr_; }
  double face_radius(std::size_t i) const noexcept { return static_cast<double>(i) * hr_; }
  double angle(std::size_t j) const noexcept { return (static_cast<double>(j) + 0.5) * htheta_; }

  /// Cell volume w_ij = r_i hr htheta (independent of j).
  double volume(std::size_t i) const noexcept { return volumes_[i]; }
  /// Boundary face length s_j = R htheta.
  double face_length() const noexcept { return radius_ * htheta_; }
  double boundary_length() const noexcept;
  double area() const noexcept;

 private:
  std::size_t nr_;
  std::size_t ntheta_;
  double radius_;
  double hr_;
  double htheta_;
  std::vector<double> volumes_;
};

/// Throws std::invalid_argument unless nr >= 2, ntheta >= 4 and even, radius > 0.
Grid build_grid(std::size_t nr, std::size_t ntheta, double radius);

/// Cell samples of a bulk quantity (u, mu, f, ...).
struct BulkField {
  std::vector<double> values;

  BulkField() = default;
  explicit BulkField(std::vector<double> v) : values(std::move(v)) {}
  BulkField(const Grid& grid, double fill) : values(grid.cell_count(), fill) {}

  std::size_t size() const noexcept { return values.size(); }
  double& operator[](std::size_t k) noexcept { return values[k]; }
  double operator[](std::size_t k) const noexcept { return values[k]; }
};

/// Boundary-face samples of a surface quantity (u_Gamma, mu_Gamma, f_Gamma, ...).
struct SurfaceField {
  std::vector<double> values;

  SurfaceField() = default;
  explicit SurfaceField(std::vector<double> v) : values(std::move(v)) {}
  SurfaceField(const Grid& grid, double fill) : values(grid.face_count(), fill) {}

  std::size_t size() const noexcept { return values.size(); }
  double& operator[](std::size_t k) noexcept { return values[k]; }
  double operator[](std::size_t k) const noexcept { return values[k]; }
};

BulkField operator-(const BulkField& a, const BulkField& b);
SurfaceField operator-(const SurfaceField& a, const SurfaceField& b);
BulkField operator*(double s, const BulkField& a);
SurfaceField operator*(double s, const SurfaceField& a);

void check_size(const Grid& grid, const BulkField& f);
void check_size(const Grid& grid, const SurfaceField& f);

/// values_ij = g(r_i, theta_j); throws std::domain_error naming the cell on a non-finite sample.
BulkField sample_bulk(const Grid& grid, const std::function<double(double r, double theta)>& g);
/// values_j = g(theta_j) on boundary faces.
SurfaceField sample_surface(const Grid& grid, const std::function<double(double theta)>& g);

/// Sum of v_ij w_ij.
double integrate(const Grid& grid, const BulkField& v);
/// Sum of z_j s_j.
double integrate(const Grid& grid, const SurfaceField& z);

}  // namespace dbclab
