#pragma once

#include "dbclab/geometry.hpp"

namespace dbclab {

// Flux-form operators on a Grid.  They are built from a single set of
// transmissibilities so that the discrete Green identity
//
//   sum_ij (lap u)_ij v_ij w_ij + a(u, v) = sum_j (dn u)_j vGamma_j s_j
//
// holds to round-off for every (u, uGamma, v, vGamma).

/// Transmissibility of the radial face between ring i and ring i + 1 (rho_{i+1} htheta / hr).
double radial_transmissibility(const Grid& grid, std::size_t i) noexcept;
/// Transmissibility of the angular faces of ring i (hr / (r_i htheta)).
double angular_transmissibility(const Grid& grid, std::size_t i) noexcept;
/// Transmissibility of an outer boundary face, R htheta / (hr / 2).
double outer_transmissibility(const Grid& grid) noexcept;

/// Bulk Laplacian with Dirichlet trace uGamma imposed through the outer faces.
BulkField laplacian_bulk(const Grid& grid, const BulkField& u, const SurfaceField& uGamma);

/// a_h(u, v): sum over faces of T_f times the two jumps.  Symmetric, positive semidefinite.
double dirichlet_form(const Grid& grid, const BulkField& u, const SurfaceField& uGamma,
                      const BulkField& v, const SurfaceField& vGamma);

/// (uGamma_j - u_{nr-1,j}) / (hr / 2).
SurfaceField normal_derivative(const Grid& grid, const BulkField& u, const SurfaceField& uGamma);

/// Periodic second difference on the boundary circle, scaled by (R htheta)^-2.
SurfaceField laplace_beltrami(const Grid& grid, const SurfaceField& z);

/// Companion form of laplace_beltrami: sum_j (lb z)_j w_j s_j = -surface_dirichlet_form(z, w).
double surface_dirichlet_form(const Grid& grid, const SurfaceField& z, const SurfaceField& w);

/// (sum_j z_j s_j) / |Gamma|.
double surface_mean(const Grid& grid, const SurfaceField& z);

/// Solves -lb(y) = z for zero-mean y.  Throws std::invalid_argument when
/// |mean(z)| exceeds 1e-12 max|z|, since the periodic problem has no solution then.
SurfaceField inverse_surface_laplacian(const Grid& grid, const SurfaceField& z);

}  // namespace dbclab
