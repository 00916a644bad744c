#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "dbclab/operators.hpp"

using namespace dbclab;

namespace {

BulkField random_bulk(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  BulkField f(g, 0.0);
  for (double& v : f.values) v = d(rng);
  return f;
}

SurfaceField random_surface(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  SurfaceField f(g, 0.0);
  for (double& v : f.values) v = d(rng);
  return f;
}

}  // namespace

TEST(Operators, GreenIdentityOnRandomFields) {
  std::mt19937_64 rng(7);
  for (auto [nr, nt] : {std::pair{4, 8}, {16, 32}, {32, 64}}) {
    const Grid g(nr, nt, 1.3);
    for (int k = 0; k < 20; ++k) {
      const BulkField u = random_bulk(g, rng), v = random_bulk(g, rng);
      const SurfaceField ug = random_surface(g, rng), vg = random_surface(g, rng);
      const BulkField lu = laplacian_bulk(g, u, ug);
      double lhs = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < g.nr(); ++i)
        for (std::size_t j = 0; j < g.ntheta(); ++j) {
          lhs += lu[g.cell(i, j)] * v[g.cell(i, j)] * g.volume(i);
          scale += std::abs(lu[g.cell(i, j)] * v[g.cell(i, j)] * g.volume(i));
        }
      const double form = dirichlet_form(g, u, ug, v, vg);
      const SurfaceField dn = normal_derivative(g, u, ug);
      double rhs = 0.0;
      for (std::size_t j = 0; j < g.ntheta(); ++j) rhs += dn[j] * vg[j] * g.face_length();
      EXPECT_LT(std::abs(lhs + form - rhs), 1e-12 * (scale + std::abs(form) + std::abs(rhs)));
    }
  }
}

TEST(Operators, DirichletFormIsSymmetricAndNonnegative) {
  std::mt19937_64 rng(3);
  const Grid g(6, 12, 1.0);
  const BulkField u = random_bulk(g, rng), v = random_bulk(g, rng);
  const SurfaceField ug = random_surface(g, rng), vg = random_surface(g, rng);
  EXPECT_NEAR(dirichlet_form(g, u, ug, v, vg), dirichlet_form(g, v, vg, u, ug), 1e-12);
  EXPECT_GE(dirichlet_form(g, u, ug, u, ug), 0.0);
  const BulkField c(g, 2.5);
  const SurfaceField cg(g, 2.5);
  EXPECT_EQ(dirichlet_form(g, c, cg, c, cg), 0.0);
}

TEST(Operators, LaplacianOfConstantsAndQuadratic) {
  const Grid g(16, 32, 1.0);
  const BulkField c(g, 3.0);
  const SurfaceField cg(g, 3.0);
  for (double x : laplacian_bulk(g, c, cg).values) EXPECT_NEAR(x, 0.0, 1e-10);

  // Flux differences of r^2 are exact on interior rings: lap(r^2) = 4.
  const BulkField r2 = sample_bulk(g, [](double r, double) { return r * r; });
  const SurfaceField r2g(g, 1.0);
  const BulkField l = laplacian_bulk(g, r2, r2g);
  for (std::size_t i = 0; i + 1 < g.nr(); ++i)
    for (std::size_t j = 0; j < g.ntheta(); ++j) EXPECT_NEAR(l[g.cell(i, j)], 4.0, 1e-9);
}

TEST(Operators, LaplaceBeltramiEigenvalues) {
  // Closed form of the periodic second difference on cos(theta): -(2 - 2 cos h) / (R h)^2.
  for (std::size_t nt : {8u, 16u, 64u}) {
    for (double radius : {1.0, 2.0}) {
      const Grid g(4, nt, radius);
      const double h = g.htheta();
      const double expected = -(2.0 - 2.0 * std::cos(h)) / (h * h * radius * radius);
      const SurfaceField c = sample_surface(g, [](double th) { return std::cos(th); });
      const SurfaceField lc = laplace_beltrami(g, c);
      for (std::size_t j = 0; j < nt; ++j) EXPECT_NEAR(lc[j], expected * c[j], 1e-12 / (radius * radius));
    }
  }
  const Grid g8(4, 8, 1.0);
  const double h = g8.htheta();
  EXPECT_NEAR(-(2.0 - 2.0 * std::cos(h)) / (h * h), -0.949641, 1e-6);
}

TEST(Operators, LaplaceBeltramiConservesAndIsSymmetric) {
  std::mt19937_64 rng(11);
  const Grid g(4, 32, 1.7);
  const SurfaceField z = random_surface(g, rng), w = random_surface(g, rng);
  const SurfaceField lz = laplace_beltrami(g, z);
  double sum = 0.0, pair = 0.0;
  for (std::size_t j = 0; j < g.ntheta(); ++j) {
    sum += lz[j] * g.face_length();
    pair += lz[j] * w[j] * g.face_length();
  }
  EXPECT_NEAR(sum, 0.0, 1e-12);
  EXPECT_NEAR(pair, -surface_dirichlet_form(g, z, w), 1e-11);
  EXPECT_EQ(laplace_beltrami(g, SurfaceField(g, 4.0)).values, std::vector<double>(g.ntheta(), 0.0));
}

TEST(Operators, InverseSurfaceLaplacian) {
  std::mt19937_64 rng(5);
  const Grid g(4, 48, 1.2);
  SurfaceField z = random_surface(g, rng);
  const double m = surface_mean(g, z);
  for (double& v : z.values) v -= m;
  const SurfaceField y = inverse_surface_laplacian(g, z);
  EXPECT_NEAR(surface_mean(g, y), 0.0, 1e-14);
  const SurfaceField back = laplace_beltrami(g, y);
  for (std::size_t j = 0; j < g.ntheta(); ++j) EXPECT_NEAR(-back[j], z[j], 1e-10);

  SurfaceField biased = z;
  for (double& v : biased.values) v += 0.1;
  EXPECT_THROW(inverse_surface_laplacian(g, biased), std::invalid_argument);
}

TEST(Operators, NormalDerivativeOfLinearProfile) {
  const Grid g(8, 16, 1.0);
  const BulkField x = sample_bulk(g, [](double r, double th) { return r * std::cos(th); });
  const SurfaceField xg = sample_surface(g, [](double th) { return std::cos(th); });
  const SurfaceField dn = normal_derivative(g, x, xg);
  for (std::size_t j = 0; j < g.ntheta(); ++j) EXPECT_NEAR(dn[j], std::cos(g.angle(j)), 1e-12);
}
