#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "dbclab/norms.hpp"
#include "dbclab/stepper.hpp"

using namespace dbclab;
using std::numbers::pi;

TEST(Norms, ConstantsIntegrateExactly) {
  for (double R : {1.0, 0.5, 2.0}) {
    const Grid g(7, 12, R);
    const BulkField one = sample_bulk(g, [](double, double) { return 1.0; });
    const SurfaceField oneG = sample_surface(g, [](double) { return 1.0; });
    EXPECT_NEAR(l2_bulk(g, one), std::sqrt(pi) * R, 1e-13);
    EXPECT_NEAR(l2_surface(g, oneG), std::sqrt(2 * pi * R), 1e-13);
    EXPECT_NEAR(grad_bulk(g, one, oneG), 0.0, 1e-13);
    EXPECT_NEAR(grad_surface(g, oneG), 0.0, 1e-13);
    EXPECT_NEAR(h1_surface(g, oneG), std::sqrt(2 * pi * R), 1e-13);
    EXPECT_NEAR(vdual_surface(g, oneG), std::sqrt(2 * pi * R), 1e-12);
    EXPECT_NEAR(vdual_surface(g, -3.0 * oneG), 3.0 * std::sqrt(2 * pi * R), 1e-12);
  }
}

TEST(Norms, CosineOnTheCircle) {
  const double R = 1.5;
  const std::size_t nt = 24;
  const Grid g(4, nt, R);
  const double h = 2 * pi / nt, s = R * h;
  const SurfaceField c = sample_surface(g, [](double th) { return std::cos(th); });
  // sum_j (cos_{j+1} - cos_j)^2 / s = 4 sin^2(h/2) / s * nt / 2
  const double grad2 = 2.0 * nt * std::sin(h / 2) * std::sin(h / 2) / s;
  EXPECT_NEAR(grad_surface(g, c), std::sqrt(grad2), 1e-12);
  EXPECT_NEAR(l2_surface(g, c), std::sqrt(pi * R), 1e-12);
  EXPECT_NEAR(h1_surface(g, c), std::sqrt(pi * R + grad2), 1e-12);
  const double eig = (2.0 - 2.0 * std::cos(h)) / (s * s);
  EXPECT_NEAR(vdual_surface(g, c), std::sqrt(pi * R / eig), 1e-12);
}

TEST(Norms, BulkGradientOfLinearField) {
  // x = r cos(theta) sampled at centres with its exact trace: the energy is pi
  // up to the discretization error of the ring and angle differences.
  const Grid g(32, 64, 1.0);
  const BulkField x = sample_bulk(g, [](double r, double th) { return r * std::cos(th); });
  const SurfaceField xg = sample_surface(g, [](double th) { return std::cos(th); });
  EXPECT_NEAR(grad_bulk(g, x, xg) * grad_bulk(g, x, xg), pi, 5e-3);
  EXPECT_NEAR(h1_bulk(g, x, xg) * h1_bulk(g, x, xg), pi + pi / 4, 5e-3);
}

TEST(Norms, Accumulator) {
  NormAccumulator a;
  EXPECT_EQ(a.linf(), 0.0);
  EXPECT_EQ(a.l2(), 0.0);
  a.add(3.0, 0.1);
  a.add(-4.0, 0.1);
  EXPECT_EQ(a.linf(), 4.0);
  EXPECT_NEAR(a.l2(), std::sqrt(2.5), 1e-15);
  EXPECT_EQ(a.samples(), 2u);
  EXPECT_THROW(a.add(std::nan(""), 0.1), std::domain_error);
  EXPECT_THROW(a.add(INFINITY, 0.1), std::domain_error);
}

TEST(Norms, Convolution) {
  Convolution c;
  EXPECT_TRUE(c.empty());
  const std::vector<double> g = {1.0, 2.0};
  c.add(g, 0.5);
  c.add(g, 0.5);
  ASSERT_EQ(c.value().size(), 2u);
  EXPECT_DOUBLE_EQ(c.value()[0], 1.0);
  EXPECT_DOUBLE_EQ(c.value()[1], 2.0);
}

TEST(Norms, EnergyOfConstantStates) {
  const Grid g(8, 16, 1.0);
  const PotentialPair cubic{MonotoneGraph::cubic(), LipschitzPerturbation::neg_identity(),
                            MonotoneGraph::cubic(), LipschitzPerturbation::neg_identity(), 1.0, 1.0, {}};
  CoupledState s;
  s.u = sample_bulk(g, [](double, double) { return 0.0; });
  s.uGamma = sample_surface(g, [](double) { return 0.0; });
  EXPECT_EQ(energy(g, s, cubic, 0.5, 0.1), 0.0);

  s.u = sample_bulk(g, [](double, double) { return 1.0; });
  s.uGamma = sample_surface(g, [](double) { return 1.0; });
  // Raw cubic: beta_hat(1) = 1/4, pi_hat(1) = -1/2.
  EXPECT_NEAR(energy(g, s, cubic, 0.5, 0.0), (pi + 2 * pi) * (0.25 - 0.5), 1e-12);
  // Moreau envelope of r^4/4 at 1 for lambda = 0.1, with J from j + 0.1 j^3 = 1 by bisection.
  double lo = 0.0, hi = 1.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (mid + 0.1 * mid * mid * mid < 1.0 ? lo : hi) = mid;
  }
  const double j = 0.5 * (lo + hi);
  const double moreau1 = (1.0 - j) * (1.0 - j) / 0.2 + j * j * j * j / 4.0;
  EXPECT_NEAR(moreau1, 0.21108013, 1e-8);
  EXPECT_NEAR(energy(g, s, cubic, 0.5, 0.1), (pi + 2 * pi) * (moreau1 - 0.5), 1e-12);
}
