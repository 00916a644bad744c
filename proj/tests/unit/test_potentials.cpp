#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "dbclab/error.hpp"
#include "dbclab/potentials.hpp"

using namespace dbclab;

namespace {

std::vector<MonotoneGraph> catalog() {
  return {MonotoneGraph::cubic(), MonotoneGraph::logarithmic(), MonotoneGraph::obstacle(),
          MonotoneGraph::obstacle(-0.5, 2.0), MonotoneGraph::zero(), MonotoneGraph::linear(1.5)};
}

// Root of j + lambda j^3 = r by plain bisection.
double cubic_root_by_bisection(double lambda, double r) {
  double lo = -std::abs(r) - 1.0, hi = std::abs(r) + 1.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (mid + lambda * mid * mid * mid < r ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(Potentials, YosidaPropertiesOnRandomSamples) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  for (const auto& g : catalog()) {
    for (double lambda : {1.0, 0.1, 0.01}) {
      for (int k = 0; k < 2000; ++k) {
        double a = d(rng), b = d(rng);
        if (a > b) std::swap(a, b);
        const double ya = yosida(g, lambda, a), yb = yosida(g, lambda, b);
        EXPECT_LE(ya, yb + 1e-12) << g.name();
        EXPECT_LE(yb - ya, (b - a) / lambda * (1 + 1e-9) + 1e-12) << g.name();
        EXPECT_LE(std::abs(resolvent(g, lambda, b) - resolvent(g, lambda, a)), (b - a) + 1e-12);
        if (g.in_domain(a)) {
          EXPECT_LE(std::abs(ya), std::abs(minimal_section(g, a)) + 1e-9) << g.name() << " r=" << a;
          const double m = moreau(g, lambda, a);
          EXPECT_GE(m, -1e-14);
          EXPECT_LE(m, convex_potential(g, a) + 1e-12);
        }
      }
    }
  }
}

TEST(Potentials, CubicResolventMatchesBisection) {
  for (double lambda : {1.0, 0.1, 0.01}) {
    for (double r : {-5.0, -1.0, -1e-3, 0.0, 0.3, 1.0, 7.0}) {
      EXPECT_NEAR(resolvent(MonotoneGraph::cubic(), lambda, r), cubic_root_by_bisection(lambda, r),
                  1e-13 * (1.0 + std::abs(r)));
    }
  }
}

TEST(Potentials, MoreauOfCubicAtOne) {
  const double j = cubic_root_by_bisection(1.0, 1.0);
  const double expected = (1.0 - j) * (1.0 - j) / 2.0 + j * j * j * j / 4.0;
  EXPECT_NEAR(moreau(MonotoneGraph::cubic(), 1.0, 1.0), expected, 1e-13);
  EXPECT_NEAR(expected, 0.104647, 1e-6);
}

TEST(Potentials, YosidaSlopeMatchesFiniteDifferences) {
  for (const auto& g : catalog()) {
    for (double lambda : {1.0, 0.1}) {
      for (double r : {-2.1, -0.7, -0.2, 0.05, 0.4, 0.93, 1.7}) {
        const double h = 1e-6;
        const double fd = (yosida(g, lambda, r + h) - yosida(g, lambda, r - h)) / (2 * h);
        EXPECT_NEAR(yosida_slope(g, lambda, r), fd, 1e-5 * (1.0 + std::abs(fd))) << g.name() << " r=" << r;
      }
    }
  }
}

TEST(Potentials, MoreauDerivativeIsYosida) {
  for (const auto& g : catalog()) {
    for (double r : {-1.9, -0.4, 0.3, 0.99, 2.5}) {
      const double h = 1e-6;
      const double fd = (moreau(g, 0.1, r + h) - moreau(g, 0.1, r - h)) / (2 * h);
      EXPECT_NEAR(fd, yosida(g, 0.1, r), 1e-6 * (1.0 + std::abs(fd))) << g.name();
    }
  }
}

TEST(Potentials, LogarithmicResolventStaysInsideNearEndpoints) {
  const auto g = MonotoneGraph::logarithmic();
  for (double r : {1.02, 1.05, 1.1}) {
    const double j = resolvent(g, 0.01, r);
    EXPECT_LT(j, 1.0);
    EXPECT_GT(j, 0.0);
    EXPECT_NEAR(0.01 * std::log((1 + j) / (1 - j)), r - j, 1e-10 * r);
    EXPECT_NEAR(resolvent(g, 0.01, -r), -j, 1e-15);
  }
  // Far out, 1 - J is below the double spacing near 1; the Yosida value stays finite.
  for (double r : {5.0, 20.0, 60.0}) {
    EXPECT_LE(resolvent(g, 0.01, r), 1.0);
    EXPECT_NEAR(yosida(g, 0.01, r), (r - 1.0) / 0.01, 1e-10 * r / 0.01);
  }
}

TEST(Potentials, ObstacleYosidaIsDistanceOverLambda) {
  const auto g = MonotoneGraph::obstacle();
  EXPECT_DOUBLE_EQ(yosida(g, 0.1, 0.5), 0.0);
  EXPECT_NEAR(yosida(g, 0.1, 1.3), 3.0, 1e-12);
  EXPECT_NEAR(yosida(g, 0.1, -1.2), -2.0, 1e-12);
  EXPECT_NEAR(moreau(g, 0.1, 1.3), 0.09 / 0.2, 1e-12);
}

TEST(Potentials, RegularizedGraphRawMode) {
  const RegularizedGraph raw(MonotoneGraph::cubic(), 0.0);
  EXPECT_DOUBLE_EQ(raw.value(1.0), 1.0);
  EXPECT_DOUBLE_EQ(raw.slope(2.0), 12.0);
  EXPECT_DOUBLE_EQ(raw.potential(1.0), 0.25);
  EXPECT_THROW(RegularizedGraph(MonotoneGraph::obstacle(), 0.0), std::invalid_argument);
  EXPECT_THROW(RegularizedGraph(MonotoneGraph::logarithmic(), 0.0), std::invalid_argument);
  EXPECT_THROW(RegularizedGraph(MonotoneGraph::cubic(), -1.0), std::invalid_argument);
  const RegularizedGraph reg(MonotoneGraph::cubic(), 0.1);
  EXPECT_DOUBLE_EQ(reg.value(0.7), yosida(MonotoneGraph::cubic(), 0.1, 0.7));
}

TEST(Potentials, Perturbations) {
  const auto p = LipschitzPerturbation::neg_identity();
  EXPECT_DOUBLE_EQ(p.value(2.0), -2.0);
  EXPECT_DOUBLE_EQ(p.antiderivative(1.0), -0.5);
  EXPECT_DOUBLE_EQ(p.lipschitz(), 1.0);
  const auto q = LipschitzPerturbation::scaled_neg_identity(0.75);
  EXPECT_DOUBLE_EQ(q.value(1.0), -1.5);
  EXPECT_DOUBLE_EQ(q.lipschitz(), 1.5);
  EXPECT_DOUBLE_EQ(LipschitzPerturbation::zero().value(3.0), 0.0);
}

TEST(Potentials, AssumptionValidator) {
  PotentialPair same{MonotoneGraph::cubic(), LipschitzPerturbation::neg_identity(),
                     MonotoneGraph::cubic(), LipschitzPerturbation::neg_identity(), 1.0, 0.0, {}};
  EXPECT_TRUE(validate_assumptions(same, 200, {-2.0, 2.0}).passed);

  PotentialPair zero_bulk = same;
  zero_bulk.bulk_graph = MonotoneGraph::zero();
  EXPECT_TRUE(validate_assumptions(zero_bulk, 200, {-2.0, 2.0}).passed);

  // A cubic bulk graph is not dominated by a zero boundary graph with small constants.
  PotentialPair cubic_vs_zero = same;
  cubic_vs_zero.surface_graph = MonotoneGraph::zero();
  cubic_vs_zero.c0 = 1.0;
  for (double c0 : {1.0, 5.0}) {
    cubic_vs_zero.c0 = c0;
    const auto r = validate_assumptions(cubic_vs_zero, 200, {-2.0, 2.0});
    EXPECT_FALSE(r.passed);
    EXPECT_FALSE(r.violation.empty());
  }

  // The bulk domain must contain the boundary one.
  PotentialPair domains = same;
  domains.bulk_graph = MonotoneGraph::obstacle();
  domains.surface_graph = MonotoneGraph::cubic();
  EXPECT_FALSE(validate_assumptions(domains, 200, {-2.0, 2.0}).passed);

  PotentialPair bad_rho = same;
  bad_rho.rho = 0.5;
  EXPECT_FALSE(validate_assumptions(bad_rho, 200, {-2.0, 2.0}).passed);
}

TEST(Potentials, Parsing) {
  EXPECT_EQ(parse_graph("cubic").kind, GraphKind::Cubic);
  EXPECT_EQ(parse_graph("log").kind, GraphKind::Logarithmic);
  EXPECT_EQ(parse_graph("logarithmic").kind, GraphKind::Logarithmic);
  const auto ob = parse_graph("obstacle(-0.5, 2)");
  EXPECT_EQ(ob.kind, GraphKind::Obstacle);
  EXPECT_DOUBLE_EQ(ob.lo, -0.5);
  EXPECT_DOUBLE_EQ(ob.hi, 2.0);
  EXPECT_DOUBLE_EQ(parse_graph("linear(2.5)").slope, 2.5);
  EXPECT_THROW(parse_graph("quartic"), ConfigError);
  EXPECT_THROW(parse_graph("linear"), ConfigError);
  EXPECT_EQ(parse_perturbation("scaled_neg_identity(0.25)").kind, PerturbationKind::ScaledNegIdentity);
  EXPECT_THROW(parse_perturbation("sine"), ConfigError);
}
