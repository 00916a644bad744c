#include <cmath>
#include <numbers>
#include <stdexcept>

#include <gtest/gtest.h>

#include "dbclab/geometry.hpp"

using namespace dbclab;

TEST(Grid, RejectsDegenerateSizes) {
  EXPECT_THROW(build_grid(1, 8, 1.0), std::invalid_argument);
  EXPECT_THROW(build_grid(4, 7, 1.0), std::invalid_argument);
  EXPECT_THROW(build_grid(4, 2, 1.0), std::invalid_argument);
  EXPECT_THROW(build_grid(4, 8, 0.0), std::invalid_argument);
  EXPECT_THROW(build_grid(4, 8, -1.0), std::invalid_argument);
  EXPECT_NO_THROW(build_grid(2, 4, 0.5));
}

TEST(Grid, CentersAndIndexing) {
  const Grid g(4, 8, 2.0);
  EXPECT_DOUBLE_EQ(g.hr(), 0.5);
  EXPECT_DOUBLE_EQ(g.center_radius(0), 0.25);
  EXPECT_DOUBLE_EQ(g.angle(0), std::numbers::pi / 8);
  EXPECT_EQ(g.cell(2, 3), 19u);
  EXPECT_EQ(g.next_angle(7), 0u);
  EXPECT_EQ(g.prev_angle(0), 7u);
}

TEST(Grid, VolumesTileTheDisk) {
  for (double radius : {0.5, 1.0, 3.0}) {
    const Grid g(7, 12, radius);
    double total = 0.0;
    for (std::size_t i = 0; i < g.nr(); ++i) total += g.volume(i) * static_cast<double>(g.ntheta());
    EXPECT_NEAR(total, std::numbers::pi * radius * radius, 1e-13 * radius * radius);
    EXPECT_NEAR(g.area(), total, 1e-13 * radius * radius);
    EXPECT_NEAR(g.boundary_length(), 2.0 * std::numbers::pi * radius, 1e-13 * radius);
  }
}

TEST(Fields, SampleAndIntegrate) {
  const Grid g(8, 16, 1.0);
  const BulkField one = sample_bulk(g, [](double, double) { return 1.0; });
  EXPECT_NEAR(integrate(g, one), std::numbers::pi, 1e-13);
  // Midpoint rule in r on r^3: sum r_i^3 hr = R^4/4 - R^2 hr^2 / 8.
  const BulkField r2 = sample_bulk(g, [](double r, double) { return r * r; });
  const double hr = g.hr();
  EXPECT_NEAR(integrate(g, r2), 2.0 * std::numbers::pi * (0.25 - hr * hr / 8.0), 1e-13);
  const SurfaceField c = sample_surface(g, [](double th) { return std::cos(th); });
  EXPECT_NEAR(integrate(g, c), 0.0, 1e-14);
}

TEST(Fields, NonFiniteSampleNamesTheCell) {
  const Grid g(4, 8, 1.0);
  try {
    sample_bulk(g, [](double r, double) { return r > 0.5 ? std::nan("") : 0.0; });
    FAIL() << "expected domain_error";
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("cell"), std::string::npos);
  }
  EXPECT_THROW(sample_surface(g, [](double) { return HUGE_VAL; }), std::domain_error);
}

TEST(Fields, ArithmeticAndSizeChecks) {
  const Grid g(4, 8, 1.0);
  BulkField a(g, 2.0), b(g, 0.5);
  const BulkField d = a - b;
  EXPECT_DOUBLE_EQ(d[5], 1.5);
  EXPECT_DOUBLE_EQ((3.0 * d)[0], 4.5);
  EXPECT_THROW(check_size(g, BulkField(std::vector<double>(3))), std::invalid_argument);
  EXPECT_THROW(check_size(g, SurfaceField(std::vector<double>(9))), std::invalid_argument);
}
