#include "dbclab/checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "dbclab/operators.hpp"

namespace dbclab {

bool CheckReport::passed() const {
  return !entries.empty() &&
         std::all_of(entries.begin(), entries.end(), [](const CheckEntry& e) { return e.passed; });
}

CheckReport check_operators(const std::vector<std::pair<std::size_t, std::size_t>>& grids,
                            const CheckOptions& options) {
  const LaplacianFn lap = options.laplacian ? options.laplacian : LaplacianFn(laplacian_bulk);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  CheckReport report;

  for (const auto& [nr, nt] : grids) {
    const Grid g(nr, nt, 1.0);
    const std::string label = fmt::format("{}x{}", nr, nt);
    auto random_bulk = [&] {
      BulkField f(g, 0.0);
      for (double& v : f.values) v = unif(rng);
      return f;
    };
    auto random_surface = [&] {
      SurfaceField f(g, 0.0);
      for (double& v : f.values) v = unif(rng);
      return f;
    };

    // Green identity: sum (lap u) v w + a(u, v) = sum (dn u) vGamma s.
    double worst = 0.0;
    for (std::size_t k = 0; k < options.samples; ++k) {
      const BulkField u = random_bulk(), v = random_bulk();
      const SurfaceField ug = random_surface(), vg = random_surface();
      const BulkField lu = lap(g, u, ug);
      double volume_term = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < g.nr(); ++i)
        for (std::size_t j = 0; j < g.ntheta(); ++j) {
          const std::size_t c = g.cell(i, j);
          const double t = lu[c] * v[c] * g.volume(i);
          volume_term += t;
          scale += std::abs(t);
        }
      const double form = dirichlet_form(g, u, ug, v, vg);
      const SurfaceField dn = normal_derivative(g, u, ug);
      double boundary = 0.0;
      for (std::size_t j = 0; j < g.ntheta(); ++j) {
        boundary += dn[j] * vg[j] * g.face_length();
        scale += std::abs(dn[j] * vg[j] * g.face_length());
      }
      scale += std::abs(form);
      worst = std::max(worst, std::abs(volume_term + form - boundary) / scale);
    }
    report.entries.push_back({label, "green_identity", worst, 1e-12, worst < 1e-12});

    // Laplace-Beltrami: zero row sums (constants map to zero) and zero boundary integral.
    const SurfaceField ones(g, 1.0);
    double row_sum = 0.0;
    for (double x : laplace_beltrami(g, ones).values) row_sum = std::max(row_sum, std::abs(x));
    report.entries.push_back({label, "lb_row_sums", row_sum, 0.0, row_sum == 0.0});

    double integral = 0.0;
    for (std::size_t k = 0; k < 10; ++k) {
      const SurfaceField z = random_surface();
      const SurfaceField lz = laplace_beltrami(g, z);
      double sum = 0.0, scale = 0.0;
      for (double x : lz.values) {
        sum += x * g.face_length();
        scale += std::abs(x) * g.face_length();
      }
      integral = std::max(integral, std::abs(sum) / scale);
    }
    report.entries.push_back({label, "lb_boundary_integral", integral, 1e-13, integral <= 1e-13});

    // Eigenvalue of cos(theta).
    const double h = g.htheta();
    const double exact = -(2.0 - 2.0 * std::cos(h)) / (h * h);
    const SurfaceField c = sample_surface(g, [](double th) { return std::cos(th); });
    const SurfaceField lc = laplace_beltrami(g, c);
    double eig_defect = 0.0;
    for (std::size_t j = 0; j < g.ntheta(); ++j)
      eig_defect = std::max(eig_defect, std::abs(lc[j] - exact * c[j]));
    report.entries.push_back({label, "lb_cos_eigenvalue", eig_defect, 1e-10, eig_defect <= 1e-10});
  }

  // Consistency of the discrete eigenvalue with the continuous one on the reference circle.
  {
    const Grid g(4, 64, 1.0);
    const SurfaceField c = sample_surface(g, [](double th) { return std::cos(th); });
    const SurfaceField lc = laplace_beltrami(g, c);
    double eig = 0.0, norm = 0.0;
    for (std::size_t j = 0; j < g.ntheta(); ++j) {
      eig += lc[j] * c[j];
      norm += c[j] * c[j];
    }
    const double gap = std::abs(eig / norm + 1.0);
    report.entries.push_back({"ntheta=64", "lb_cos_eigenvalue_vs_continuum", gap, 8.1e-4, gap <= 8.1e-4});
  }
  return report;
}

}  // namespace dbclab
