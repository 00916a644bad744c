#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dbclab/geometry.hpp"

namespace dbclab {

struct CheckEntry {
  std::string grid;   // "nr x ntheta"
  std::string name;
  double value = 0.0;  // measured defect
  double tolerance = 0.0;
  bool passed = false;
};

struct CheckReport {
  std::vector<CheckEntry> entries;
  bool passed() const;
};

using LaplacianFn = std::function<BulkField(const Grid&, const BulkField&, const SurfaceField&)>;

struct CheckOptions {
  std::size_t samples = 100;  // random field quadruples per grid for the Green identity
  unsigned seed = 12345;
  /// Laplacian under test; defaults to laplacian_bulk.  Tests inject broken operators here.
  LaplacianFn laplacian;
};

/// Exactness checks of the discrete operators on each (nr, ntheta) grid of radius 1:
/// the Green identity on random fields, zero row sums and zero boundary integral
/// of the Laplace-Beltrami operator, and its cos(theta) eigenvalue against
/// (2 - 2 cos h) / h^2 with h = htheta.
CheckReport check_operators(const std::vector<std::pair<std::size_t, std::size_t>>& grids,
                            const CheckOptions& options = {});

}  // namespace dbclab
