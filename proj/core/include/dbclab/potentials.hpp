#pragma once

#include <optional>
#include <string>
#include <vector>

namespace dbclab {

enum class GraphKind { Cubic, Logarithmic, Obstacle, Zero, LinearMonotone };

/// Maximal monotone graph beta = d(beta_hat) with 0 in beta(0) and beta_hat(0) = 0.
struct MonotoneGraph {
  GraphKind kind = GraphKind::Zero;
  double lo = -1.0;     // Obstacle bounds
  double hi = 1.0;
  double slope = 0.0;   // LinearMonotone

  static MonotoneGraph cubic() { return {GraphKind::Cubic}; }
  static MonotoneGraph logarithmic() { return {GraphKind::Logarithmic}; }
  static MonotoneGraph obstacle(double lo = -1.0, double hi = 1.0) {
    return {GraphKind::Obstacle, lo, hi};
  }
  static MonotoneGraph zero() { return {GraphKind::Zero}; }
  static MonotoneGraph linear(double m) { return {GraphKind::LinearMonotone, -1.0, 1.0, m}; }

  /// Single-valued and smooth on all of R (Cubic, Zero, LinearMonotone).
  bool single_valued() const noexcept;
  bool in_domain(double r) const noexcept;
  /// Closed effective domain of beta_hat as [lower, upper] (infinite ends allowed).
  double domain_lower() const noexcept;
  double domain_upper() const noexcept;
  std::string name() const;
};

/// Minimal section beta°(r); requires r in D(beta).
double minimal_section(const MonotoneGraph& g, double r);
/// beta_hat(r), +infinity outside the effective domain.
double convex_potential(const MonotoneGraph& g, double r);

/// J_lambda(r) = (I + lambda beta)^-1 (r).  lambda > 0.
double resolvent(const MonotoneGraph& g, double lambda, double r);
/// beta_lambda(r) = (r - J_lambda(r)) / lambda.
double yosida(const MonotoneGraph& g, double lambda, double r);
/// Derivative of beta_lambda (right derivative at kinks), in [0, 1/lambda].
double yosida_slope(const MonotoneGraph& g, double lambda, double r);
/// Moreau envelope |r - J|^2 / (2 lambda) + beta_hat(J); its derivative is beta_lambda.
double moreau(const MonotoneGraph& g, double lambda, double r);

/// A graph as it enters the time steppers: through its Yosida approximation at
/// a fixed lambda, or directly when lambda == 0 and the graph is single valued.
class RegularizedGraph {
 public:
  RegularizedGraph() = default;
  /// Throws std::invalid_argument for lambda < 0, or lambda == 0 with a multivalued or singular graph.
  RegularizedGraph(MonotoneGraph graph, double lambda);

  double value(double r) const;
  double slope(double r) const;
  double potential(double r) const;
  const MonotoneGraph& graph() const noexcept { return graph_; }
  double lambda() const noexcept { return lambda_; }

 private:
  MonotoneGraph graph_{};
  double lambda_ = 0.0;
};

enum class PerturbationKind { NegIdentity, ScaledNegIdentity, Zero };

/// Lipschitz perturbation pi with closed-form antiderivative pi_hat (pi_hat(0) = 0).
struct LipschitzPerturbation {
  PerturbationKind kind = PerturbationKind::Zero;
  double c = 0.0;  // ScaledNegIdentity: pi(r) = -2 c r

  static LipschitzPerturbation neg_identity() { return {PerturbationKind::NegIdentity}; }
  static LipschitzPerturbation scaled_neg_identity(double c) {
    return {PerturbationKind::ScaledNegIdentity, c};
  }
  static LipschitzPerturbation zero() { return {PerturbationKind::Zero}; }

  double value(double r) const noexcept;
  double slope(double r) const noexcept;
  double antiderivative(double r) const noexcept;
  double lipschitz() const noexcept;
  std::string name() const;
};

/// Bulk and surface nonlinearities together with the domination constants.
struct PotentialPair {
  MonotoneGraph bulk_graph;
  LipschitzPerturbation bulk_pi;
  MonotoneGraph surface_graph;
  LipschitzPerturbation surface_pi;
  double rho = 1.0;                   // domination: |beta°| <= rho |beta_Gamma°| + c0
  double c0 = 1.0;
  std::optional<double> c_beta;       // two-sided growth comparison, when set
};

struct Interval {
  double lo;
  double hi;
};

struct AssumptionReport {
  bool passed = true;
  /// Empty when passed; otherwise names the assumption, the offending r and values.
  std::string violation;
  std::size_t checks = 0;
};

/// Numeric validation of the structural assumptions on a PotentialPair:
/// graph structure (0 in beta(0), beta_hat(0) = 0, monotone), Lipschitz bounds of
/// pi, domain inclusion, the domination bound and, when c_beta is set, the
/// two-sided growth bound.  The bounds are checked for the graphs and for their
/// Yosida approximations at lambda in {1, 0.1, 0.01}.  Samples are uniform on
/// `range` intersected with D(beta_Gamma).
AssumptionReport validate_assumptions(const PotentialPair& pair, std::size_t sample_count,
                                      Interval range);

MonotoneGraph parse_graph(const std::string& text);
LipschitzPerturbation parse_perturbation(const std::string& text);

}  // namespace dbclab
