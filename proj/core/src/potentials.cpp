#include "dbclab/potentials.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dbclab/error.hpp"

namespace dbclab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Cubic resolvent for r > 0: root of J + lambda J^3 = r.  The map is convex and
// increasing on [0, inf), so Newton started right of the root decreases
// monotonically onto it.
double cubic_resolvent_positive(double lambda, double r) {
  double j = std::min(r, std::cbrt(r / lambda));
  for (int it = 0; it < 200; ++it) {
    const double h = j + lambda * j * j * j - r;
    const double dh = 1.0 + 3.0 * lambda * j * j;
    const double next = j - h / dh;
    if (!(next < j) || next <= 0.0) break;
    j = next;
  }
  return j;
}

struct LogResolvent {
  double log_delta;  // log of the distance 1 - |J| to the nearer endpoint
  double delta;
};

// Logarithmic resolvent for r > 0, written in s = log(1 - J) so that points
// exponentially close to the endpoint keep full resolution:
//   g(s) = 1 - e^s + lambda (log(2 - e^s) - s) - r = 0,  s in [s_lo, 0].
LogResolvent log_resolvent_positive(double lambda, double r) {
  auto g = [&](double s) {
    const double d = std::exp(s);
    return 1.0 - d + lambda * (std::log(2.0 - d) - s) - r;
  };
  auto dg = [&](double s) {
    const double d = std::exp(s);
    return -d - lambda * (d / (2.0 - d) + 1.0);
  };
  double lo = -r / lambda - 1.0;  // g(lo) > 0
  double hi = 0.0;                // g(hi) = -r < 0
  const double guess_j = std::min(r / (1.0 + 2.0 * lambda), 0.5);
  double s = std::clamp(std::log1p(-guess_j), lo, hi);
  for (int it = 0; it < 300; ++it) {
    const double val = g(s);
    if (val > 0.0) lo = s; else hi = s;
    if (val == 0.0) break;
    double next = s - val / dg(s);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) <= 1e-16 * (1.0 + std::abs(s))) {
      s = next;
      break;
    }
    s = next;
  }
  return {s, std::exp(s)};
}

double log_potential(double r) {
  auto xlogx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
  return xlogx(1.0 + r) + xlogx(1.0 - r);
}

void require_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("Yosida parameter lambda must be positive and finite");
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// "name(a, b)" -> name and numeric arguments.
std::pair<std::string, std::vector<double>> split_call(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  t = lower(t);
  const auto open = t.find('(');
  if (open == std::string::npos) return {t, {}};
  if (t.back() != ')') throw ConfigError("malformed nonlinearity '" + text + "'");
  std::vector<double> args;
  std::stringstream ss(t.substr(open + 1, t.size() - open - 2));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      args.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad numeric argument '" + item + "' in '" + text + "'");
    }
  }
  return {t.substr(0, open), args};
}

}  // namespace

bool MonotoneGraph::single_valued() const noexcept {
  return kind == GraphKind::Cubic || kind == GraphKind::Zero || kind == GraphKind::LinearMonotone;
}

bool MonotoneGraph::in_domain(double r) const noexcept {
  switch (kind) {
    case GraphKind::Logarithmic: return r > -1.0 && r < 1.0;
    case GraphKind::Obstacle: return r >= lo && r <= hi;
    default: return std::isfinite(r);
  }
}

double MonotoneGraph::domain_lower() const noexcept {
  switch (kind) {
    case GraphKind::Logarithmic: return -1.0;
    case GraphKind::Obstacle: return lo;
    default: return -kInf;
  }
}

double MonotoneGraph::domain_upper() const noexcept {
  switch (kind) {
    case GraphKind::Logarithmic: return 1.0;
    case GraphKind::Obstacle: return hi;
    default: return kInf;
  }
}

std::string MonotoneGraph::name() const {
  std::ostringstream out;
  switch (kind) {
    case GraphKind::Cubic: return "cubic";
    case GraphKind::Logarithmic: return "logarithmic";
    case GraphKind::Obstacle: out << "obstacle(" << lo << "," << hi << ")"; return out.str();
    case GraphKind::Zero: return "zero";
    case GraphKind::LinearMonotone: out << "linear(" << slope << ")"; return out.str();
  }
  return "?";
}

double minimal_section(const MonotoneGraph& g, double r) {
  if (!g.in_domain(r)) throw std::domain_error("minimal_section: r outside D(beta) for " + g.name());
  switch (g.kind) {
    case GraphKind::Cubic: return r * r * r;
    case GraphKind::Logarithmic: return std::log1p(r) - std::log1p(-r);
    case GraphKind::Obstacle: return 0.0;
    case GraphKind::Zero: return 0.0;
    case GraphKind::LinearMonotone: return g.slope * r;
  }
  return 0.0;
}

double convex_potential(const MonotoneGraph& g, double r) {
  switch (g.kind) {
    case GraphKind::Cubic: return 0.25 * r * r * r * r;
    case GraphKind::Logarithmic: return (r >= -1.0 && r <= 1.0) ? log_potential(r) : kInf;
    case GraphKind::Obstacle: return (r >= g.lo && r <= g.hi) ? 0.0 : kInf;
    case GraphKind::Zero: return 0.0;
    case GraphKind::LinearMonotone: return 0.5 * g.slope * r * r;
  }
  return kInf;
}

double resolvent(const MonotoneGraph& g, double lambda, double r) {
  require_lambda(lambda);
  switch (g.kind) {
    case GraphKind::Zero: return r;
    case GraphKind::LinearMonotone: return r / (1.0 + lambda * g.slope);
    case GraphKind::Obstacle: return std::clamp(r, g.lo, g.hi);
    case GraphKind::Cubic:
      if (r == 0.0) return 0.0;
      return r > 0.0 ? cubic_resolvent_positive(lambda, r) : -cubic_resolvent_positive(lambda, -r);
    case GraphKind::Logarithmic: {
      if (r == 0.0) return 0.0;
      const double d = log_resolvent_positive(lambda, std::abs(r)).delta;
      return std::copysign(1.0 - d, r);
    }
  }
  return r;
}

double yosida(const MonotoneGraph& g, double lambda, double r) {
  require_lambda(lambda);
  if (g.kind == GraphKind::Logarithmic) {
    if (r == 0.0) return 0.0;
    const double d = log_resolvent_positive(lambda, std::abs(r)).delta;
    // r - J = |r| - 1 + delta, evaluated without forming J.
    return std::copysign((std::abs(r) - 1.0 + d) / lambda, r);
  }
  return (r - resolvent(g, lambda, r)) / lambda;
}

double yosida_slope(const MonotoneGraph& g, double lambda, double r) {
  require_lambda(lambda);
  switch (g.kind) {
    case GraphKind::Zero: return 0.0;
    case GraphKind::LinearMonotone: return g.slope / (1.0 + lambda * g.slope);
    case GraphKind::Obstacle: return (r < g.lo || r >= g.hi) ? 1.0 / lambda : 0.0;
    case GraphKind::Cubic: {
      const double j = resolvent(g, lambda, r);
      const double d = 3.0 * j * j;
      return d / (1.0 + lambda * d);
    }
    case GraphKind::Logarithmic: {
      // beta'(J) = 2 / (delta (2 - delta)); slope = beta' / (1 + lambda beta').
      const double d = r == 0.0 ? 1.0 : log_resolvent_positive(lambda, std::abs(r)).delta;
      return 2.0 / (d * (2.0 - d) + 2.0 * lambda);
    }
  }
  return 0.0;
}

double moreau(const MonotoneGraph& g, double lambda, double r) {
  require_lambda(lambda);
  if (g.kind == GraphKind::Logarithmic) {
    if (r == 0.0) return 0.0;
    const auto res = log_resolvent_positive(lambda, std::abs(r));
    const double gap = std::abs(r) - 1.0 + res.delta;
    const double d = res.delta;
    const double pot = (2.0 - d) * std::log(2.0 - d) + d * res.log_delta;
    return gap * gap / (2.0 * lambda) + pot;
  }
  const double j = resolvent(g, lambda, r);
  const double gap = r - j;
  return gap * gap / (2.0 * lambda) + convex_potential(g, j);
}

RegularizedGraph::RegularizedGraph(MonotoneGraph graph, double lambda)
    : graph_(graph), lambda_(lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("lambda must be a finite non-negative number");
  if (lambda == 0.0 && !graph.single_valued())
    throw std::invalid_argument("graph " + graph.name() +
                                " is multivalued or singular and needs a positive Yosida lambda");
}

double RegularizedGraph::value(double r) const {
  if (lambda_ == 0.0) return minimal_section(graph_, r);
  return yosida(graph_, lambda_, r);
}

double RegularizedGraph::slope(double r) const {
  if (lambda_ > 0.0) return yosida_slope(graph_, lambda_, r);
  switch (graph_.kind) {
    case GraphKind::Cubic: return 3.0 * r * r;
    case GraphKind::LinearMonotone: return graph_.slope;
    default: return 0.0;
  }
}

double RegularizedGraph::potential(double r) const {
  if (lambda_ == 0.0) return convex_potential(graph_, r);
  return moreau(graph_, lambda_, r);
}

double LipschitzPerturbation::value(double r) const noexcept {
  switch (kind) {
    case PerturbationKind::NegIdentity: return -r;
    case PerturbationKind::ScaledNegIdentity: return -2.0 * c * r;
    case PerturbationKind::Zero: return 0.0;
  }
  return 0.0;
}

double LipschitzPerturbation::slope(double) const noexcept {
  switch (kind) {
    case PerturbationKind::NegIdentity: return -1.0;
    case PerturbationKind::ScaledNegIdentity: return -2.0 * c;
    case PerturbationKind::Zero: return 0.0;
  }
  return 0.0;
}

double LipschitzPerturbation::antiderivative(double r) const noexcept {
  switch (kind) {
    case PerturbationKind::NegIdentity: return -0.5 * r * r;
    case PerturbationKind::ScaledNegIdentity: return -c * r * r;
    case PerturbationKind::Zero: return 0.0;
  }
  return 0.0;
}

double LipschitzPerturbation::lipschitz() const noexcept {
  switch (kind) {
    case PerturbationKind::NegIdentity: return 1.0;
    case PerturbationKind::ScaledNegIdentity: return 2.0 * std::abs(c);
    case PerturbationKind::Zero: return 0.0;
  }
  return 0.0;
}

std::string LipschitzPerturbation::name() const {
  switch (kind) {
    case PerturbationKind::NegIdentity: return "neg_identity";
    case PerturbationKind::ScaledNegIdentity: {
      std::ostringstream out;
      out << "scaled_neg_identity(" << c << ")";
      return out.str();
    }
    case PerturbationKind::Zero: return "zero";
  }
  return "?";
}

AssumptionReport validate_assumptions(const PotentialPair& pair, std::size_t sample_count,
                                      Interval range) {
  AssumptionReport report;
  auto fail = [&](const std::string& msg) {
    if (report.passed) {
      report.passed = false;
      report.violation = msg;
    }
  };
  auto structural = [&](const MonotoneGraph& g, const char* which) {
    if (g.kind == GraphKind::Obstacle && !(g.lo <= 0.0 && 0.0 <= g.hi && g.lo < g.hi))
      fail(std::string("A1: ") + which + " obstacle interval must contain 0");
    if (g.kind == GraphKind::LinearMonotone && g.slope < 0.0)
      fail(std::string("A1: ") + which + " linear graph needs a non-negative slope");
    if (convex_potential(g, 0.0) != 0.0) fail(std::string("A1: ") + which + " beta_hat(0) != 0");
  };
  structural(pair.bulk_graph, "bulk");
  structural(pair.surface_graph, "surface");
  if (!(pair.rho >= 1.0)) fail("A2: rho must be >= 1");
  if (!(pair.c0 >= 0.0)) fail("A2: c0 must be non-negative");
  if (pair.c_beta && !(*pair.c_beta >= 1.0)) fail("A6: c_beta must be >= 1");

  const MonotoneGraph& b = pair.bulk_graph;
  const MonotoneGraph& bg = pair.surface_graph;
  if (bg.domain_lower() < b.domain_lower() || bg.domain_upper() > b.domain_upper())
    fail("A2: D(beta_Gamma) is not contained in D(beta)");
  if (pair.c_beta &&
      (bg.domain_lower() != b.domain_lower() || bg.domain_upper() != b.domain_upper()))
    fail("A6: D(beta) != D(beta_Gamma)");
  if (!report.passed || sample_count == 0) return report;

  const double lo = std::max(range.lo, bg.domain_lower());
  const double hi = std::min(range.hi, bg.domain_upper());
  if (!(lo < hi)) {
    fail("sample range does not meet D(beta_Gamma)");
    return report;
  }

  auto describe = [](const char* what, double r, double lhs, double rhs) {
    std::ostringstream out;
    out.precision(10);
    out << what << " violated at r = " << r << ": " << lhs << " > " << rhs;
    return out.str();
  };

  // Interior midpoints keep open domain ends out of the sample.
  const double step = (hi - lo) / static_cast<double>(sample_count);
  constexpr std::array<double, 3> lambdas{1.0, 0.1, 0.01};
  for (std::size_t k = 0; k < sample_count && report.passed; ++k) {
    const double r = lo + (static_cast<double>(k) + 0.5) * step;
    const double rr = r + 0.37 * step;
    ++report.checks;
    for (const auto& [pi, name] : {std::pair{pair.bulk_pi, "bulk"}, std::pair{pair.surface_pi, "surface"}}) {
      const double lhs = std::abs(pi.value(r) - pi.value(rr));
      const double rhs = pi.lipschitz() * std::abs(r - rr) * (1.0 + 1e-12);
      if (lhs > rhs) fail(describe((std::string("A3 Lipschitz bound of ") + name + " pi").c_str(), r, lhs, rhs));
    }
    if (!bg.in_domain(r) || !b.in_domain(r)) continue;
    const double bulk = std::abs(minimal_section(b, r));
    const double surf = std::abs(minimal_section(bg, r));
    const double tol = 1e-12 * (1.0 + bulk);
    if (bulk > pair.rho * surf + pair.c0 + tol)
      fail(describe("A2 domination |beta°| <= rho |beta_Gamma°| + c0", r, bulk, pair.rho * surf + pair.c0));
    if (pair.c_beta) {
      const double cb = *pair.c_beta;
      if (bulk > cb * (surf + 1.0) + tol)
        fail(describe("A6 upper bound", r, bulk, cb * (surf + 1.0)));
      if (surf / cb - cb > bulk + tol) fail(describe("A6 lower bound", r, surf / cb - cb, bulk));
    }
    for (double lambda : lambdas) {
      const double yb = std::abs(yosida(b, lambda, r));
      const double ys = std::abs(yosida(bg, lambda, r));
      const double ytol = 1e-12 * (1.0 + yb);
      if (yb > pair.rho * ys + pair.c0 + ytol)
        fail(describe("A2 domination for Yosida approximations", r, yb, pair.rho * ys + pair.c0));
      if (pair.c_beta) {
        const double cb = *pair.c_beta;
        if (yb > cb * (ys + 1.0) + ytol)
          fail(describe("A6 upper bound for Yosida approximations", r, yb, cb * (ys + 1.0)));
        if (ys / cb - cb > yb + ytol)
          fail(describe("A6 lower bound for Yosida approximations", r, ys / cb - cb, yb));
      }
    }
  }
  return report;
}

MonotoneGraph parse_graph(const std::string& text) {
  const auto [name, args] = split_call(text);
  auto want = [&](std::size_t n) {
    if (args.size() != n)
      throw ConfigError("graph '" + text + "' expects " + std::to_string(n) + " argument(s)");
  };
  if (name == "cubic") { want(0); return MonotoneGraph::cubic(); }
  if (name == "logarithmic" || name == "log") { want(0); return MonotoneGraph::logarithmic(); }
  if (name == "zero") { want(0); return MonotoneGraph::zero(); }
  if (name == "obstacle") {
    if (args.empty()) return MonotoneGraph::obstacle();
    want(2);
    return MonotoneGraph::obstacle(args[0], args[1]);
  }
  if (name == "linear") { want(1); return MonotoneGraph::linear(args[0]); }
  throw ConfigError("unknown monotone graph '" + text + "'");
}

LipschitzPerturbation parse_perturbation(const std::string& text) {
  const auto [name, args] = split_call(text);
  if (name == "neg_identity" && args.empty()) return LipschitzPerturbation::neg_identity();
  if (name == "zero" && args.empty()) return LipschitzPerturbation::zero();
  if (name == "scaled_neg_identity" && args.size() == 1)
    return LipschitzPerturbation::scaled_neg_identity(args[0]);
  throw ConfigError("unknown Lipschitz perturbation '" + text + "'");
}

}  // namespace dbclab
