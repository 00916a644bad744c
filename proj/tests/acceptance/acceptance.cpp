// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Usage: dbclab_acceptance [criterion numbers...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "dbclab/apriori.hpp"
#include "dbclab/checks.hpp"
#include "dbclab/error.hpp"
#include "dbclab/forcing.hpp"
#include "dbclab/linalg.hpp"
#include "dbclab/norms.hpp"
#include "dbclab/operators.hpp"
#include "dbclab/potentials.hpp"
#include "dbclab/report.hpp"
#include "dbclab/run_config.hpp"
#include "dbclab/stability.hpp"
#include "dbclab/stepper.hpp"
#include "dbclab/sweeps.hpp"

using namespace dbclab;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

const char* kSmooth = "0.2 + 0.5*r^2*cos(theta) + 0.3*r^3*sin(3*theta)";

PotentialPair pair_of(MonotoneGraph g, LipschitzPerturbation p) { return {g, p, g, p, 1.0, 1.0, {}}; }

PotentialPair cubic_pair() { return pair_of(MonotoneGraph::cubic(), LipschitzPerturbation::neg_identity()); }

StepperConfig stepper_config(const PotentialPair& p, double lambda, double dt) {
  StepperConfig c;
  c.dt = dt;
  c.lambda = lambda;
  c.potentials = p;
  return c;
}

std::vector<ProblemVariant> four_variants() {
  return {ProblemVariant::full(1.0, 0.5), ProblemVariant::eps_limit(1.0), ProblemVariant::kappa_limit(0.5),
          ProblemVariant::double_limit()};
}

double max_change(const CoupledState& a, const CoupledState& b) {
  double m = 0.0;
  auto upd = [&](const std::vector<double>& x, const std::vector<double>& y) {
    for (std::size_t k = 0; k < x.size(); ++k) m = std::max(m, std::abs(x[k] - y[k]));
  };
  upd(a.u.values, b.u.values);
  upd(a.uGamma.values, b.uGamma.values);
  upd(a.mu.values, b.mu.values);
  upd(a.muGamma.values, b.muGamma.values);
  return m;
}

// ---------------------------------------------------------------- 1
Outcome operators() {
  const CheckReport r = check_operators({{4, 8}, {16, 32}, {32, 64}});
  std::string failed;
  for (const auto& e : r.entries)
    if (!e.passed) failed += fmt::format(" {}@{}={:.3e}", e.name, e.grid, e.value);
  return {r.passed(), r.passed() ? fmt::format("{} checks within tolerance", r.entries.size())
                                 : "failed:" + failed};
}

// ---------------------------------------------------------------- 2
Outcome yosida_suite() {
  const std::vector<MonotoneGraph> catalog = {MonotoneGraph::cubic(), MonotoneGraph::logarithmic(),
                                              MonotoneGraph::obstacle(), MonotoneGraph::zero(),
                                              MonotoneGraph::linear(1.5)};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  std::size_t violations = 0, checks = 0;
  std::string first;
  auto check = [&](bool ok, const MonotoneGraph& g, double lambda, const char* what, double r) {
    ++checks;
    if (ok) return;
    if (violations++ == 0) first = fmt::format("{} (lambda={}, r={})", what, lambda, r);
    (void)g;
  };
  for (const auto& g : catalog) {
    for (double lambda : {1.0, 0.1, 0.01}) {
      for (int k = 0; k < 10000; ++k) {
        double a = d(rng), b = d(rng);
        if (a > b) std::swap(a, b);
        const double ya = yosida(g, lambda, a), yb = yosida(g, lambda, b);
        const double tol = 1e-12 * (1.0 + std::abs(ya) + std::abs(yb));
        check(ya <= yb + tol, g, lambda, "monotone", a);
        check(yb - ya <= (b - a) / lambda + tol, g, lambda, "lipschitz", a);
        check(std::abs(resolvent(g, lambda, b) - resolvent(g, lambda, a)) <= (b - a) * (1 + 1e-12) + 1e-15, g,
              lambda, "nonexpansive", a);
        if (g.in_domain(a)) {
          check(std::abs(ya) <= std::abs(minimal_section(g, a)) * (1 + 1e-12) + 1e-15, g, lambda, "|beta_l|<=|beta0|",
                a);
          const double m = moreau(g, lambda, a);
          check(m >= 0.0, g, lambda, "moreau>=0", a);
          check(m <= convex_potential(g, a) * (1 + 1e-12) + 1e-15, g, lambda, "moreau<=beta_hat", a);
        } else {
          check(moreau(g, lambda, a) >= 0.0, g, lambda, "moreau>=0", a);
        }
      }
    }
  }
  return {violations == 0, violations == 0 ? fmt::format("{} checks, zero violations", checks)
                                           : fmt::format("{} violations, first: {}", violations, first)};
}

// ---------------------------------------------------------------- 3
Outcome stationarity() {
  // Raw cubic (lambda = 0): beta(1) + pi(1) = 0, so u = 1 is an equilibrium.
  const Grid g(16, 32, 1.0);
  std::vector<ProblemVariant> variants = four_variants();
  variants.push_back(ProblemVariant::full(1.0, 0.5, 0.3));
  double worst = 0.0;
  for (const auto& v : variants) {
    Stepper s(g, v, stepper_config(cubic_pair(), 0.0, 1e-3));
    const CoupledState init = s.initial_state(parse("1"));
    CoupledState st = init;
    for (int k = 0; k < 100; ++k) st = s.step(st).state;
    worst = std::max(worst, max_change(init, st));
  }
  return {worst <= 1e-11, fmt::format("max change over 100 steps, 5 variants: {:.3e}", worst)};
}

// ---------------------------------------------------------------- 4
std::string random_smooth(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-0.1, 0.1);
  std::string e = fmt::format("{:.17g}", d(rng));
  for (int k = 1; k <= 3; ++k)
    e += fmt::format(" + r^{0}*({1:.17g}*cos({0}*theta) + {2:.17g}*sin({0}*theta))", k, d(rng), d(rng));
  return e;
}

Outcome mass_conservation() {
  const Grid g(16, 32, 1.0);
  std::mt19937_64 rng(99);
  const std::vector<PotentialPair> pairs = {
      cubic_pair(), pair_of(MonotoneGraph::obstacle(), LipschitzPerturbation::neg_identity())};
  double worst = 0.0;
  for (const auto& pair : pairs) {
    for (const auto& v : four_variants()) {
      Stepper s(g, v, stepper_config(pair, 0.1, 1e-3));
      CoupledState st = s.initial_state(parse(random_smooth(rng)));
      const double m0 = surface_mean(g, st.uGamma);
      for (int k = 0; k < 200; ++k) {
        st = s.step(st).state;
        worst = std::max(worst, std::abs(surface_mean(g, st.uGamma) - m0));
      }
    }
  }
  return {worst <= 1e-10, fmt::format("max surface-mean drift, 8 runs x 200 steps: {:.3e}", worst)};
}

// ---------------------------------------------------------------- 5
Outcome energy_dissipation() {
  const Grid g(16, 32, 1.0);
  const double lambda = 0.1;
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& v : {ProblemVariant::full(1.0, 0.1), ProblemVariant::kappa_limit(0.1)}) {
    Stepper s(g, v, stepper_config(cubic_pair(), lambda, 1e-3));
    CoupledState st = s.initial_state(parse(kSmooth));
    double e = energy(g, st, cubic_pair(), v.surface_diffusion(), lambda);
    for (int k = 0; k < 200; ++k) {
      st = s.step(st).state;
      const double next = energy(g, st, cubic_pair(), v.surface_diffusion(), lambda);
      worst = std::max(worst, (next - e) / (1.0 + std::abs(e)));
      e = next;
    }
  }
  return {worst <= 1e-8, fmt::format("max (E[n+1] - E[n]) / (1 + |E[n]|) = {:.3e}", worst)};
}

// ---------------------------------------------------------------- 6-8, 10
RunConfig rate_base(const std::string& variant) {
  RunConfig c;
  c.nr = 32;
  c.ntheta = 64;
  c.dt = 2.5e-4;
  c.final_time = 0.25;
  c.variant = variant;
  c.eps = 1.0;
  c.kappa = 1.0;
  c.lambda = 0.1;
  c.u0 = kSmooth;
  return c;
}

std::vector<double> halvings() {
  std::vector<double> v;
  for (int k = 3; k <= 8; ++k) v.push_back(std::ldexp(1.0, -k));
  return v;
}

struct Sweeps {
  std::optional<RateReport> kappa, eps, joint;
};
Sweeps sweeps;

Outcome rate_outcome(const RateReport& r, const std::vector<std::string>& names, double min_slope,
                     bool need_stabilization) {
  bool ok = true;
  std::string d;
  for (const auto& n : names) {
    const auto& m = r.metric(n);
    const double slope = m.fit ? m.fit->slope : std::numeric_limits<double>::quiet_NaN();
    const auto shift = r.stabilization_shift(n);
    ok = ok && m.fit && slope >= min_slope;
    if (need_stabilization) ok = ok && shift && *shift < 0.05;
    d += fmt::format("{}{} slope {:.3f}", d.empty() ? "" : "; ", n, slope);
    if (shift) d += fmt::format(" (dt/2 shift {:.4f})", *shift);
  }
  return {ok, d};
}

Outcome kappa_rate() {
  const RunConfig c = rate_base("eps_limit");
  c.validate();
  sweeps.kappa = sweep_kappa(c, halvings());
  return rate_outcome(*sweeps.kappa, {"linf_l2_u", "linf_vdual_u_gamma"}, 0.45, true);
}

Outcome eps_rate() {
  const RunConfig c = rate_base("kappa_limit");
  c.validate();
  sweeps.eps = sweep_eps(c, halvings());
  return rate_outcome(*sweeps.eps, {"linf_l2_u", "linf_vdual_u_gamma"}, 0.45, true);
}

Outcome joint_rate() {
  const RunConfig c = rate_base("double_limit");
  c.validate();
  std::vector<SweepPoint> pts;
  for (double v : halvings()) pts.push_back({v, v});
  sweeps.joint = sweep_joint(c, pts);
  return rate_outcome(*sweeps.joint, {"linf_l2_u"}, 0.9, false);
}

Outcome apriori_uniformity() {
  if (!sweeps.kappa) kappa_rate();
  if (!sweeps.eps) eps_rate();
  const AprioriTable& kt = sweeps.kappa->apriori;
  const UniformityResult spread = spread_uniformity(kt, 2.0);
  // One-sided view of the same table: growth relative to the largest kappa.
  double growth = 1.0;
  std::string growth_q;
  for (const auto& [name, v0] : kt.rows.front().columns()) {
    const UniformityResult b = bounded_by_first(kt, name, 2.0);
    if (b.worst_ratio > growth) {
      growth = b.worst_ratio;
      growth_q = name;
    }
  }
  // Spread of the quantities other than the worst one, for the report line.
  double others = 1.0;
  for (std::size_t q = 0; q < kt.rows.front().columns().size(); ++q) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    std::string name;
    for (const auto& r : kt.rows) {
      const auto col = r.columns()[q];
      name = col.first;
      lo = std::min(lo, std::abs(col.second));
      hi = std::max(hi, std::abs(col.second));
    }
    if (name != spread.worst_quantity && hi > 0.0) others = std::max(others, hi / lo);
  }
  const UniformityResult e1 = bounded_by_first(sweeps.eps->apriori, "sqrt_eps_grad_mu_l2h", 2.0);
  const UniformityResult e2 = bounded_by_first(sweeps.eps->apriori, "grad_mu_gamma_l2h", 2.0);
  std::string d = fmt::format("kappa sweep max/min {:.3f} ({}), other quantities <= {:.3f}; max growth over "
                              "first row {:.3f}{}; eps sweep growth sqrt_eps_grad_mu_l2h {:.3f}, grad_mu_gamma_l2h {:.3f}",
                              spread.worst_ratio, spread.worst_quantity, others, growth,
                              growth_q.empty() ? "" : " (" + growth_q + ")", e1.worst_ratio, e2.worst_ratio);
  return {spread.passed && e1.passed && e2.passed, d};
}

// ---------------------------------------------------------------- 9
Outcome continuous_dependence_check() {
  RunConfig c;
  c.nr = 16;
  c.ntheta = 32;
  c.dt = 1e-3;
  c.final_time = 0.1;
  c.eps = 1.0;
  c.kappa = 1.0;
  c.lambda = 0.1;
  c.u0 = kSmooth;
  Perturbation p;
  p.df = "x*y + 0.5";
  p.df_gamma = "cos(2*theta)";
  const std::vector<double> deltas = {1e-1, 1e-2, 1e-3};
  bool ok = true;
  std::string d;
  for (const std::string graph : {"cubic", "zero"}) {
    c.bulk_graph = c.surf_graph = graph;
    for (const std::string v : {"eps_limit", "kappa_limit", "double_limit"}) {
      c.variant = v;
      c.validate();
      const auto reps = continuous_dependence(c, p, deltas);
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      for (const auto& r : reps) {
        if (!std::isfinite(r.ratio) || !(r.ratio > 0.0)) ok = false;
        lo = std::min(lo, r.ratio);
        hi = std::max(hi, r.ratio);
      }
      const double spread = hi / lo;
      if (graph == "zero") {
        ok = ok && (hi - lo) <= 1e-8 * hi;
        d += fmt::format("{}{}/linear rel. spread {:.1e}", d.empty() ? "" : "; ", v, (hi - lo) / hi);
      } else {
        ok = ok && spread < 2.0;
        d += fmt::format("{}{}/cubic max/min {:.4f}", d.empty() ? "" : "; ", v, spread);
      }
    }
  }
  return {ok, d};
}

// ---------------------------------------------------------------- 11
std::vector<double> cyclic_solve(double a, double dg, const std::vector<double>& b) {
  // Sherman-Morrison around the Thomas algorithm.
  const std::size_t n = b.size();
  auto thomas = [&](std::vector<double> diag, std::vector<double> rhs) {
    for (std::size_t k = 1; k < n; ++k) {
      const double m = a / diag[k - 1];
      diag[k] -= m * a;
      rhs[k] -= m * rhs[k - 1];
    }
    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t k = n - 1; k-- > 0;) x[k] = (rhs[k] - a * x[k + 1]) / diag[k];
    return x;
  };
  const double gamma = -dg;
  std::vector<double> diag(n, dg);
  diag[0] = dg - gamma;
  diag[n - 1] = dg - a * a / gamma;
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = a;
  const auto y = thomas(diag, b), z = thomas(diag, u);
  const double fact = (y[0] + a * y[n - 1] / gamma) / (1.0 + z[0] + a * z[n - 1] / gamma);
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = y[k] - fact * z[k];
  return x;
}

Outcome parser_and_linalg() {
  const double pi = std::numbers::pi;
  const Bindings b = Bindings::polar(0.5, pi / 3, 0.25);
  const std::vector<std::pair<std::string, double>> corpus = {
      {"1 + 2 * 3", 7.0},         {"(1 + 2) * 3", 9.0},      {"2 ^ 3 ^ 2", 512.0},
      {"-2 ^ 2", -4.0},           {"2 ^ -1", 0.5},           {"8 / 4 / 2", 1.0},
      {"7 - 3 - 2", 2.0},         {"--3", 3.0},              {"pi", pi},
      {"theta", pi / 3},          {"x^2 + y^2", 0.25},       {"exp(-t)", std::exp(-0.25)},
      {"log(r)", std::log(0.5)},  {"abs(-r)", 0.5},          {"cos(2*theta)", std::cos(2 * pi / 3)},
      {"r^2*cos(theta) - 0.5*t", 0.25 * std::cos(pi / 3) - 0.125}};
  std::size_t parser_bad = 0;
  for (const auto& [text, want] : corpus) {
    const Expression e = parse(text);
    if (e.eval(b) != want || parse(e.print()).eval(b) != want) ++parser_bad;
  }
  for (const char* bad : {"", "1 +", "((x", "1 + foo", "sin(", "2 ** 3"}) {
    try {
      parse(bad);
      ++parser_bad;
    } catch (const ParseError&) {
    }
  }

  double krylov_err = 0.0;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (std::size_t nt : {8u, 64u, 256u}) {
    const Grid g(2, nt, 1.0);
    const double h = g.face_length();
    for (double shift : {1.0, 0.1}) {
      std::vector<Triplet> t;
      for (std::size_t j = 0; j < nt; ++j) {
        t.push_back({j, j, shift + 2.0 / (h * h)});
        t.push_back({j, g.next_angle(j), -1.0 / (h * h)});
        t.push_back({j, g.prev_angle(j), -1.0 / (h * h)});
      }
      const SparseMatrix a = assemble(t, nt);
      std::vector<double> rhs(nt);
      for (double& v : rhs) v = d(rng);
      const auto oracle = cyclic_solve(-1.0 / (h * h), shift + 2.0 / (h * h), rhs);
      const KrylovResult r = solve_bicgstab(a, rhs, 1e-12, 50000);
      double scale = 0.0, err = 0.0;
      for (std::size_t j = 0; j < nt; ++j) {
        scale = std::max(scale, std::abs(oracle[j]));
        err = std::max(err, std::abs(r.x[j] - oracle[j]));
      }
      krylov_err = std::max(krylov_err, err / scale);
    }
  }

  double jac_err = 0.0;
  const Grid g(4, 8, 1.0);
  std::vector<ProblemVariant> variants = four_variants();
  variants.push_back(ProblemVariant::full(0.5, 0.25, 0.3));
  std::uniform_real_distribution<double> st(-0.8, 0.8);
  for (const auto& pair : {cubic_pair(), pair_of(MonotoneGraph::logarithmic(), LipschitzPerturbation::neg_identity())}) {
    for (const auto& v : variants) {
      StepperConfig c = stepper_config(pair, 0.1, 1e-2);
      c.f = parse("x*y + t");
      c.f_gamma = parse("cos(theta)");
      const Stepper s(g, v, c);
      Vector x0(s.unknowns()), x1(s.unknowns());
      for (double& v0 : x0) v0 = st(rng);
      for (double& v1 : x1) v1 = st(rng);
      const CoupledState prev = s.unpack(x0, 0.0), guess = s.unpack(x1, 1e-2);
      const SparseMatrix jac = s.assemble_jacobian(prev, guess);
      const std::size_t n = x1.size();
      std::vector<double> row_scale(n, 0.0);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = jac.row_offsets()[r]; k < jac.row_offsets()[r + 1]; ++k)
          row_scale[r] = std::max(row_scale[r], std::abs(jac.values()[k]));
      for (std::size_t col = 0; col < n; ++col) {
        const double h = 1e-6;
        Vector xp = x1, xm = x1;
        xp[col] += h;
        xm[col] -= h;
        const Vector fp = s.assemble_residual(prev, s.unpack(xp, guess.t));
        const Vector fm = s.assemble_residual(prev, s.unpack(xm, guess.t));
        for (std::size_t r = 0; r < n; ++r)
          jac_err = std::max(jac_err, std::abs(jac.at(r, col) - (fp[r] - fm[r]) / (2 * h)) / row_scale[r]);
      }
    }
  }
  const bool ok = parser_bad == 0 && krylov_err <= 1e-10 && jac_err <= 1e-6;
  return {ok, fmt::format("parser mismatches {}; BiCGStab vs cyclic solve {:.2e}; Jacobian vs FD {:.2e}",
                          parser_bad, krylov_err, jac_err)};
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all = {
      {1, "operator exactness", operators},
      {2, "Yosida suite", yosida_suite},
      {3, "stationarity of u = 1", stationarity},
      {4, "surface mass conservation", mass_conservation},
      {5, "energy dissipation", energy_dissipation},
      {6, "kappa rate (slopes >= 0.45)", kappa_rate},
      {7, "eps rate (slopes >= 0.45)", eps_rate},
      {8, "joint rate (slope >= 0.9 in sqrt(eps) + sqrt(kappa))", joint_rate},
      {9, "continuous dependence", continuous_dependence_check},
      {10, "a priori uniformity", apriori_uniformity},
      {11, "parser and linear algebra", parser_and_linalg},
  };
  std::set<int> only;
  for (int k = 1; k < argc; ++k) only.insert(std::atoi(argv[k]));

  int failures = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.passed) ++failures;
    fmt::print("[{}] criterion {}: {}: {} [{:.1f} s]\n", o.passed ? "PASS" : "FAIL", c.id, c.title, o.detail,
               secs);
    std::fflush(stdout);
  }
  fmt::print("{} criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
