#include <cmath>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "dbclab/forcing.hpp"
#include "dbclab/geometry.hpp"
#include "dbclab/linalg.hpp"
#include "dbclab/operators.hpp"
#include "dbclab/potentials.hpp"

using namespace dbclab;

static void BM_LaplacianBulk(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Grid g(n, 2 * n, 1.0);
  const BulkField u = sample_bulk(g, [](double r, double th) { return r * r * std::cos(3 * th); });
  const SurfaceField ug = sample_surface(g, [](double th) { return std::cos(3 * th); });
  for (auto _ : state) benchmark::DoNotOptimize(laplacian_bulk(g, u, ug));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.cell_count()));
}
BENCHMARK(BM_LaplacianBulk)->Arg(16)->Arg(32)->Arg(64);

static void BM_LaplaceBeltrami(benchmark::State& state) {
  const Grid g(4, static_cast<std::size_t>(state.range(0)), 1.0);
  const SurfaceField z = sample_surface(g, [](double th) { return std::sin(th); });
  for (auto _ : state) benchmark::DoNotOptimize(laplace_beltrami(g, z));
}
BENCHMARK(BM_LaplaceBeltrami)->Arg(64)->Arg(1024);

// Log resolvent near the endpoints needs the most Newton iterations.
static void BM_Resolvent(benchmark::State& state) {
  const MonotoneGraph graphs[] = {MonotoneGraph::cubic(), MonotoneGraph::logarithmic(), MonotoneGraph::obstacle()};
  const MonotoneGraph& g = graphs[state.range(0)];
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  std::vector<double> xs(1024);
  for (double& x : xs) x = d(rng);
  for (auto _ : state)
    for (double x : xs) benchmark::DoNotOptimize(yosida(g, 0.01, x));
  state.SetItemsProcessed(state.iterations() * 1024);
  state.SetLabel(g.name());
}
BENCHMARK(BM_Resolvent)->DenseRange(0, 2);

static void BM_ExpressionEval(benchmark::State& state) {
  const Expression e = parse("0.2 + 0.5*r^2*cos(theta) + 0.3*r^3*sin(3*theta) + exp(-t)*x*y");
  double th = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(e.eval(Bindings::polar(0.7, th, 0.1)));
    th += 1e-3;
  }
}
BENCHMARK(BM_ExpressionEval);

static void BM_BiCGStabSurface(benchmark::State& state) {
  const auto nt = static_cast<std::size_t>(state.range(0));
  const Grid g(2, nt, 1.0);
  const double h = g.face_length();
  std::vector<Triplet> t;
  for (std::size_t j = 0; j < nt; ++j) {
    t.push_back({j, j, 1.0 + 2.0 / (h * h)});
    t.push_back({j, g.next_angle(j), -1.0 / (h * h)});
    t.push_back({j, g.prev_angle(j), -1.0 / (h * h)});
  }
  const SparseMatrix a = assemble(t, nt);
  std::vector<double> b(nt);
  for (std::size_t j = 0; j < nt; ++j) b[j] = std::sin(0.1 * static_cast<double>(j));
  for (auto _ : state) benchmark::DoNotOptimize(solve_bicgstab(a, b, 1e-12, 10000));
}
BENCHMARK(BM_BiCGStabSurface)->Arg(64)->Arg(256);
