#include <benchmark/benchmark.h>

#include "dbclab/forcing.hpp"
#include "dbclab/stepper.hpp"

using namespace dbclab;

namespace {

Stepper make(std::size_t nr, const ProblemVariant& v, bool eliminate = true) {
  StepperConfig c;
  c.dt = 2.5e-4;
  c.lambda = 0.1;
  c.eliminate_bulk_mu = eliminate;
  c.potentials = {MonotoneGraph::cubic(), LipschitzPerturbation::neg_identity(), MonotoneGraph::cubic(),
                  LipschitzPerturbation::neg_identity(), 1.0, 1.0, {}};
  return Stepper(Grid(nr, 2 * nr, 1.0), v, c);
}

const char* kInit = "0.2 + 0.5*r^2*cos(theta) + 0.3*r^3*sin(3*theta)";

}  // namespace

static void BM_AssembleJacobian(benchmark::State& state) {
  Stepper s = make(static_cast<std::size_t>(state.range(0)), ProblemVariant::full(1.0, 0.1));
  const CoupledState x = s.initial_state(parse(kInit));
  for (auto _ : state) benchmark::DoNotOptimize(s.assemble_jacobian(x, x));
}
BENCHMARK(BM_AssembleJacobian)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);

static void BM_AssembleResidual(benchmark::State& state) {
  Stepper s = make(static_cast<std::size_t>(state.range(0)), ProblemVariant::full(1.0, 0.1));
  const CoupledState x = s.initial_state(parse(kInit));
  for (auto _ : state) benchmark::DoNotOptimize(s.assemble_residual(x, x));
}
BENCHMARK(BM_AssembleResidual)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);

// One implicit step from the same state; arg 1 selects the monolithic layout for the full problem.
static void BM_Step(benchmark::State& state) {
  const ProblemVariant variants[] = {ProblemVariant::full(1.0, 0.1), ProblemVariant::full(1.0, 0.1),
                                     ProblemVariant::eps_limit(1.0), ProblemVariant::double_limit()};
  const auto k = static_cast<std::size_t>(state.range(0));
  Stepper s = make(32, variants[k], k != 1);
  const CoupledState x = s.initial_state(parse(kInit));
  for (auto _ : state) benchmark::DoNotOptimize(s.step(x));
  state.SetLabel(k == 1 ? "full, monolithic" : variants[k].name());
}
BENCHMARK(BM_Step)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
