// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <map>

#include "evcop/estimators.hpp"
#include "evcop/kernels.hpp"
#include "evcop/projection.hpp"
#include "evcop/sampling.hpp"

using namespace evcop;

namespace {

const PseudoSample& sample(std::size_t n) {
  static std::map<std::size_t, PseudoSample> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    RngStream rng(1, n);
    it = cache.emplace(n, pseudo_observations(sample_asy_logistic({0.5, 0.6, 0.3, 0.0}, n, rng))).first;
  }
  return it->second;
}

const QuadratureRule& rule80() {
  static const QuadratureRule rule = midpoint_rule(3, 80);
  return rule;
}

template <ExecMode Mode>
void node_statistics(benchmark::State& state) {
  const auto& s = sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::node_statistics(s, rule80(), true, true, Mode));
}

template <ExecMode Mode>
void basis_and_gram(benchmark::State& state) {
  const auto grid = enumerate_grid(3, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const auto g = kernels::basis_matrix(grid, rule80(), Mode);
    benchmark::DoNotOptimize(kernels::gram_matrix(g, rule80().weights, Mode));
  }
}

template <ExecMode Mode>
void projection(benchmark::State& state) {
  auto rule = std::make_shared<const QuadratureRule>(rule80());
  ProjectionOptions opts;
  opts.mode = Mode;
  const ProjectionContext ctx(20, rule, opts);
  const auto pilot = estimate_surface({EstimatorKind::cfg, Correction::linear}, sample(100), rule, Mode);
  for (auto _ : state) benchmark::DoNotOptimize(ctx.project(pilot));
}

}  // namespace

BENCHMARK(node_statistics<ExecMode::serial>)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(node_statistics<ExecMode::parallel>)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(basis_and_gram<ExecMode::serial>)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(basis_and_gram<ExecMode::parallel>)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(projection<ExecMode::serial>)->Unit(benchmark::kMillisecond);
BENCHMARK(projection<ExecMode::parallel>)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
