#include <random>

#include <benchmark/benchmark.h>

#include "gmr/reduce.hpp"

namespace {

gmr::GaussianMixture make_mixture(std::size_t n) {
  std::mt19937_64 rng(n);
  std::uniform_real_distribution<double> loc(-10.0, 10.0);
  std::uniform_real_distribution<double> scale(0.3, 2.0);
  std::vector<gmr::GaussianComponent> comps;
  for (std::size_t i = 0; i < n; ++i) {
    gmr::Vector mean(2);
    mean << loc(rng), loc(rng);
    gmr::Matrix cov(2, 2);
    const double a = scale(rng);
    const double b = scale(rng);
    cov << a, 0.3 * std::sqrt(a * b), 0.3 * std::sqrt(a * b), b;
    comps.emplace_back(1.0 / static_cast<double>(n), mean, cov);
  }
  return gmr::GaussianMixture(std::move(comps)).normalized();
}

void run(benchmark::State& state, gmr::CostKind kind) {
  const auto m = make_mixture(static_cast<std::size_t>(state.range(0)));
  std::size_t evals = 0;
  for (auto _ : state) {
    auto r = gmr::reduce(m, 1, kind);
    evals = gmr::cost_eval_count(r.trace).total();
    benchmark::DoNotOptimize(r.mixture);
  }
  state.counters["evaluations"] = static_cast<double>(evals);
  state.SetComplexityN(state.range(0));
}

void BM_ReduceRunnalls(benchmark::State& s) { run(s, gmr::CostKind::kRunnallsB); }
void BM_ReduceWilliams(benchmark::State& s) { run(s, gmr::CostKind::kWilliamsISE); }
void BM_ReduceArkl(benchmark::State& s) { run(s, gmr::CostKind::kArklFull); }
void BM_ReduceArklSimple(benchmark::State& s) { run(s, gmr::CostKind::kArklSimple); }

BENCHMARK(BM_ReduceRunnalls)->RangeMultiplier(2)->Range(8, 64)->Complexity();
BENCHMARK(BM_ReduceWilliams)->RangeMultiplier(2)->Range(8, 64)->Complexity();
BENCHMARK(BM_ReduceArkl)->RangeMultiplier(2)->Range(8, 64)->Complexity();
BENCHMARK(BM_ReduceArklSimple)->RangeMultiplier(2)->Range(8, 64)->Complexity();

}  // namespace

BENCHMARK_MAIN();
