#include <benchmark/benchmark.h>

#include <vector>

#include "fsgd/basis.hpp"
#include "fsgd/lepski.hpp"
#include "fsgd/model.hpp"
#include "fsgd/rng.hpp"
#include "fsgd/schedule.hpp"

namespace {

using namespace fsgd;

void BM_BasisPrefix(benchmark::State& state) {
  const auto basis = BasisFamily::trigonometric();
  const long count = state.range(0);
  std::vector<double> out(static_cast<std::size_t>(count));
  Philox rng(1);
  for (auto _ : state) {
    basis.eval_prefix(rng.uniform01(), out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * count);
}
BENCHMARK(BM_BasisPrefix)->Arg(8)->Arg(64)->Arg(512);

void BM_EstimatorStep(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const long truncation = state.range(1);
  ModelState model(BasisFamily::trigonometric(), p, true);
  const auto loss = LossGradient::squared();
  Philox rng(2);
  std::vector<double> x(static_cast<std::size_t>(p));
  long i = 0;
  for (auto _ : state) {
    for (double& v : x) v = rng.uniform01();
    const double y = rng.uniform(-1.0, 1.0);
    model.step(x, y, 1.0 / static_cast<double>(++i), truncation, loss);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_EstimatorStep)->Args({1, 10})->Args({5, 5})->Args({30, 5});

void BM_LepskiStep(benchmark::State& state) {
  ModelState model(BasisFamily::trigonometric(), 1, false);
  const LepskiConfig config{0.5, 8.0, 3.0, 3.0};
  const auto loss = LossGradient::squared();
  Philox rng(3);
  std::vector<double> x(1);
  // Start deep enough that the selection is active and J(s0) is sizeable.
  model.set_steps(50000);
  for (auto _ : state) {
    x[0] = rng.uniform01();
    lepski_select_and_step(model, x, rng.uniform(-0.1, 0.1), config, loss);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_LepskiStep);

void BM_ScheduleAt(benchmark::State& state) {
  const auto schedule = Schedule::three_stage(30, 1.0, 5.0, 0.5, 2.0);
  long i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(schedule.at(1 + (++i % 100000)));
  }
}
BENCHMARK(BM_ScheduleAt);

}  // namespace

BENCHMARK_MAIN();
