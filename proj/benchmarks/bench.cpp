#include <benchmark/benchmark.h>

#include <vector>

#include "atlas/activation.hpp"
#include "atlas/model.hpp"
#include "atlas/optim.hpp"
#include "atlas/rng.hpp"
#include "atlas/spline.hpp"
#include "atlas/targets.hpp"

namespace {

void BM_Activation(benchmark::State& state) {
  double x = 0.0;
  for (auto _ : state) {
    x += 1e-4;
    if (x > 4.0) x = 0.0;
    benchmark::DoNotOptimize(atlas::activation(x));
  }
}
BENCHMARK(BM_Activation);

void BM_ActiveWindow(benchmark::State& state) {
  const int rho = static_cast<int>(state.range(0));
  double x = 0.0;
  for (auto _ : state) {
    x += 1e-4;
    if (x > 1.0) x = 0.0;
    benchmark::DoNotOptimize(atlas::active_window(rho, x));
  }
}
BENCHMARK(BM_ActiveWindow)->Arg(0)->Arg(4);

void BM_MixedSplineEval(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  atlas::MixedDensitySpline spline(r);
  atlas::SplitRng rng(1);
  for (int rho = 0; rho <= r; ++rho)
    for (double& c : spline.bank(rho).coeffs()) c = rng.normal();
  double x = 0.0;
  for (auto _ : state) {
    x += 1e-4;
    if (x > 1.0) x = 0.0;
    benchmark::DoNotOptimize(spline.eval(x));
  }
}
BENCHMARK(BM_MixedSplineEval)->Arg(0)->Arg(4);

atlas::AtlasModel full_scale_model(int n) {
  atlas::AtlasModel model(n, 1, 10, 4);
  atlas::SplitRng rng(2);
  model.for_each_trainable([&](std::int64_t, double& c) { c = 0.2 * rng.normal(); });
  return model;
}

void BM_Forward(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const atlas::AtlasModel model = full_scale_model(n);
  atlas::SplitRng rng(3);
  std::vector<double> x(static_cast<std::size_t>(n));
  std::vector<double> out(1);
  atlas::AtlasModel::Scratch scratch;
  for (auto _ : state) {
    for (double& v : x) v = rng.uniform();
    model.forward(x, out, scratch);
    benchmark::DoNotOptimize(out[0]);
  }
}
BENCHMARK(BM_Forward)->Arg(1)->Arg(2)->Arg(8);

void BM_Backward(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const atlas::AtlasModel model = full_scale_model(n);
  atlas::SplitRng rng(4);
  std::vector<double> x(static_cast<std::size_t>(n));
  const std::vector<double> upstream{1.0};
  atlas::SparseGradient grad;
  atlas::AtlasModel::Scratch scratch;
  for (auto _ : state) {
    for (double& v : x) v = rng.uniform();
    model.backward(x, upstream, grad, scratch);
    benchmark::DoNotOptimize(grad.entries.data());
  }
}
BENCHMARK(BM_Backward)->Arg(1)->Arg(2)->Arg(8);

void BM_AdamStep(benchmark::State& state) {
  atlas::AtlasModel model = full_scale_model(2);
  atlas::AdamConfig cfg;
  cfg.lazy = state.range(0) != 0;
  atlas::AdamState adam(model.count_trainable(), cfg);
  atlas::SplitRng rng(5);
  std::vector<double> x(2);
  const std::vector<double> upstream{0.01};
  atlas::SparseGradient grad;
  atlas::AtlasModel::Scratch scratch;
  for (auto _ : state) {
    for (double& v : x) v = rng.uniform();
    model.backward(x, upstream, grad, scratch);
    adam.step(model, grad);
  }
}
BENCHMARK(BM_AdamStep)->Arg(0)->Arg(1);

void BM_RbfTarget(benchmark::State& state) {
  atlas::SplitRng rng(6);
  const atlas::RbfTarget rbf = atlas::RbfTarget::sample(2, rng, 1000);
  std::vector<double> x(2);
  for (auto _ : state) {
    for (double& v : x) v = rng.uniform();
    benchmark::DoNotOptimize(rbf(x));
  }
}
BENCHMARK(BM_RbfTarget);

}  // namespace

BENCHMARK_MAIN();
