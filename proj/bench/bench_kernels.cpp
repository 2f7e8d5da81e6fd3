// Serial reference kernels against their OpenMP counterparts. The benchmark
// argument is the image side (or grid nodes per axis for the rate grid).

#include "levprs/harness.hpp"
#include "levprs/kernels.hpp"
#include "levprs/proxlib.hpp"
#include "levprs/rates.hpp"

#include <benchmark/benchmark.h>

using namespace levprs;

namespace {

Vector random_image(Index side) {
  Rng rng(42);
  return rng.uniform_vector(side * side);
}

const Matrix& blur_kernel() {
  static const Matrix k = BlurOperator::gaussian(5, 1.0, 8, 8).kernel();
  return k;
}

template <auto Fn>
void bm_correlate(benchmark::State& state) {
  const Index side = state.range(0);
  const Vector in = random_image(side);
  Vector out(in.size());
  for (auto _ : state) {
    Fn(blur_kernel(), 2, 2, side, side, {in.data(), static_cast<std::size_t>(in.size())},
       {out.data(), static_cast<std::size_t>(out.size())});
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * in.size());
}

template <auto Fn>
void bm_haar(benchmark::State& state) {
  const Index side = state.range(0);
  const Vector in = random_image(side);
  Vector out(in.size());
  for (auto _ : state) {
    Fn(side, side, 2, {in.data(), static_cast<std::size_t>(in.size())},
       {out.data(), static_cast<std::size_t>(out.size())});
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * in.size());
}

template <auto Fn>
void bm_huber_prox(benchmark::State& state) {
  const Index side = state.range(0);
  const Vector in = random_image(side);
  Vector out(in.size());
  for (auto _ : state) {
    Fn({in.data(), static_cast<std::size_t>(in.size())}, 0.07, 0.01,
       {out.data(), static_cast<std::size_t>(out.size())});
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * in.size());
}

template <auto Fn>
void bm_grid(benchmark::State& state) {
  const RegularityParams reg{1.0, 0.25, 0.5, 0.8};
  const int nodes = static_cast<int>(state.range(0));
  const ParameterGrid grid{0.01, 5.0, nodes, -0.2, 0.5, nodes};
  for (auto _ : state) benchmark::DoNotOptimize(Fn(reg, -0.4, grid));
  state.SetItemsProcessed(state.iterations() * nodes * nodes);
}

}  // namespace

BENCHMARK(bm_correlate<reference::correlate_circular>)->Name("correlate/serial")->Arg(128)->Arg(512);
BENCHMARK(bm_correlate<kernels::correlate_circular>)->Name("correlate/omp")->Arg(128)->Arg(512);
BENCHMARK(bm_haar<reference::haar_forward>)->Name("haar_forward/serial")->Arg(128)->Arg(512);
BENCHMARK(bm_haar<kernels::haar_forward>)->Name("haar_forward/omp")->Arg(128)->Arg(512);
BENCHMARK(bm_huber_prox<reference::huber_prox>)->Name("huber_prox/serial")->Arg(128)->Arg(512);
BENCHMARK(bm_huber_prox<kernels::huber_prox>)->Name("huber_prox/omp")->Arg(128)->Arg(512);
BENCHMARK(bm_grid<reference::grid_min_rate>)->Name("grid_min_rate/serial")->Arg(101)->Arg(401);
BENCHMARK(bm_grid<kernels::grid_min_rate>)->Name("grid_min_rate/omp")->Arg(101)->Arg(401);

BENCHMARK_MAIN();
