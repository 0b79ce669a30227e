#include <benchmark/benchmark.h>

#include <vector>

#include "hbq/integrator.hpp"
#include "hbq/model.hpp"
#include "hbq/spectral.hpp"
#include "hbq/waves.hpp"

namespace {

const hbq::HbqParams kParams{1.0, 1.0, 2, +1};

hbq::State solitary(const hbq::GridSpec& g) {
  return hbq::solitary_initial_state(hbq::solitary_params(kParams), g);
}

void BM_RealTransform(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto g = hbq::make_grid(100.0, n);
  const auto u = solitary(g).u;
  hbq::RealTransform t(n);
  std::vector<hbq::Complex> half(static_cast<std::size_t>(t.half_size()));
  std::vector<double> back(static_cast<std::size_t>(n));
  for (auto _ : st) {
    t.forward(u, half);
    t.inverse(half, back);
    benchmark::DoNotOptimize(back.data());
  }
  st.SetComplexityN(n);
}
BENCHMARK(BM_RealTransform)->RangeMultiplier(2)->Range(64, 4096)->Complexity(benchmark::oNLogN);

void BM_Acceleration(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto g = hbq::make_grid(100.0, n);
  const auto u = solitary(g).u;
  hbq::HbqOperator op(g, kParams);
  std::vector<double> dv(static_cast<std::size_t>(n));
  for (auto _ : st) {
    op.acceleration(u, dv);
    benchmark::DoNotOptimize(dv.data());
  }
  st.SetComplexityN(n);
}
BENCHMARK(BM_Acceleration)->RangeMultiplier(2)->Range(64, 4096)->Complexity(benchmark::oNLogN);

void BM_Rk4Step(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto g = hbq::make_grid(100.0, n);
  hbq::State s = solitary(g);
  hbq::Rk4Stepper stepper(g, kParams);
  for (auto _ : st) {
    stepper.try_step(s, 1e-3);
    benchmark::DoNotOptimize(s.u.data());
  }
  st.SetComplexityN(n);
}
BENCHMARK(BM_Rk4Step)->RangeMultiplier(2)->Range(64, 4096)->Complexity(benchmark::oNLogN);

// Full signed-wavenumber spectrum, as used by the reference rhs().
void BM_ForwardDft(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto g = hbq::make_grid(100.0, n);
  const auto u = solitary(g).u;
  for (auto _ : st) benchmark::DoNotOptimize(hbq::forward_dft(u));
  st.SetComplexityN(n);
}
BENCHMARK(BM_ForwardDft)->RangeMultiplier(4)->Range(64, 4096);

}  // namespace

BENCHMARK_MAIN();
