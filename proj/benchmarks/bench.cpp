#include <random>

#include <benchmark/benchmark.h>

#include <colldecay/generator.hpp>
#include <colldecay/kernel.hpp>
#include <colldecay/oracle.hpp>
#include <colldecay/solve.hpp>
#include <colldecay/spectral.hpp>

using namespace colldecay;

namespace {

// n modes on one shared continuum with weak nearest-neighbour coupling
ValidatedNetwork chain(std::size_t n) {
  std::mt19937_64 rng(n);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> w(n), r(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = u(rng);
    r[i] = 1.0 + 0.5 * u(rng);
  }
  ModeNetwork net = ModeNetwork::shared(w, r);
  for (std::size_t i = 0; i + 1 < n; ++i) net.couplings(i, i + 1) = net.couplings(i + 1, i) = 0.3;
  return validate_network(net);
}

void BM_Eigensolve(benchmark::State& state) {
  const auto gen = build_amplitude_generator(chain(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(eigensolve(gen));
}
BENCHMARK(BM_Eigensolve)->Arg(2)->Arg(8)->Arg(32);

void BM_NumberSectorEvolve(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto net = chain(n);
  const auto init = InitialState::fock(std::vector<unsigned>(n, 1));
  const TimeGrid grid{5.0, 0.005};
  const auto m = static_cast<Method>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(simulate(net, init, DriveSpec{}, grid, m));
}
BENCHMARK(BM_NumberSectorEvolve)
    ->Args({2, static_cast<int>(Method::closed_form)})
    ->Args({2, static_cast<int>(Method::rk4)})
    ->Args({6, static_cast<int>(Method::closed_form)})
    ->Args({6, static_cast<int>(Method::rk4)})
    ->Unit(benchmark::kMillisecond);

void BM_SpectralSweep(benchmark::State& state) {
  const auto net = chain(static_cast<std::size_t>(state.range(0)));
  const FrequencyGrid grid{-10.0, 10.0, 2001};
  for (auto _ : state) benchmark::DoNotOptimize(spectral_response(net, grid));
}
BENCHMARK(BM_SpectralSweep)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_KernelEvolve(benchmark::State& state) {
  const auto k = memory_kernel(chain(2), 0);
  const TimeGrid grid{5.0, 5.0 / static_cast<double>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(evolve_with_kernel(k, 1.0, grid));
}
BENCHMARK(BM_KernelEvolve)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_OracleSmall(benchmark::State& state) {
  const auto net = chain(2);
  const auto sys = discretize_continuum(net, static_cast<std::size_t>(state.range(0)), 50.0);
  const auto init = InitialState::fock({1, 0});
  const TimeGrid grid{2.0, 0.01};
  for (auto _ : state) benchmark::DoNotOptimize(oracle_evolve(sys, init, grid));
}
BENCHMARK(BM_OracleSmall)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
