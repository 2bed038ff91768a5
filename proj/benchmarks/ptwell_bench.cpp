#include <benchmark/benchmark.h>

#include "ptwell/boundstates.hpp"
#include "ptwell/oracle.hpp"
#include "ptwell/scattering.hpp"
#include "ptwell/spectrum.hpp"
#include "ptwell/transport.hpp"

namespace {

const ptwell::WellParams kWell(9, 15, 1, 0.5);

void BM_SecularResidual(benchmark::State& state) {
  ptwell::cplx k(2.3, 0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ptwell::secular_residual(kWell, k));
    k += 1e-9;
  }
}
BENCHMARK(BM_SecularResidual);

void BM_SecularDerivatives(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ptwell::secular_derivatives(kWell, ptwell::cplx(2.3, 0.1)));
}
BENCHMARK(BM_SecularDerivatives);

void BM_FindRealRoots(benchmark::State& state) {
  const double k_max = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ptwell::find_real_roots(kWell, k_max));
}
BENCHMARK(BM_FindRealRoots)->Arg(12)->Arg(40);

void BM_ScatteringCoefficients(benchmark::State& state) {
  double k = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ptwell::scattering_coefficients(kWell, k));
    k = k > 10.0 ? 0.5 : k + 1e-3;
  }
}
BENCHMARK(BM_ScatteringCoefficients);

void BM_TraceSpectrum(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ptwell::trace_spectrum(kWell, {0.0, 8.0}, 0.05, 12.0));
}
BENCHMARK(BM_TraceSpectrum)->Unit(benchmark::kMillisecond);

void BM_TransportProfile(benchmark::State& state) {
  const auto s = ptwell::make_bound_state(kWell, ptwell::find_real_roots(kWell, 3.0).front());
  const auto grid = ptwell::uniform_grid(4.0, 801);
  for (auto _ : state) benchmark::DoNotOptimize(ptwell::transport_profile(s, grid));
}
BENCHMARK(BM_TransportProfile)->Unit(benchmark::kMicrosecond);

void BM_TridiagonalQL(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = ptwell::make_grid(kWell, n, 6.0);
  const auto t = ptwell::discretize(kWell, g);
  for (auto _ : state) benchmark::DoNotOptimize(ptwell::tridiagonal_eigenvalues(t));
  state.SetComplexityN(n);
}
BENCHMARK(BM_TridiagonalQL)->Arg(201)->Arg(401)->Arg(801)->Unit(benchmark::kMillisecond)->Complexity();

void BM_NearestEigenvalues(benchmark::State& state) {
  const auto g = ptwell::make_grid(kWell, 2001, 6.0);
  const auto t = ptwell::discretize(kWell, g);
  for (auto _ : state) benchmark::DoNotOptimize(ptwell::nearest_eigenvalues(t, ptwell::cplx(5.0, 0.0), 4));
}
BENCHMARK(BM_NearestEigenvalues)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
