#include <benchmark/benchmark.h>

#include "cmtomo/convolution.hpp"
#include "cmtomo/marginals.hpp"
#include "cmtomo/reconstruct.hpp"

using namespace cmtomo;

namespace {

Exec exec_of(const benchmark::State& s) { return s.range(0) == 0 ? Exec::serial : Exec::parallel; }

std::vector<MarginalDensity> eight_modes() {
  const SystemSpec sys{{ModeSpec::fock(1), ModeSpec::fock(4), ModeSpec::even(1.0), ModeSpec::odd(cplx(0.5, 0.8)),
                        ModeSpec::fock(0), ModeSpec::fock(9), ModeSpec::even(2.0), ModeSpec::fock(2)},
                       0.5};
  return build_marginals(sys, FrameSpec::uniform(8, 0.6, 0.8, 0.5, 2.0));
}

void BM_FockGrid(benchmark::State& s) {
  const ModeSpec m = ModeSpec::fock(200);
  const Grid g = policy_grid(m, 1.0, 0.0, 1.0);
  for (auto _ : s) benchmark::DoNotOptimize(fock_tomogram(200, 1.0, 0.0, 1.0, g, exec_of(s)));
  s.SetItemsProcessed(static_cast<std::int64_t>(s.iterations() * g.count));
}

void BM_CatOracle(benchmark::State& s) {
  const ModeSpec m = ModeSpec::even(cplx(2.0, 1.0));
  const Grid g = policy_grid(m, 0.6, 0.8, 1.0);
  const auto psi = fock_expansion(m);
  for (auto _ : s) benchmark::DoNotOptimize(tomogram_oracle(psi, 0.6, 0.8, 1.0, g, exec_of(s)));
}

void BM_ConvolveFft(benchmark::State& s) {
  const auto ms = eight_modes();
  for (auto _ : s) benchmark::DoNotOptimize(convolve_fft(ms, {}, exec_of(s)));
}

void BM_CfProduct(benchmark::State& s) {
  const SystemSpec sys{{ModeSpec::fock(1), ModeSpec::even(1.0)}, 1.0};
  const auto ms = build_marginals(sys, FrameSpec::uniform(2, 1.0, 0.0, 0.5, 2.0));
  const Grid k = default_k_grid(ms);
  for (auto _ : s) benchmark::DoNotOptimize(cf_product(ms, k, {}, exec_of(s)));
}

void BM_SampleSum(benchmark::State& s) {
  const auto ms = eight_modes();
  for (auto _ : s) benchmark::DoNotOptimize(sample_sum(ms, 1000000, 1, exec_of(s)));
}

void BM_Reconstruct(benchmark::State& s) {
  const auto w = mode_tomogram(ModeSpec::even(1.0), 1.0);
  for (auto _ : s) benchmark::DoNotOptimize(reconstruct_single_mode(w, 16, 1.0, {}, exec_of(s)));
}

}  // namespace

// Argument 0 runs the serial reference kernel, 1 the OpenMP kernel.
BENCHMARK(BM_FockGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CatOracle)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvolveFft)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CfProduct)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleSum)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Reconstruct)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
