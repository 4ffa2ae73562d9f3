#include <benchmark/benchmark.h>

#include "wtap/fisher.hpp"
#include "wtap/gaussian.hpp"
#include "wtap/polytope.hpp"
#include "wtap/regions_discrete.hpp"

using namespace wtap;

namespace {

ChannelSpec bench_channel(Rng& rng) {
  return build_degraded_joint(random_kernel(3, 3, rng), random_kernel(3, 3, rng), random_kernel(3, 3, rng));
}

void BM_DegradedConstants(benchmark::State& st) {
  Rng rng(1);
  ChannelSpec ch = bench_channel(rng);
  AuxJoint a = make_degraded_aux(ProbTable({{"U", 4}, {"X", 3}}, rng.dirichlet(12)));
  for (auto _ : st) benchmark::DoNotOptimize(degraded_constants(a, ch));
}
BENCHMARK(BM_DegradedConstants);

void BM_TransferElimination(benchmark::State& st) {
  Rng rng(2);
  ChannelSpec ch = bench_channel(rng);
  AuxJoint a = make_degraded_aux(ProbTable({{"U", 3}, {"X", 3}}, rng.dirichlet(9)));
  IneqSystem orig = eval_original_inner(a, ch);
  for (auto _ : st) benchmark::DoNotOptimize(transfer_rates(orig));
}
BENCHMARK(BM_TransferElimination);

void BM_Vertices(benchmark::State& st) {
  IneqSystem s = rate_system(degraded_rows(), {0.2, 0.55, 0.3, 0.65, 0.8});
  for (auto _ : st) benchmark::DoNotOptimize(vertices(s));
}
BENCHMARK(BM_Vertices);

void BM_GaussConstants(benchmark::State& st) {
  Rng rng(3);
  GaussChannel ch = random_degraded_gauss(static_cast<int>(st.range(0)), rng);
  CovSplit s = CovSplit::single(random_below(ch.S, rng));
  for (auto _ : st) benchmark::DoNotOptimize(gauss_constants(s, ch));
}
BENCHMARK(BM_GaussConstants)->Arg(1)->Arg(3);

void BM_MixtureFisher(benchmark::State& st) {
  Rng rng(4);
  ScalarMixture m = random_mixture(rng);
  for (auto _ : st) benchmark::DoNotOptimize(mixture_cond_fisher(m, m.s2));
}
BENCHMARK(BM_MixtureFisher);

}  // namespace

BENCHMARK_MAIN();
