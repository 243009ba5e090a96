#include <benchmark/benchmark.h>

#include "sbk/harmonic.hpp"
#include "sbk/kernels.hpp"
#include "sbk/operators.hpp"

using namespace sbk;

namespace {

FieldPair field(std::int64_t arg) {
  return FieldPair::make_default(arg / 2 == 0 ? 3 : 5, arg % 2 == 0 ? Ext::Unramified : Ext::Ramified);
}

// Arg: 0 = p3 unramified, 1 = p3 ramified, 2 = p5 unramified, 3 = p5 ramified.

void BM_PairNormalized(benchmark::State& state) {
  const FieldPair fp = field(state.range(0));
  const ParamTuple pt = make_params(fp, 1, 0, cplx(0.4, 0.1), cplx(0.2, 0.3));
  const StepFunction phi = random_step(fp, FieldTag::E, 1, {1, 1, 1, 0.8});
  for (auto _ : state) benchmark::DoNotOptimize(pair(fp, KernelVariant::Normalized, pt, phi));
}
BENCHMARK(BM_PairNormalized)->DenseRange(0, 3);

void BM_OraclePair(benchmark::State& state) {
  const FieldPair fp = field(state.range(0));
  const ParamTuple pt = make_params(fp, 1, 0, cplx(1.0, 0.1), cplx(0.2, 0.3));
  const StepFunction phi = random_step(fp, FieldTag::E, 2, {0, 1, 1, 0.8});
  for (auto _ : state) benchmark::DoNotOptimize(oracle_pair(fp, pt, phi, 8));
}
BENCHMARK(BM_OraclePair)->DenseRange(0, 3);

void BM_FourierE(benchmark::State& state) {
  const FieldPair fp = field(state.range(0));
  const StepFunction f = random_step(fp, FieldTag::E, 3, {1, 1, 1, 0.8});
  for (auto _ : state) benchmark::DoNotOptimize(fourier(fp, f));
}
BENCHMARK(BM_FourierE)->DenseRange(0, 3);

void BM_ApplyOperator(benchmark::State& state) {
  const FieldPair fp = field(state.range(0));
  const ParamTuple pt = make_params(fp, 0, 0, SymParam{Rat(1), Rat(0)}, SymParam{Rat(1, 2), Rat(0)});
  const InducedVector v = step_vector(random_step(fp, FieldTag::E, 4, {1, 1, 1, 0.8}));
  for (auto _ : state) benchmark::DoNotOptimize(apply_sbo(fp, KernelVariant::Normalized, pt, v, Rat(1)));
}
BENCHMARK(BM_ApplyOperator)->DenseRange(0, 3);

}  // namespace

BENCHMARK_MAIN();
