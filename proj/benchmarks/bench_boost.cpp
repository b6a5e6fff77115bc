#include <benchmark/benchmark.h>

#include "cdboost/boost.hpp"
#include "cdboost/experiments.hpp"
#include "cdboost/structure.hpp"

using namespace cdboost;
namespace ex = cdboost::experiments;

namespace {

BoostInstance sized(long m, long n) {
  ex::GeneratorConfig cfg;
  cfg.m = m;
  cfg.n = n;
  return ex::random_instance(static_cast<std::uint64_t>(m * 1000 + n), cfg);
}

void BM_RunWolfe(benchmark::State& state) {
  const BoostInstance inst = sized(state.range(0), state.range(0) / 2);
  const Loss loss(LossKind::Logistic, inst.m());
  RunConfig cfg;
  cfg.max_iters = 100;
  for (auto _ : state) benchmark::DoNotOptimize(run(inst, loss, cfg));
  state.SetItemsProcessed(state.iterations() * cfg.max_iters);
}
BENCHMARK(BM_RunWolfe)->Arg(8)->Arg(32)->Arg(128)->Arg(512);

void BM_RunExactOnS(benchmark::State& state) {
  const BoostInstance s = ex::instance_s();
  const Loss loss(LossKind::Logistic, 3);
  RunConfig cfg;
  cfg.max_iters = 200;
  cfg.line_search = ExactStep{};
  for (auto _ : state) benchmark::DoNotOptimize(run(s, loss, cfg));
}
BENCHMARK(BM_RunExactOnS);

void BM_Analyze(benchmark::State& state) {
  const BoostInstance inst = sized(state.range(0), state.range(0) / 2);
  for (auto _ : state) benchmark::DoNotOptimize(analyze(inst));
}
BENCHMARK(BM_Analyze)->Arg(6)->Arg(16)->Arg(40);

void BM_GammaClassical(benchmark::State& state) {
  const BoostInstance inst = sized(state.range(0), state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gamma_classical(inst));
}
BENCHMARK(BM_GammaClassical)->Arg(6)->Arg(16)->Arg(40);

void BM_DualCertificate(benchmark::State& state) {
  const BoostInstance inst = sized(state.range(0), state.range(0) / 4);
  const Loss loss(LossKind::Logistic, inst.m());
  const IterateState s = make_state(inst, Risk(loss), Vector::Zero(inst.n()));
  for (auto _ : state) benchmark::DoNotOptimize(dual_certificate(inst, loss, s));
}
BENCHMARK(BM_DualCertificate)->Arg(16)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
