#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "rowlearn/adapter.hpp"
#include "rowlearn/ecc.hpp"
#include "rowlearn/run_config.hpp"
#include "rowlearn/session.hpp"

using namespace rowlearn;

namespace {

void BM_AdapterStep(benchmark::State& state) {
  RunConfig config;
  AdapterSession session(config.adapter_config());
  const std::size_t n = session.alphabet().size();
  std::mt19937_64 rng(1);
  std::size_t steps = 0;
  for (auto _ : state) {
    if (steps++ % 20 == 0) session.reset();
    benchmark::DoNotOptimize(session.step(static_cast<std::uint32_t>(rng() % n)));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * config.accesses_per_symbol);
}
BENCHMARK(BM_AdapterStep);

void BM_ReedSolomonDecode(benchmark::State& state) {
  const ReedSolomonCodec codec(64, 8, 8);
  const auto flips = static_cast<std::size_t>(state.range(0));
  BitVector word = codec.encode(BitVector(64, 0x0123456789abcdefULL));
  for (std::size_t b = 0; b < flips; ++b) word.flip(b);
  for (auto _ : state) benchmark::DoNotOptimize(codec.decode(word));
}
BENCHMARK(BM_ReedSolomonDecode)->Arg(0)->Arg(2)->Arg(4)->Arg(5);

void BM_Hamming84Decode(benchmark::State& state) {
  const Hamming84Codec codec(64);
  BitVector word = codec.encode(BitVector(64, 0x0123456789abcdefULL));
  word.flip(0);
  for (auto _ : state) benchmark::DoNotOptimize(codec.decode(word));
}
BENCHMARK(BM_Hamming84Decode);

void BM_LearnDefault(benchmark::State& state) {
  RunConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(run_session(config));
}
BENCHMARK(BM_LearnDefault)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace
BENCHMARK_MAIN();
