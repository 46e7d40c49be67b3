#include <benchmark/benchmark.h>

#include "lexbias/corpus.hpp"
#include "lexbias/embedding.hpp"
#include "lexbias/synthgen.hpp"
#include "lexbias/weat.hpp"

using namespace lexbias;

namespace {

const corpus::CorpusShard& shard() {
  static const auto s = synthgen::generate(synthgen::BiasSpec::standard(0.5, 5'000, 1));
  return s;
}

const embedding::CooccurrenceTable& table() {
  static const auto t = embedding::count_cooccurrences(shard(), embedding::build_vocab(shard(), 5), 10);
  return t;
}

const embedding::EmbeddingSet& trained() {
  static const auto e = [] {
    embedding::TrainConfig cfg;
    cfg.dim = 50;
    cfg.window = 10;
    cfg.min_count = 5;
    cfg.iterations = 5;
    return embedding::train(table(), cfg);
  }();
  return e;
}

void BM_Generate(benchmark::State& state) {
  auto spec = synthgen::BiasSpec::standard(0.5, static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(synthgen::generate(spec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Generate)->Arg(1'000)->Arg(5'000)->Unit(benchmark::kMillisecond);

void BM_Cooccurrence(benchmark::State& state) {
  const auto vocab = embedding::build_vocab(shard(), 5);
  const auto window = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(embedding::count_cooccurrences(shard(), vocab, window));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(shard().token_count()));
}
BENCHMARK(BM_Cooccurrence)->Arg(5)->Arg(10)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_TrainIteration(benchmark::State& state) {
  embedding::TrainConfig cfg;
  cfg.dim = static_cast<std::uint32_t>(state.range(0));
  cfg.window = 10;
  cfg.min_count = 5;
  cfg.iterations = 1;
  for (auto _ : state) benchmark::DoNotOptimize(embedding::train(table(), cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(table().upper().size()));
}
BENCHMARK(BM_TrainIteration)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_WeatStatistic(benchmark::State& state) {
  const auto sets = weat::resolve(synthgen::BiasSpec::standard(0.5, 1, 0).word_sets(), trained());
  for (auto _ : state) benchmark::DoNotOptimize(weat::weat_statistic(sets, trained()));
}
BENCHMARK(BM_WeatStatistic);

void BM_RandomizationTest(benchmark::State& state) {
  const auto sets = weat::resolve(synthgen::BiasSpec::standard(0.5, 1, 0).word_sets(), trained());
  weat::WeatConfig cfg;
  cfg.shuffles = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(weat::randomization_test(sets, trained(), cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RandomizationTest)->Arg(1'000)->Arg(10'000)->Unit(benchmark::kMillisecond);

void BM_BinaryRoundTrip(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(embedding::decode_binary(embedding::encode_binary(trained())));
  }
}
BENCHMARK(BM_BinaryRoundTrip)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
