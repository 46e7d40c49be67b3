#include "lexbias/pipeline.hpp"

namespace lexbias::pipeline {

Analysis analyze_shard(const corpus::CorpusShard& shard, const weat::WordSets& sets,
                       const embedding::TrainConfig& train, const weat::WeatConfig& test) {
  train.validate();
  test.validate();
  auto vocab = embedding::build_vocab(shard, train.min_count);
  if (vocab.empty()) {
    throw InvalidInput("shard '" + shard.key.label() + "' has no term with frequency >= " +
                       std::to_string(train.min_count));
  }
  auto table = embedding::count_cooccurrences(shard, vocab, train.window, train.threads);
  if (table.empty()) throw InvalidInput("shard '" + shard.key.label() + "' has no co-occurrences");
  Analysis out{embedding::train(table, train), {}};
  const auto resolved = weat::resolve(sets, out.embeddings);
  out.result = weat::randomization_test(resolved, out.embeddings, test);
  out.result.key = shard.key;
  return out;
}

}  // namespace lexbias::pipeline
