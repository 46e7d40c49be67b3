#pragma once

#include "lexbias/corpus.hpp"
#include "lexbias/embedding.hpp"
#include "lexbias/weat.hpp"

namespace lexbias::pipeline {

struct Analysis {
  embedding::EmbeddingSet embeddings;
  weat::WeatResult result;
};

/// build_vocab -> count_cooccurrences -> train -> resolve -> randomization_test.
/// The WEAT result carries the shard key. Throws InvalidInput when the
/// vocabulary or table comes out empty and TestInvalid when a word set
/// resolves empty.
Analysis analyze_shard(const corpus::CorpusShard& shard, const weat::WordSets& sets,
                       const embedding::TrainConfig& train, const weat::WeatConfig& test);

}  // namespace lexbias::pipeline
