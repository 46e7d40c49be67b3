#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lexbias/corpus.hpp"
#include "lexbias/embedding.hpp"
#include "lexbias/weat.hpp"

namespace lexbias::crosscorpus {

/// Observed WEAT statistic over the standard deviation of its randomized sample.
struct NormalizedStat {
  corpus::ShardKey key;
  double value = 0.0;
};

class UndefinedStatistic : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Throws UndefinedStatistic when the randomized sample has zero spread.
NormalizedStat normalized_stat(const weat::WeatResult& r);

/// v - w. Both values must be finite.
double stat_difference(const NormalizedStat& v, const NormalizedStat& w);

struct SyntheticCorpusSpec {
  std::size_t count = 20;
  std::uint64_t min_bytes = 1'000'000;
  std::uint64_t max_bytes = 2'000'000;
  std::size_t segment_docs = 50;
  std::uint64_t seed = 0;

  void validate() const;
};

/// K corpora, each assembled from contiguous runs of `segment_docs` whole
/// documents sampled uniformly with replacement across all sources, until a
/// size drawn uniformly from [min_bytes, max_bytes] is reached. Keys are
/// ("reference", "00"), ("reference", "01"), ...
std::vector<corpus::CorpusShard> generate_reference_corpora(
    const std::vector<corpus::CorpusShard>& sources, const SyntheticCorpusSpec& spec);

enum class DifferenceMode { kSigned, kAbsolute };
std::string_view mode_name(DifferenceMode m) noexcept;

struct Comparison {
  std::string label;
  double value = 0.0;
  bool significant = false;
};

struct CrossCorpusReport {
  /// Per-corpus rows, ordered by corpus label.
  std::vector<NormalizedStat> corpus_stats;
  std::vector<bool> corpus_significant;
  /// Corpus i minus corpus j for every i < j (absolute values in kAbsolute mode).
  std::vector<double> reference;
  std::vector<std::string> warnings;
  DifferenceMode mode = DifferenceMode::kSigned;
  double level = 0.05;
  std::size_t shuffles = 0;
  std::vector<Comparison> observed;
  std::string manifest;

  /// Empirical (1 - level) quantile: the order statistic at index
  /// floor((1 - level) * n) of the sorted reference.
  double threshold() const;
};

/// Builds the reference from finished WEAT results. Results without a
/// defined normalized statistic are excluded with a warning.
CrossCorpusReport reference_from_results(std::vector<weat::WeatResult> results,
                                         DifferenceMode mode = DifferenceMode::kSigned,
                                         double level = 0.05);

/// Runs the WEAT on every embedding set (corpus k uses seed derive_seed(seed, k))
/// and builds the reference. Corpora whose test is invalid are dropped.
CrossCorpusReport reference_distribution(
    const std::vector<std::pair<corpus::ShardKey, embedding::EmbeddingSet>>& corpora,
    const weat::WordSets& sets, const weat::WeatConfig& cfg,
    DifferenceMode mode = DifferenceMode::kSigned);

/// True iff observed strictly exceeds the (1 - level) quantile of the reference.
bool significance(double observed, const CrossCorpusReport& report, double level);

/// Mean over aligned periods of a_t - b_t (or |a_t - b_t|). Period labels must
/// match position by position.
double mean_pairwise_difference(const std::vector<NormalizedStat>& a,
                                const std::vector<NormalizedStat>& b,
                                DifferenceMode mode = DifferenceMode::kSigned);

/// Appends a labeled comparison evaluated against the report's reference.
const Comparison& add_comparison(CrossCorpusReport& report, std::string label, double value);

nlohmann::json to_json(const CrossCorpusReport& r);
CrossCorpusReport report_from_json(const nlohmann::json& j);
/// `corpus,statistic,significant`
std::string corpus_table_csv(const CrossCorpusReport& r);

}  // namespace lexbias::crosscorpus
