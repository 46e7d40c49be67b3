#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lexbias/corpus.hpp"
#include "lexbias/embedding.hpp"
#include "lexbias/weat.hpp"

namespace lexbias::synthgen {

/// Parameters of a synthetic corpus with a planted association. X markers
/// are pulled towards A terms and Y markers towards B terms with strength
/// beta, which moves the WEAT statistic in the positive direction; beta = 0
/// places everything uniformly.
struct BiasSpec {
  std::vector<std::string> x_markers;
  std::vector<std::string> y_markers;
  std::vector<std::string> a_terms;
  std::vector<std::string> b_terms;
  double beta = 0.0;
  std::size_t background_vocab = 1000;
  std::size_t documents = 5000;
  std::size_t min_length = 20;  // background tokens per document
  std::size_t max_length = 40;
  /// Marker/term placements per document.
  std::size_t events_per_doc = 2;
  double zipf_exponent = 1.1;
  /// Largest marker-term distance of a biased placement.
  std::uint32_t adjacency = 3;
  std::uint64_t seed = 0;

  /// 8 + 8 markers and 10 + 10 attribute terms with synthetic spellings.
  static BiasSpec standard(double beta, std::size_t documents, std::uint64_t seed);

  void validate() const;
  /// The word sets a WEAT on the generated corpus should use.
  weat::WordSets word_sets() const;
  /// Smallest document count that gives every marker at least `min_count`
  /// occurrences.
  std::size_t marker_floor(std::uint64_t min_count) const;
};

/// Deterministic in spec.seed; document i uses its own derived stream.
corpus::CorpusShard generate(const BiasSpec& spec);

BiasSpec spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BiasSpec& spec);

struct SweepRow {
  double beta = 0.0;
  std::size_t documents = 0;
  std::uint64_t seed = 0;
  std::optional<double> observed;
  std::optional<double> normalized;
  std::optional<double> p_value;
  std::string error;  // empty on success
};

/// Runs generate -> train -> WEAT for each spec. A failing spec yields a row
/// with `error` set instead of aborting the sweep.
std::vector<SweepRow> sweep(const std::vector<BiasSpec>& specs, const embedding::TrainConfig& train,
                            const weat::WeatConfig& test);

/// `beta,documents,seed,observed,normalized,p_value,status`
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace lexbias::synthgen
