#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lexbias/common.hpp"
#include "lexbias/corpus.hpp"
#include "lexbias/embedding.hpp"

namespace lexbias::weat {

/// Target sets X, Y (names) and attribute sets A (pleasant), B (unpleasant).
struct WordSets {
  std::vector<std::string> x;
  std::vector<std::string> y;
  std::vector<std::string> a;
  std::vector<std::string> b;

  /// Non-empty sets, no duplicates within a set, X and Y disjoint, A and B
  /// disjoint, and no term shared between a name list and a term list.
  void validate() const;

  /// Shipped lists: X = traditionally Black names, Y = traditionally White
  /// names, A = pleasant and B = unpleasant AFINN-derived terms.
  static WordSets defaults();
  /// names_black.txt, names_white.txt, pleasant.txt, unpleasant.txt.
  static WordSets load_dir(const std::filesystem::path& dir);
  void save_dir(const std::filesystem::path& dir) const;
};

/// A word set restricted to the terms that have vectors.
struct ResolvedSet {
  std::vector<std::string> terms;
  std::vector<std::size_t> rows;  // rows in the embedding set
  std::vector<std::string> dropped;

  std::size_t size() const noexcept { return rows.size(); }
  bool empty() const noexcept { return rows.empty(); }
};

struct ResolvedWordSets {
  ResolvedSet x;
  ResolvedSet y;
  ResolvedSet a;
  ResolvedSet b;

  std::size_t dropped_count() const noexcept {
    return x.dropped.size() + y.dropped.size() + a.dropped.size() + b.dropped.size();
  }
  /// Throws TestInvalid naming the first set that resolved empty.
  void require_valid() const;
};

ResolvedWordSets resolve(const WordSets& sets, const embedding::EmbeddingSet& emb);

/// Cosine similarity in double precision; 0 if either vector is zero.
double cosine(std::span<const float> u, std::span<const float> v) noexcept;

/// s(w, A, B): mean cosine of w to A minus mean cosine of w to B. Returns
/// nullopt when w has no vector, so the caller can omit it. Throws
/// TestInvalid when A or B resolves empty.
std::optional<double> association(std::string_view w, const ResolvedSet& a, const ResolvedSet& b,
                                  const embedding::EmbeddingSet& emb);

enum class StatisticForm {
  kSum,   // sum over X of s(x) minus sum over Y of s(y)
  kMean,  // mean over X minus mean over Y (non-default variant)
};

std::string_view form_name(StatisticForm f) noexcept;
std::optional<StatisticForm> parse_form(std::string_view name) noexcept;

double weat_statistic(const ResolvedWordSets& sets, const embedding::EmbeddingSet& emb,
                      StatisticForm form = StatisticForm::kSum);

struct WeatConfig {
  std::size_t shuffles = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  StatisticForm form = StatisticForm::kSum;
  unsigned threads = 1;

  void validate() const;
};

struct WeatResult {
  corpus::ShardKey key;
  StatisticForm form = StatisticForm::kSum;
  double observed = 0.0;
  std::vector<double> randomized;
  double randomized_stdev = 0.0;
  /// observed / randomized_stdev; empty when the stdev is zero.
  std::optional<double> normalized;
  double p_value = 1.0;
  double alpha = 0.05;
  bool significant = false;
  std::uint64_t seed = 0;
  std::size_t size_x = 0, size_y = 0, size_a = 0, size_b = 0;
  std::vector<std::string> dropped_x, dropped_y, dropped_a, dropped_b;
  std::string manifest;

  /// Critical value: the smallest randomized statistic t such that a result
  /// at t would be significant at alpha.
  double critical_value() const;
};

/// Shuffles the pooled A and B terms into pseudo-categories of the original
/// sizes `cfg.shuffles` times and recomputes the statistic each time.
/// p = (1 + #{t >= observed}) / (1 + N); significant iff p <= alpha. The
/// stream of shuffle i is derived from (seed, i), so results do not depend on
/// cfg.threads.
WeatResult randomization_test(const ResolvedWordSets& sets, const embedding::EmbeddingSet& emb,
                              const WeatConfig& cfg);

/// Statistic of one explicit split of the pooled attribute terms: entries of
/// `in_a` (indexed over A then B) mark the terms labeled pleasant.
/// Membership mask of shuffle `index`: a permutation of the pooled A and B
/// terms drawn from stream (seed, index), first `na` positions assigned to A.
std::vector<bool> shuffle_split(std::size_t na, std::size_t nb, std::uint64_t seed, std::size_t index);

double split_statistic(const ResolvedWordSets& sets, const embedding::EmbeddingSet& emb,
                       const std::vector<bool>& in_a, StatisticForm form = StatisticForm::kSum);

nlohmann::json to_json(const WeatResult& r);
WeatResult weat_result_from_json(const nlohmann::json& j);

}  // namespace lexbias::weat
