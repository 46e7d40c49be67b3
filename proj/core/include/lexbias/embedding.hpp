#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexbias/common.hpp"
#include "lexbias/corpus.hpp"

namespace lexbias::embedding {

/// Terms with their corpus frequency, ordered by descending frequency then
/// term; ids are positions in that order.
class Vocabulary {
 public:
  struct Entry {
    std::string term;
    std::uint64_t count = 0;
    bool operator==(const Entry&) const = default;
  };

  Vocabulary() = default;
  /// Entries are reordered into canonical order. Duplicate terms throw.
  explicit Vocabulary(std::vector<Entry> entries);

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  const std::string& term(std::uint32_t id) const { return entries_.at(id).term; }
  std::uint64_t count(std::uint32_t id) const { return entries_.at(id).count; }
  std::optional<std::uint32_t> id(std::string_view term) const;

  bool operator==(const Vocabulary& o) const { return entries_ == o.entries_; }

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

/// Every term of the shard occurring at least `min_count` times.
Vocabulary build_vocab(const corpus::CorpusShard& shard, std::uint64_t min_count);

struct CooccurrenceEntry {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  double weight = 0.0;
  bool operator==(const CooccurrenceEntry&) const = default;
};

/// Largest window for which counts are accumulated exactly as integer
/// multiples of 1/lcm(1..W). Larger windows accumulate in double precision.
inline constexpr std::uint32_t kExactWindowLimit = 24;

/// Symmetric distance-weighted co-occurrence counts. Only the upper triangle
/// (row <= col) is stored, so symmetry holds exactly.
class CooccurrenceTable {
 public:
  CooccurrenceTable() = default;
  /// `upper` must hold distinct (row <= col) entries with positive weights.
  CooccurrenceTable(Vocabulary vocab, std::uint32_t window, std::vector<CooccurrenceEntry> upper);

  const Vocabulary& vocabulary() const noexcept { return vocab_; }
  std::uint32_t window() const noexcept { return window_; }
  bool empty() const noexcept { return upper_.empty(); }

  /// X(i, j); zero when absent.
  double at(std::uint32_t i, std::uint32_t j) const;
  /// Stored upper-triangle entries sorted by (row, col).
  const std::vector<CooccurrenceEntry>& upper() const noexcept { return upper_; }
  /// All nonzero ordered entries (i, j) and (j, i), sorted by (row, col).
  std::vector<CooccurrenceEntry> entries() const;
  std::size_t nonzero() const noexcept;
  /// Sum of X(i, j) over all ordered pairs.
  double total_weight() const noexcept;

 private:
  Vocabulary vocab_;
  std::uint32_t window_ = 0;
  std::vector<CooccurrenceEntry> upper_;
};

/// For each pair of in-vocabulary tokens at distance 1..W inside one
/// document, adds 1/distance to X(a, b) and X(b, a). Windows never cross
/// document boundaries. The result does not depend on `threads`.
CooccurrenceTable count_cooccurrences(const corpus::CorpusShard& shard, const Vocabulary& vocab,
                                      std::uint32_t window, unsigned threads = 1);

struct TrainConfig {
  std::uint32_t dim = 200;
  std::uint32_t iterations = 15;
  std::uint64_t min_count = 10;
  std::uint32_t window = 20;
  double x_max = 100.0;
  double alpha = 0.75;
  double learning_rate = 0.05;
  std::uint64_t seed = 0;
  /// 1 is the bit-reproducible mode; more threads run lock-free updates
  /// whose results depend on scheduling.
  unsigned threads = 1;

  void validate() const;
};

/// GloVe parameters in double precision, row-major (vocab x dim).
struct GloveParams {
  std::size_t vocab = 0;
  std::size_t dim = 0;
  std::vector<double> main;
  std::vector<double> context;
  std::vector<double> main_bias;
  std::vector<double> context_bias;

  GloveParams() = default;
  GloveParams(std::size_t v, std::size_t d);
  /// Every component uniform in (-0.5/d, 0.5/d).
  static GloveParams random(std::size_t v, std::size_t d, std::uint64_t seed);
};

/// f(x) = (x / x_max)^alpha below x_max, 1 above.
double glove_weight(double x, double x_max, double alpha) noexcept;

/// J = sum over ordered nonzero entries of f(X_ij) (w_i . c_j + b_i + b~_j - log X_ij)^2.
double glove_objective(const CooccurrenceTable& table, const GloveParams& p, double x_max,
                       double alpha);
/// dJ/dtheta, laid out like the parameters.
GloveParams glove_gradient(const CooccurrenceTable& table, const GloveParams& p, double x_max,
                           double alpha);

struct TrainingMetadata {
  std::uint32_t iterations = 0;
  double final_loss = 0.0;
  std::uint64_t seed = 0;
  /// Mean of f(X) * residual^2 over entries, accumulated during each pass.
  std::vector<double> loss_history;
  std::string vector_kind = "main+context";
};

/// Vocabulary terms with a main, context and combined (main + context)
/// vector each. Sets loaded from disk carry only combined vectors.
class EmbeddingSet {
 public:
  EmbeddingSet() = default;
  EmbeddingSet(std::vector<std::string> terms, std::size_t dim, std::vector<float> combined);
  EmbeddingSet(std::vector<std::string> terms, std::size_t dim, std::vector<float> main,
               std::vector<float> context);

  std::size_t size() const noexcept { return terms_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  std::optional<std::size_t> index(std::string_view term) const;
  bool contains(std::string_view term) const { return index(term).has_value(); }

  std::span<const float> vector(std::size_t i) const;
  std::optional<std::span<const float>> vector(std::string_view term) const;
  std::span<const float> main_vector(std::size_t i) const;
  std::span<const float> context_vector(std::size_t i) const;
  bool has_components() const noexcept { return !main_.empty(); }

  const std::vector<float>& combined_data() const noexcept { return combined_; }
  TrainingMetadata& metadata() noexcept { return meta_; }
  const TrainingMetadata& metadata() const noexcept { return meta_; }

  /// Multiplies every vector by `factor`.
  EmbeddingSet scaled(float factor) const;

 private:
  void build_index();

  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t dim_ = 0;
  std::vector<float> main_;
  std::vector<float> context_;
  std::vector<float> combined_;
  TrainingMetadata meta_;
};

class TrainingDiverged : public Error {
 public:
  using Error::Error;
};

/// AdaGrad over the shuffled nonzero entries for exactly cfg.iterations
/// passes. Throws TrainingDiverged naming the entry when a residual becomes
/// non-finite.
EmbeddingSet train(const CooccurrenceTable& table, const TrainConfig& cfg);
/// Same, starting from explicit parameters; returns the trained parameters too.
EmbeddingSet train_from(const CooccurrenceTable& table, const TrainConfig& cfg, GloveParams& params);

enum class FileFormat { kBinary, kText };

void save_binary(const EmbeddingSet& set, const std::filesystem::path& path);
void save_text(const EmbeddingSet& set, const std::filesystem::path& path);
void save(const EmbeddingSet& set, const std::filesystem::path& path, FileFormat format);

std::string encode_binary(const EmbeddingSet& set);
EmbeddingSet decode_binary(std::string_view bytes);
std::string encode_text(const EmbeddingSet& set);
EmbeddingSet decode_text(std::string_view text);

/// Detects the format from the leading magic bytes.
EmbeddingSet load(const std::filesystem::path& path);

}  // namespace lexbias::embedding
