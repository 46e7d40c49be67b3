#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexbias/common.hpp"
#include "lexbias/text.hpp"

namespace lexbias::corpus {

struct Date {
  int year = 0;
  int month = 1;
  int day = 1;

  /// Accepts YYYY, YYYY-MM or YYYY-MM-DD. Returns nullopt on anything else.
  static std::optional<Date> parse(std::string_view text);
  auto operator<=>(const Date&) const = default;
};

inline constexpr int kMinYear = 1600;
inline constexpr int kMaxYear = 2100;

struct RawDocument {
  std::string id;
  std::optional<Date> decision_date;
  std::string jurisdiction;
  std::string text;
};

/// Parses one line-delimited JSON record with fields id, decision_date,
/// jurisdiction and text. A null or empty decision_date yields a document
/// without a date; every other defect throws InvalidInput.
RawDocument parse_record(std::string_view line);

enum class Region { kNortheast, kSouth, kMidwest, kWest, kFederal };

inline constexpr std::array<Region, 5> kRegions = {Region::kNortheast, Region::kSouth,
                                                   Region::kMidwest, Region::kWest,
                                                   Region::kFederal};

std::string_view region_name(Region r) noexcept;
std::optional<Region> parse_region(std::string_view name) noexcept;
/// Position of a region label in the canonical column order; unknown labels
/// sort after the five census regions.
int region_rank(std::string_view name) noexcept;

/// Jurisdiction code -> region. Codes are matched case-insensitively.
class RegionMap {
 public:
  /// US Census Bureau regions for the 50 states and DC; FED (alias US) is
  /// the federal region.
  static RegionMap census_default();
  /// Lines of `CODE REGION`; `#` comments. The result must be total over the
  /// codes of the default map.
  static RegionMap parse(std::string_view text);

  std::optional<Region> lookup(std::string_view code) const;
  const std::map<std::string, Region>& entries() const noexcept { return map_; }

 private:
  std::map<std::string, Region> map_;
};

struct Period {
  int start = 0;  // inclusive year
  int end = 0;    // exclusive year

  bool contains(int year) const noexcept { return year >= start && year < end; }
  /// "1860-1889"
  std::string label() const;
};

/// Ordered, contiguous, non-overlapping half-open year intervals.
class PeriodScheme {
 public:
  explicit PeriodScheme(std::vector<Period> periods);

  /// 30-year intervals from 1860 through 2009.
  static PeriodScheme default_scheme();
  /// Lines of `START END` (END exclusive); `#` comments.
  static PeriodScheme parse(std::string_view text);

  std::optional<std::size_t> find(int year) const noexcept;
  const std::vector<Period>& periods() const noexcept { return periods_; }
  std::vector<std::string> labels() const;

 private:
  std::vector<Period> periods_;
};

struct ShardKey {
  std::string region;
  std::string period;

  /// "<region>_<period>", also the shard file stem.
  std::string label() const { return region + "_" + period; }
  auto operator<=>(const ShardKey&) const = default;
};

/// Preprocessed documents of one (region, period) cell.
struct CorpusShard {
  ShardKey key;
  std::vector<std::vector<std::string>> documents;

  std::size_t document_count() const noexcept { return documents.size(); }
  std::uint64_t token_count() const noexcept;
  /// Size of the shard file this shard serializes to.
  std::uint64_t byte_size() const noexcept;
};

/// Bytes one document occupies in a shard file, newline included.
std::uint64_t document_bytes(const std::vector<std::string>& doc) noexcept;

/// Canonical shard order: periods ascending, then census region order.
bool shard_key_less(const ShardKey& a, const ShardKey& b) noexcept;

enum class SkipReason { kMalformed, kMissingDate, kUnknownJurisdiction, kOutOfRange, kDuplicateId };
std::string_view skip_reason_name(SkipReason r) noexcept;

struct IngestResult {
  std::vector<CorpusShard> shards;  // canonical order, empty cells omitted
  std::uint64_t records = 0;
  std::map<SkipReason, std::uint64_t> skipped;
  std::vector<std::string> diagnostics;

  std::uint64_t skipped_total() const noexcept;
  std::uint64_t assigned_total() const noexcept;
};

struct IngestOptions {
  PreprocessConfig preprocess = PreprocessConfig::defaults();
  unsigned threads = 1;
};

/// Assigns records to shards and preprocesses them. Documents inside a shard
/// are ordered by id, so the output does not depend on input order or thread
/// count. Per-record problems are diagnosed and skipped.
IngestResult ingest_lines(const std::vector<std::string>& lines, const RegionMap& regions,
                          const PeriodScheme& periods, const IngestOptions& options = {});

/// Reads a .jsonl file, or every *.jsonl file of a directory in name order.
/// An unreadable source throws InvalidInput.
IngestResult ingest(const std::filesystem::path& source, const RegionMap& regions,
                    const PeriodScheme& periods, const IngestOptions& options = {});

std::vector<std::string> preprocess(const RawDocument& doc, const PreprocessConfig& cfg);

/// Top-k terms by descending count; ties broken by ascending term.
std::vector<std::pair<std::string, std::uint64_t>> term_frequencies(const CorpusShard& shard,
                                                                    std::size_t k);

struct ShardStatsRow {
  std::string region;
  std::string period;
  std::uint64_t documents = 0;
  std::uint64_t tokens = 0;
};

/// One row per shard in canonical order.
std::vector<ShardStatsRow> shard_stats(const std::vector<CorpusShard>& shards);
/// `region,period,documents,tokens`
std::string stats_csv(const std::vector<ShardStatsRow>& rows);

/// Concatenates shards into one under `key` (documents in argument order).
CorpusShard merge_shards(const std::vector<const CorpusShard*>& shards, ShardKey key);

std::string serialize_shard(const CorpusShard& shard);
CorpusShard parse_shard(std::string_view text, ShardKey key);
std::filesystem::path write_shard(const CorpusShard& shard, const std::filesystem::path& dir);
/// Key taken from the file stem, split at the first underscore.
CorpusShard read_shard(const std::filesystem::path& file);
/// All *.txt shard files of a directory, in canonical key order.
std::vector<CorpusShard> read_shard_dir(const std::filesystem::path& dir);

}  // namespace lexbias::corpus
