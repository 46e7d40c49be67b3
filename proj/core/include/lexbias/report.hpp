#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lexbias/corpus.hpp"
#include "lexbias/crosscorpus.hpp"
#include "lexbias/weat.hpp"

namespace lexbias::report {

std::string_view tool_version() noexcept;

/// Provenance of one CLI invocation.
struct RunManifest {
  std::string subcommand;
  nlohmann::json config = nlohmann::json::object();  // fully resolved
  std::map<std::string, std::string> inputs;         // path -> digest
  std::uint64_t seed = 0;
  std::string version{tool_version()};
  std::map<std::string, double> timings;  // seconds per phase
  std::vector<std::string> outputs;

  /// Digest over everything but timings and outputs, so identical runs share
  /// an id.
  std::string id() const;
  /// Digests `path` (a file, or every regular file below a directory).
  void add_input(const std::filesystem::path& path);
};

nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

/// Digest of a file, or of the sorted (relative path, digest) list of a directory.
std::string path_digest(const std::filesystem::path& path);

/// Canonical JSON text: sorted keys, two-space indent, trailing newline.
std::string dump(const nlohmann::json& j);

struct ReportInputs {
  std::vector<weat::WeatResult> results;
  std::vector<crosscorpus::CrossCorpusReport> comparisons;
  std::vector<std::string> warnings;
};

/// Reads every *.json below `dir` and sorts it by schema. Unknown or
/// unparsable files become warnings.
ReportInputs load_results(const std::filesystem::path& dir);

struct ReportOptions {
  std::vector<std::string> periods = corpus::PeriodScheme::default_scheme().labels();
  std::size_t histogram_bins = 20;
  std::size_t top_terms = 10;
};

struct Histogram {
  corpus::ShardKey key;
  double observed = 0.0;
  double lower = 0.0;
  double width = 0.0;
  std::vector<std::uint64_t> counts;
};

/// Equal-width bins over [min, max] of the randomized sample; the maximum
/// falls into the last bin.
Histogram histogram(const weat::WeatResult& r, std::size_t bins);

/// CSV artifacts keyed by file name, plus report.json.
struct ReportBundle {
  std::map<std::string, std::string> files;
};

/// Grids have one row per period and one column per census region; missing
/// cells are empty fields. `shards` feeds the top-terms tables and may be empty.
ReportBundle build_report(const ReportInputs& inputs, const std::vector<corpus::CorpusShard>& shards,
                          const ReportOptions& options, const std::string& manifest_id);

/// Writes every file of the bundle into `dir`; returns the written paths.
std::vector<std::filesystem::path> write_bundle(const ReportBundle& bundle,
                                                const std::filesystem::path& dir);

}  // namespace lexbias::report
