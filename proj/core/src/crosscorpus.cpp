#include "lexbias/crosscorpus.hpp"

#include <algorithm>
#include <cmath>

#include "lexbias/common.hpp"

namespace lexbias::crosscorpus {

NormalizedStat normalized_stat(const weat::WeatResult& r) {
  if (!(r.randomized_stdev > 0.0) || !r.normalized) {
    throw UndefinedStatistic("normalized statistic of '" + r.key.label() +
                             "' is undefined: randomized sample has zero standard deviation");
  }
  return {r.key, r.observed / r.randomized_stdev};
}

double stat_difference(const NormalizedStat& v, const NormalizedStat& w) {
  if (!std::isfinite(v.value) || !std::isfinite(w.value)) {
    throw InvalidInput("stat_difference: statistics must be finite");
  }
  return v.value - w.value;
}

void SyntheticCorpusSpec::validate() const {
  if (count < 2) throw InvalidInput("reference corpus count must be at least 2");
  if (min_bytes > max_bytes) throw InvalidInput("min size exceeds max size");
  if (max_bytes == 0) throw InvalidInput("max size must be positive");
  if (segment_docs < 1) throw InvalidInput("segment length must be at least 1 document");
}

std::vector<corpus::CorpusShard> generate_reference_corpora(
    const std::vector<corpus::CorpusShard>& sources, const SyntheticCorpusSpec& spec) {
  spec.validate();
  struct Segment {
    const corpus::CorpusShard* shard;
    std::size_t begin;
    std::size_t end;
  };
  std::vector<Segment> segments;
  std::uint64_t available = 0;
  for (const auto& s : sources) {
    available += s.byte_size();
    for (std::size_t b = 0; b < s.documents.size(); b += spec.segment_docs) {
      segments.push_back({&s, b, std::min(s.documents.size(), b + spec.segment_docs)});
    }
  }
  if (segments.empty()) throw InvalidInput("no source documents for reference corpora");
  if (available < spec.max_bytes) {
    throw InvalidInput("insufficient source data: need " + std::to_string(spec.max_bytes) +
                       " bytes, have " + std::to_string(available));
  }

  const int width = spec.count > 100 ? static_cast<int>(std::to_string(spec.count - 1).size()) : 2;
  std::vector<corpus::CorpusShard> out;
  out.reserve(spec.count);
  for (std::size_t k = 0; k < spec.count; ++k) {
    Rng rng = make_stream(spec.seed, k);
    const std::uint64_t target = spec.min_bytes + uniform_below(rng, spec.max_bytes - spec.min_bytes + 1);
    std::string idx = std::to_string(k);
    idx.insert(0, static_cast<std::size_t>(std::max(0, width - static_cast<int>(idx.size()))), '0');
    corpus::CorpusShard shard{{"reference", idx}, {}};
    std::uint64_t size = 0;
    std::size_t idle = 0;
    bool done = false;
    while (!done) {
      const auto& seg = segments[uniform_below(rng, segments.size())];
      bool progressed = false;
      for (std::size_t d = seg.begin; d < seg.end; ++d) {
        const auto& doc = seg.shard->documents[d];
        const auto bytes = corpus::document_bytes(doc);
        if (size + bytes > target) {
          if (size >= spec.min_bytes) done = true;
          break;
        }
        shard.documents.push_back(doc);
        size += bytes;
        progressed = true;
        if (size == target) {
          done = true;
          break;
        }
      }
      idle = progressed ? 0 : idle + 1;
      if (!done && idle > 10'000) {
        throw InvalidInput("cannot assemble reference corpus " + idx + ": documents too large for [" +
                           std::to_string(spec.min_bytes) + ", " + std::to_string(spec.max_bytes) +
                           "] bytes");
      }
    }
    out.push_back(std::move(shard));
  }
  return out;
}

std::string_view mode_name(DifferenceMode m) noexcept {
  return m == DifferenceMode::kSigned ? "signed" : "absolute";
}

double CrossCorpusReport::threshold() const {
  if (reference.empty()) throw InvalidInput("reference distribution is empty");
  std::vector<double> sorted = reference;
  std::sort(sorted.begin(), sorted.end());
  const double pos = (1.0 - level) * static_cast<double>(sorted.size());
  auto k = static_cast<std::size_t>(std::floor(pos + 1e-9));
  return sorted[std::min(k, sorted.size() - 1)];
}

CrossCorpusReport reference_from_results(std::vector<weat::WeatResult> results, DifferenceMode mode,
                                         double level) {
  if (!(level > 0.0 && level < 1.0)) throw InvalidInput("level must lie in (0, 1)");
  std::stable_sort(results.begin(), results.end(),
                   [](const auto& a, const auto& b) { return a.key.label() < b.key.label(); });
  CrossCorpusReport rep;
  rep.mode = mode;
  rep.level = level;
  for (const auto& r : results) {
    try {
      rep.corpus_stats.push_back(normalized_stat(r));
      rep.corpus_significant.push_back(r.significant);
      rep.shuffles = std::max(rep.shuffles, r.randomized.size());
    } catch (const UndefinedStatistic& e) {
      rep.warnings.push_back(std::string("excluded: ") + e.what());
    }
  }
  const auto& s = rep.corpus_stats;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const double d = stat_difference(s[i], s[j]);
      rep.reference.push_back(mode == DifferenceMode::kAbsolute ? std::abs(d) : d);
    }
  }
  return rep;
}

CrossCorpusReport reference_distribution(
    const std::vector<std::pair<corpus::ShardKey, embedding::EmbeddingSet>>& corpora,
    const weat::WordSets& sets, const weat::WeatConfig& cfg, DifferenceMode mode) {
  if (corpora.size() < 2) throw InvalidInput("reference distribution needs at least 2 corpora");
  std::vector<weat::WeatResult> results;
  std::vector<std::string> warnings;
  for (std::size_t k = 0; k < corpora.size(); ++k) {
    const auto& [key, emb] = corpora[k];
    weat::WeatConfig c = cfg;
    c.seed = derive_seed(cfg.seed, k);
    try {
      auto r = weat::randomization_test(weat::resolve(sets, emb), emb, c);
      r.key = key;
      results.push_back(std::move(r));
    } catch (const TestInvalid& e) {
      warnings.push_back("excluded '" + key.label() + "': " + e.what());
    }
  }
  auto rep = reference_from_results(std::move(results), mode, cfg.alpha);
  rep.shuffles = cfg.shuffles;
  rep.warnings.insert(rep.warnings.begin(), warnings.begin(), warnings.end());
  return rep;
}

bool significance(double observed, const CrossCorpusReport& report, double level) {
  CrossCorpusReport view;
  view.reference = report.reference;
  view.level = level;
  return observed > view.threshold();
}

double mean_pairwise_difference(const std::vector<NormalizedStat>& a,
                                const std::vector<NormalizedStat>& b, DifferenceMode mode) {
  if (a.empty() || a.size() != b.size()) {
    throw InvalidInput("mean_pairwise_difference: sequences must have equal non-zero length");
  }
  double s = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    if (a[t].key.period != b[t].key.period) {
      throw InvalidInput("period label mismatch: '" + a[t].key.period + "' vs '" + b[t].key.period + "'");
    }
    const double d = stat_difference(a[t], b[t]);
    s += mode == DifferenceMode::kAbsolute ? std::abs(d) : d;
  }
  return s / static_cast<double>(a.size());
}

const Comparison& add_comparison(CrossCorpusReport& report, std::string label, double value) {
  report.observed.push_back({std::move(label), value, significance(value, report, report.level)});
  return report.observed.back();
}

nlohmann::json to_json(const CrossCorpusReport& r) {
  nlohmann::json j;
  j["schema"] = "lexbias.crosscorpus_report/1";
  j["mode"] = mode_name(r.mode);
  j["level"] = r.level;
  j["shuffles"] = r.shuffles;
  j["corpus_count"] = r.corpus_stats.size();
  j["reference_count"] = r.reference.size();
  j["threshold"] = r.reference.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.threshold());
  nlohmann::json corpora = nlohmann::json::array();
  for (std::size_t i = 0; i < r.corpus_stats.size(); ++i) {
    corpora.push_back({{"index", i},
                       {"label", r.corpus_stats[i].key.label()},
                       {"region", r.corpus_stats[i].key.region},
                       {"period", r.corpus_stats[i].key.period},
                       {"statistic", r.corpus_stats[i].value},
                       {"significant", static_cast<bool>(r.corpus_significant[i])}});
  }
  j["corpora"] = corpora;
  j["reference"] = r.reference;
  nlohmann::json obs = nlohmann::json::array();
  for (const auto& c : r.observed) {
    obs.push_back({{"label", c.label}, {"value", c.value}, {"significant", c.significant}});
  }
  j["observed"] = obs;
  j["warnings"] = r.warnings;
  if (!r.manifest.empty()) j["manifest"] = r.manifest;
  return j;
}

CrossCorpusReport report_from_json(const nlohmann::json& j) {
  try {
    CrossCorpusReport r;
    const auto mode = j.at("mode").get<std::string>();
    if (mode == "signed") {
      r.mode = DifferenceMode::kSigned;
    } else if (mode == "absolute") {
      r.mode = DifferenceMode::kAbsolute;
    } else {
      throw InvalidInput("unknown difference mode '" + mode + "'");
    }
    r.level = j.at("level").get<double>();
    r.shuffles = j.at("shuffles").get<std::size_t>();
    for (const auto& c : j.at("corpora")) {
      r.corpus_stats.push_back({{c.at("region").get<std::string>(), c.at("period").get<std::string>()},
                                c.at("statistic").get<double>()});
      r.corpus_significant.push_back(c.at("significant").get<bool>());
    }
    r.reference = j.at("reference").get<std::vector<double>>();
    for (const auto& o : j.at("observed")) {
      r.observed.push_back({o.at("label").get<std::string>(), o.at("value").get<double>(),
                            o.at("significant").get<bool>()});
    }
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    if (j.contains("manifest")) r.manifest = j.at("manifest").get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed cross-corpus report: ") + e.what());
  }
}

std::string corpus_table_csv(const CrossCorpusReport& r) {
  std::string out = "corpus,label,statistic,significant\n";
  for (std::size_t i = 0; i < r.corpus_stats.size(); ++i) {
    out += std::to_string(i) + "," + r.corpus_stats[i].key.label() + "," +
           format_fixed(r.corpus_stats[i].value, 4) + "," +
           (r.corpus_significant[i] ? "yes" : "no") + "\n";
  }
  return out;
}

}  // namespace lexbias::crosscorpus
