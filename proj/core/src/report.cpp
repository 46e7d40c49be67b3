#include "lexbias/report.hpp"

#include <algorithm>
#include <cmath>
#include <set>


namespace lexbias::report {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string csv_field(std::string s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string region_header() {
  std::string h = "period";
  for (auto r : corpus::kRegions) h += "," + std::string(corpus::region_name(r));
  return h + "\n";
}

}  // namespace

std::string_view tool_version() noexcept { return LEXBIAS_VERSION; }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string RunManifest::id() const {
  const json core = {{"subcommand", subcommand}, {"config", config}, {"inputs", inputs},
                     {"seed", seed},             {"version", version}};
  return fnv1a_hex(core.dump());
}

std::string path_digest(const fs::path& path) {
  if (fs::is_regular_file(path)) return file_digest(path);
  if (!fs::is_directory(path)) throw InvalidInput("no such file or directory: " + path.string());
  std::vector<std::pair<std::string, std::string>> entries;
  for (const auto& e : fs::recursive_directory_iterator(path)) {
    if (e.is_regular_file()) {
      entries.emplace_back(fs::relative(e.path(), path).generic_string(), file_digest(e.path()));
    }
  }
  std::sort(entries.begin(), entries.end());
  std::string text;
  for (const auto& [p, d] : entries) text += p + "\t" + d + "\n";
  return fnv1a_hex(text);
}

void RunManifest::add_input(const fs::path& path) { inputs[path.string()] = path_digest(path); }

json to_json(const RunManifest& m) {
  json timings = json::object();
  for (const auto& [k, v] : m.timings) timings[k] = v;
  return {{"schema", "lexbias.run_manifest/1"},
          {"id", m.id()},
          {"subcommand", m.subcommand},
          {"config", m.config},
          {"inputs", m.inputs},
          {"seed", m.seed},
          {"version", m.version},
          {"timings", timings},
          {"outputs", m.outputs}};
}

RunManifest manifest_from_json(const json& j) {
  try {
    RunManifest m;
    m.subcommand = j.at("subcommand").get<std::string>();
    m.config = j.at("config");
    m.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.version = j.at("version").get<std::string>();
    m.timings = j.value("timings", std::map<std::string, double>{});
    m.outputs = j.value("outputs", std::vector<std::string>{});
    return m;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed run manifest: ") + e.what());
  }
}

ReportInputs load_results(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw InvalidInput("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  ReportInputs in;
  for (const auto& f : files) {
    json j;
    try {
      j = json::parse(read_file(f));
    } catch (const json::exception&) {
      in.warnings.push_back(f.filename().string() + ": not valid JSON");
      continue;
    }
    const std::string schema = j.is_object() ? j.value("schema", std::string()) : std::string();
    try {
      if (schema.rfind("lexbias.weat_result/", 0) == 0) {
        in.results.push_back(weat::weat_result_from_json(j));
      } else if (schema.rfind("lexbias.crosscorpus_report/", 0) == 0) {
        in.comparisons.push_back(crosscorpus::report_from_json(j));
      } else if (schema.rfind("lexbias.run_manifest/", 0) != 0) {
        in.warnings.push_back(f.filename().string() + ": unrecognized schema");
      }
    } catch (const InvalidInput& e) {
      in.warnings.push_back(f.filename().string() + ": " + e.what());
    }
  }
  std::stable_sort(in.results.begin(), in.results.end(),
                   [](const auto& a, const auto& b) { return corpus::shard_key_less(a.key, b.key); });
  return in;
}

Histogram histogram(const weat::WeatResult& r, std::size_t bins) {
  if (bins < 1) throw InvalidInput("histogram needs at least one bin");
  Histogram h{r.key, r.observed, 0.0, 0.0, std::vector<std::uint64_t>(bins, 0)};
  if (r.randomized.empty()) return h;
  const auto [lo, hi] = std::minmax_element(r.randomized.begin(), r.randomized.end());
  h.lower = *lo;
  h.width = (*hi - *lo) / static_cast<double>(bins);
  for (double v : r.randomized) {
    std::size_t k = 0;
    if (h.width > 0.0) {
      k = std::min(bins - 1, static_cast<std::size_t>((v - h.lower) / h.width));
    }
    ++h.counts[k];
  }
  return h;
}

ReportBundle build_report(const ReportInputs& inputs, const std::vector<corpus::CorpusShard>& shards,
                          const ReportOptions& options, const std::string& manifest_id) {
  ReportBundle bundle;
  std::vector<std::string> warnings = inputs.warnings;

  std::vector<std::string> periods = options.periods;
  std::map<std::pair<std::string, std::string>, const weat::WeatResult*> cells;
  for (const auto& r : inputs.results) {
    if (!corpus::parse_region(r.key.region)) {
      warnings.push_back(r.key.label() + ": region outside the grid");
      continue;
    }
    if (std::find(periods.begin(), periods.end(), r.key.period) == periods.end()) {
      warnings.push_back(r.key.label() + ": period outside the grid");
      continue;
    }
    if (!cells.emplace(std::pair{r.key.period, r.key.region}, &r).second) {
      warnings.push_back(r.key.label() + ": duplicate result ignored");
    }
  }

  std::string sig = region_header();
  std::string norm = region_header();
  json grid = json::array();
  for (const auto& p : periods) {
    sig += csv_field(p);
    norm += csv_field(p);
    json row = {{"period", p}};
    for (auto reg : corpus::kRegions) {
      const std::string name(corpus::region_name(reg));
      const auto it = cells.find({p, name});
      sig += ",";
      norm += ",";
      if (it == cells.end()) {
        row[name] = nullptr;
        continue;
      }
      const auto& r = *it->second;
      sig += r.significant ? "yes" : "no";
      if (r.normalized) norm += format_number(*r.normalized);
      row[name] = {{"significant", r.significant},
                   {"p_value", r.p_value},
                   {"normalized", r.normalized ? json(*r.normalized) : json(nullptr)}};
    }
    sig += "\n";
    norm += "\n";
    grid.push_back(std::move(row));
  }
  bundle.files["significance_grid.csv"] = sig;
  bundle.files["normalized_grid.csv"] = norm;

  std::string hist = "corpus,bin,lower,upper,count,observed\n";
  json hists = json::array();
  for (const auto& r : inputs.results) {
    const auto h = histogram(r, options.histogram_bins);
    for (std::size_t k = 0; k < h.counts.size(); ++k) {
      const double lo = h.lower + h.width * static_cast<double>(k);
      const double hi = k + 1 == h.counts.size() && !r.randomized.empty()
                            ? *std::max_element(r.randomized.begin(), r.randomized.end())
                            : h.lower + h.width * static_cast<double>(k + 1);
      hist += csv_field(r.key.label()) + "," + std::to_string(k) + "," + format_number(lo) + "," +
              format_number(hi) + "," + std::to_string(h.counts[k]) + "," + format_number(h.observed) +
              "\n";
    }
    hists.push_back({{"corpus", r.key.label()},
                     {"observed", h.observed},
                     {"lower", h.lower},
                     {"width", h.width},
                     {"counts", h.counts}});
  }
  bundle.files["histograms.csv"] = hist;

  // Top terms pooled per period and per region.
  auto top_table = [&](const std::string& column, auto key_of, const std::vector<std::string>& groups) {
    std::string out = column + ",rank,term,count\n";
    json tables = json::object();
    for (const auto& g : groups) {
      std::vector<const corpus::CorpusShard*> members;
      for (const auto& s : shards) {
        if (key_of(s.key) == g) members.push_back(&s);
      }
      json rows = json::array();
      if (!members.empty()) {
        const auto merged = corpus::merge_shards(members, {g, g});
        std::size_t rank = 1;
        for (const auto& [term, count] : corpus::term_frequencies(merged, options.top_terms)) {
          out += csv_field(g) + "," + std::to_string(rank++) + "," + csv_field(term) + "," +
                 std::to_string(count) + "\n";
          rows.push_back({{"term", term}, {"count", count}});
        }
      }
      tables[g] = rows;
    }
    return std::pair{out, tables};
  };
  std::vector<std::string> regions;
  for (auto r : corpus::kRegions) regions.emplace_back(corpus::region_name(r));
  auto [by_period_csv, by_period] =
      top_table("period", [](const corpus::ShardKey& k) { return k.period; }, periods);
  auto [by_region_csv, by_region] =
      top_table("region", [](const corpus::ShardKey& k) { return k.region; }, regions);
  bundle.files["top_terms_by_period.csv"] = by_period_csv;
  bundle.files["top_terms_by_region.csv"] = by_region_csv;

  json comparisons = json::array();
  for (const auto& c : inputs.comparisons) comparisons.push_back(crosscorpus::to_json(c));

  json doc = {{"schema", "lexbias.report/1"},
              {"periods", periods},
              {"regions", regions},
              {"grid", grid},
              {"histograms", hists},
              {"top_terms_by_period", by_period},
              {"top_terms_by_region", by_region},
              {"comparisons", comparisons},
              {"warnings", warnings}};
  if (!manifest_id.empty()) doc["manifest"] = manifest_id;
  bundle.files["report.json"] = dump(doc);
  return bundle;
}

std::vector<fs::path> write_bundle(const ReportBundle& bundle, const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& [name, text] : bundle.files) {
    write_file(dir / name, text);
    out.push_back(dir / name);
  }
  return out;
}

}  // namespace lexbias::report
