#include "lexbias/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <nlohmann/json.hpp>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "lexbias/common.hpp"
#include "lexbias/parallel.hpp"

namespace lexbias::corpus {
namespace {

std::optional<int> parse_int(std::string_view s) {
  int v = 0;
  if (s.empty()) return std::nullopt;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 0x20);
  }
  return out;
}

}  // namespace

std::optional<Date> Date::parse(std::string_view text) {
  const auto parts = split(text, '-');
  if (parts.empty() || parts.size() > 3 || parts[0].size() != 4) return std::nullopt;
  Date d;
  auto y = parse_int(parts[0]);
  if (!y) return std::nullopt;
  d.year = *y;
  if (parts.size() >= 2) {
    auto m = parse_int(parts[1]);
    if (!m || *m < 1 || *m > 12 || parts[1].size() != 2) return std::nullopt;
    d.month = *m;
  }
  if (parts.size() == 3) {
    auto dd = parse_int(parts[2]);
    if (!dd || *dd < 1 || *dd > 31 || parts[2].size() != 2) return std::nullopt;
    d.day = *dd;
  }
  return d;
}

RawDocument parse_record(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidInput("record is not a JSON object");
  RawDocument doc;
  auto str_field = [&](const char* name) -> std::string {
    auto it = j.find(name);
    if (it == j.end()) throw InvalidInput(std::string("missing field '") + name + "'");
    if (!it->is_string()) throw InvalidInput(std::string("field '") + name + "' is not a string");
    return it->get<std::string>();
  };
  doc.id = str_field("id");
  if (doc.id.empty()) throw InvalidInput("empty id");
  doc.jurisdiction = str_field("jurisdiction");
  doc.text = str_field("text");
  if (!is_valid_utf8(doc.text)) throw InvalidInput("text is not valid UTF-8");
  auto it = j.find("decision_date");
  if (it == j.end()) throw InvalidInput("missing field 'decision_date'");
  if (it->is_null() || (it->is_string() && it->get<std::string>().empty())) return doc;
  if (!it->is_string()) throw InvalidInput("field 'decision_date' is not a string");
  const auto raw = it->get<std::string>();
  auto date = Date::parse(raw);
  if (!date) throw InvalidInput("unparseable decision_date '" + raw + "'");
  if (date->year < kMinYear || date->year > kMaxYear) {
    throw InvalidInput("decision_date '" + raw + "' outside [1600, 2100]");
  }
  doc.decision_date = date;
  return doc;
}

std::string_view region_name(Region r) noexcept {
  switch (r) {
    case Region::kNortheast: return "Northeast";
    case Region::kSouth: return "South";
    case Region::kMidwest: return "Midwest";
    case Region::kWest: return "West";
    case Region::kFederal: return "Federal";
  }
  return "?";
}

std::optional<Region> parse_region(std::string_view name) noexcept {
  for (auto r : kRegions) {
    const auto n = region_name(r);
    if (n.size() == name.size() &&
        std::equal(n.begin(), n.end(), name.begin(), [](char a, char b) {
          return (a | 0x20) == (b | 0x20);
        })) {
      return r;
    }
  }
  return std::nullopt;
}

int region_rank(std::string_view name) noexcept {
  if (auto r = parse_region(name)) return static_cast<int>(*r);
  return static_cast<int>(kRegions.size());
}

RegionMap RegionMap::census_default() {
  RegionMap m;
  auto add = [&](Region r, std::initializer_list<const char*> codes) {
    for (auto c : codes) m.map_[c] = r;
  };
  add(Region::kNortheast, {"CT", "ME", "MA", "NH", "RI", "VT", "NJ", "NY", "PA"});
  add(Region::kMidwest, {"IL", "IN", "MI", "OH", "WI", "IA", "KS", "MN", "MO", "NE", "ND", "SD"});
  add(Region::kSouth, {"DE", "FL", "GA", "MD", "NC", "SC", "VA", "DC", "WV", "AL", "KY", "MS",
                       "TN", "AR", "LA", "OK", "TX"});
  add(Region::kWest, {"AZ", "CO", "ID", "MT", "NV", "NM", "UT", "WY", "AK", "CA", "HI", "OR",
                      "WA"});
  add(Region::kFederal, {"FED", "US"});
  return m;
}

RegionMap RegionMap::parse(std::string_view text) {
  RegionMap m;
  for (const auto& line : read_list(text)) {
    std::vector<std::string> fields;
    for (auto& f : split(line, ' ')) {
      for (auto& g : split(f, '\t')) {
        if (!g.empty()) fields.push_back(g);
      }
    }
    if (fields.size() != 2) throw InvalidInput("region map line needs CODE REGION: '" + line + "'");
    auto r = parse_region(fields[1]);
    if (!r) throw InvalidInput("unknown region '" + fields[1] + "'");
    auto code = upper(fields[0]);
    if (auto it = m.map_.find(code); it != m.map_.end() && it->second != *r) {
      throw InvalidInput("jurisdiction '" + code + "' mapped to two regions");
    }
    m.map_[code] = *r;
  }
  std::vector<std::string> missing;
  for (const auto& [code, region] : census_default().map_) {
    if (code != "US" && !m.map_.count(code)) missing.push_back(code);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& c : missing) list += (list.empty() ? "" : ", ") + c;
    throw InvalidInput("region map is not total; missing: " + list);
  }
  return m;
}

std::optional<Region> RegionMap::lookup(std::string_view code) const {
  auto it = map_.find(upper(trim(code)));
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

std::string Period::label() const { return std::to_string(start) + "-" + std::to_string(end - 1); }

PeriodScheme::PeriodScheme(std::vector<Period> periods) : periods_(std::move(periods)) {
  if (periods_.empty()) throw InvalidInput("period scheme is empty");
  for (std::size_t i = 0; i < periods_.size(); ++i) {
    if (periods_[i].start >= periods_[i].end) {
      throw InvalidInput("period " + std::to_string(periods_[i].start) + " " +
                         std::to_string(periods_[i].end) + " is empty");
    }
    if (i > 0 && periods_[i].start != periods_[i - 1].end) {
      throw InvalidInput("periods must be contiguous and ascending");
    }
  }
}

PeriodScheme PeriodScheme::default_scheme() {
  std::vector<Period> p;
  for (int y = 1860; y < 2010; y += 30) p.push_back({y, y + 30});
  return PeriodScheme(std::move(p));
}

PeriodScheme PeriodScheme::parse(std::string_view text) {
  std::vector<Period> p;
  for (const auto& line : read_list(text)) {
    std::vector<int> nums;
    for (auto& f : split(line, ' ')) {
      auto t = trim(f);
      if (t.empty()) continue;
      auto v = parse_int(t);
      if (!v) throw InvalidInput("bad period line '" + line + "'");
      nums.push_back(*v);
    }
    if (nums.size() != 2) throw InvalidInput("period line needs START END: '" + line + "'");
    p.push_back({nums[0], nums[1]});
  }
  return PeriodScheme(std::move(p));
}

std::optional<std::size_t> PeriodScheme::find(int year) const noexcept {
  for (std::size_t i = 0; i < periods_.size(); ++i) {
    if (periods_[i].contains(year)) return i;
  }
  return std::nullopt;
}

std::vector<std::string> PeriodScheme::labels() const {
  std::vector<std::string> out;
  for (const auto& p : periods_) out.push_back(p.label());
  return out;
}

std::uint64_t CorpusShard::token_count() const noexcept {
  std::uint64_t n = 0;
  for (const auto& d : documents) n += d.size();
  return n;
}

std::uint64_t document_bytes(const std::vector<std::string>& doc) noexcept {
  std::uint64_t n = 1;
  for (const auto& t : doc) n += t.size();
  if (!doc.empty()) n += doc.size() - 1;
  return n;
}

std::uint64_t CorpusShard::byte_size() const noexcept {
  std::uint64_t n = 0;
  for (const auto& d : documents) n += document_bytes(d);
  return n;
}

bool shard_key_less(const ShardKey& a, const ShardKey& b) noexcept {
  if (a.period != b.period) return a.period < b.period;
  const int ra = region_rank(a.region);
  const int rb = region_rank(b.region);
  if (ra != rb) return ra < rb;
  return a.region < b.region;
}

std::string_view skip_reason_name(SkipReason r) noexcept {
  switch (r) {
    case SkipReason::kMalformed: return "malformed";
    case SkipReason::kMissingDate: return "missing_date";
    case SkipReason::kUnknownJurisdiction: return "unknown_jurisdiction";
    case SkipReason::kOutOfRange: return "out_of_range";
    case SkipReason::kDuplicateId: return "duplicate_id";
  }
  return "?";
}

std::uint64_t IngestResult::skipped_total() const noexcept {
  std::uint64_t n = 0;
  for (const auto& [r, c] : skipped) n += c;
  return n;
}

std::uint64_t IngestResult::assigned_total() const noexcept {
  std::uint64_t n = 0;
  for (const auto& s : shards) n += s.document_count();
  return n;
}

std::vector<std::string> preprocess(const RawDocument& doc, const PreprocessConfig& cfg) {
  return preprocess_text(doc.text, cfg);
}

IngestResult ingest_lines(const std::vector<std::string>& lines, const RegionMap& regions,
                          const PeriodScheme& periods, const IngestOptions& options) {
  options.preprocess.validate();
  IngestResult result;

  struct Assigned {
    RawDocument doc;
    ShardKey key;
    std::vector<std::string> tokens;
  };
  std::vector<Assigned> assigned;
  std::unordered_set<std::string> seen;

  auto skip = [&](SkipReason r, std::size_t line_no, const std::string& msg) {
    ++result.skipped[r];
    result.diagnostics.push_back("record " + std::to_string(line_no) + ": " +
                                 std::string(skip_reason_name(r)) + ": " + msg);
  };

  std::size_t line_no = 0;
  for (const auto& line : lines) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++result.records;
    RawDocument doc;
    try {
      doc = parse_record(line);
    } catch (const InvalidInput& e) {
      skip(SkipReason::kMalformed, line_no, e.what());
      continue;
    }
    if (!seen.insert(doc.id).second) {
      skip(SkipReason::kDuplicateId, line_no, "id '" + doc.id + "' already seen");
      continue;
    }
    if (!doc.decision_date) {
      skip(SkipReason::kMissingDate, line_no, "id '" + doc.id + "' has no decision_date");
      continue;
    }
    auto region = regions.lookup(doc.jurisdiction);
    if (!region) {
      skip(SkipReason::kUnknownJurisdiction, line_no,
           "id '" + doc.id + "' jurisdiction '" + doc.jurisdiction + "'");
      continue;
    }
    auto period = periods.find(doc.decision_date->year);
    if (!period) {
      skip(SkipReason::kOutOfRange, line_no,
           "id '" + doc.id + "' year " + std::to_string(doc.decision_date->year));
      continue;
    }
    ShardKey key{std::string(region_name(*region)), periods.periods()[*period].label()};
    assigned.push_back({std::move(doc), std::move(key), {}});
  }

  parallel_for(assigned.size(), options.threads, [&](std::size_t i) {
    assigned[i].tokens = preprocess(assigned[i].doc, options.preprocess);
  });

  std::sort(assigned.begin(), assigned.end(), [](const Assigned& a, const Assigned& b) {
    if (a.key != b.key) return shard_key_less(a.key, b.key);
    return a.doc.id < b.doc.id;
  });
  for (auto& a : assigned) {
    if (result.shards.empty() || result.shards.back().key != a.key) {
      result.shards.push_back(CorpusShard{a.key, {}});
    }
    result.shards.back().documents.push_back(std::move(a.tokens));
  }
  return result;
}

IngestResult ingest(const std::filesystem::path& source, const RegionMap& regions,
                    const PeriodScheme& periods, const IngestOptions& options) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  std::error_code ec;
  if (fs::is_directory(source, ec)) {
    for (const auto& e : fs::directory_iterator(source)) {
      if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw InvalidInput("no .jsonl files in '" + source.string() + "'");
  } else if (fs::is_regular_file(source, ec)) {
    files.push_back(source);
  } else {
    throw InvalidInput("cannot read source '" + source.string() + "'");
  }
  std::vector<std::string> lines;
  for (const auto& f : files) {
    for (auto& l : split(read_file(f), '\n')) {
      if (!l.empty() && l.back() == '\r') l.pop_back();
      lines.push_back(std::move(l));
    }
  }
  return ingest_lines(lines, regions, periods, options);
}

std::vector<std::pair<std::string, std::uint64_t>> term_frequencies(const CorpusShard& shard,
                                                                    std::size_t k) {
  if (k == 0) throw InvalidInput("term_frequencies: k must be at least 1");
  std::unordered_map<std::string_view, std::uint64_t> counts;
  for (const auto& d : shard.documents) {
    for (const auto& t : d) ++counts[t];
  }
  std::vector<std::pair<std::string_view, std::uint64_t>> all(counts.begin(), counts.end());
  const auto by_count = [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  };
  const std::size_t n = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n), all.end(), by_count);
  std::vector<std::pair<std::string, std::uint64_t>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(std::string(all[i].first), all[i].second);
  return out;
}

std::vector<ShardStatsRow> shard_stats(const std::vector<CorpusShard>& shards) {
  std::vector<const CorpusShard*> order;
  for (const auto& s : shards) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(),
                   [](auto* a, auto* b) { return shard_key_less(a->key, b->key); });
  std::vector<ShardStatsRow> rows;
  for (auto* s : order) {
    rows.push_back({s->key.region, s->key.period, s->document_count(), s->token_count()});
  }
  return rows;
}

std::string stats_csv(const std::vector<ShardStatsRow>& rows) {
  std::string out = "region,period,documents,tokens\n";
  for (const auto& r : rows) {
    out += r.region + "," + r.period + "," + std::to_string(r.documents) + "," +
           std::to_string(r.tokens) + "\n";
  }
  return out;
}

CorpusShard merge_shards(const std::vector<const CorpusShard*>& shards, ShardKey key) {
  CorpusShard out{std::move(key), {}};
  for (auto* s : shards) {
    out.documents.insert(out.documents.end(), s->documents.begin(), s->documents.end());
  }
  return out;
}

std::string serialize_shard(const CorpusShard& shard) {
  std::string out;
  out.reserve(shard.byte_size());
  for (const auto& d : shard.documents) {
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (i) out.push_back(' ');
      out += d[i];
    }
    out.push_back('\n');
  }
  return out;
}

CorpusShard parse_shard(std::string_view text, ShardKey key) {
  if (auto bad = find_invalid_utf8(text); bad != std::string_view::npos) {
    throw FormatError("shard '" + key.label() + "' is not valid UTF-8", bad);
  }
  CorpusShard shard{std::move(key), {}};
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::vector<std::string> doc;
    for (auto& t : split(text.substr(pos, nl - pos), ' ')) {
      if (!t.empty()) doc.push_back(std::move(t));
    }
    shard.documents.push_back(std::move(doc));
    pos = nl + 1;
  }
  return shard;
}

std::filesystem::path write_shard(const CorpusShard& shard, const std::filesystem::path& dir) {
  auto path = dir / (shard.key.label() + ".txt");
  write_file(path, serialize_shard(shard));
  return path;
}

CorpusShard read_shard(const std::filesystem::path& file) {
  const auto stem = file.stem().string();
  ShardKey key;
  if (auto us = stem.find('_'); us != std::string::npos) {
    key = {stem.substr(0, us), stem.substr(us + 1)};
  } else {
    key = {stem, ""};
  }
  return parse_shard(read_file(file), std::move(key));
}

std::vector<CorpusShard> read_shard_dir(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw InvalidInput("'" + dir.string() + "' is not a directory");
  std::vector<CorpusShard> shards;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".txt") shards.push_back(read_shard(e.path()));
  }
  std::sort(shards.begin(), shards.end(),
            [](const auto& a, const auto& b) { return shard_key_less(a.key, b.key); });
  return shards;
}

}  // namespace lexbias::corpus
