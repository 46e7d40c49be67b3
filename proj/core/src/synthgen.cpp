#include "lexbias/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lexbias/pipeline.hpp"

namespace lexbias::synthgen {
namespace {

std::vector<std::string> numbered(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(prefix + (i < 10 ? "0" : "") + std::to_string(i));
  }
  return out;
}

std::string background_term(std::size_t rank) { return "w" + std::to_string(rank); }

}  // namespace

BiasSpec BiasSpec::standard(double beta, std::size_t documents, std::uint64_t seed) {
  BiasSpec s;
  s.x_markers = numbered("xm", 8);
  s.y_markers = numbered("ym", 8);
  s.a_terms = numbered("pa", 10);
  s.b_terms = numbered("ub", 10);
  s.beta = beta;
  s.documents = documents;
  s.seed = seed;
  return s;
}

void BiasSpec::validate() const {
  if (!(beta >= 0.0 && beta <= 1.0)) throw InvalidInput("beta must lie in [0, 1]");
  if (documents < 1) throw InvalidInput("document count must be at least 1");
  if (x_markers.empty() || y_markers.empty() || a_terms.empty() || b_terms.empty()) {
    throw InvalidInput("marker and term sets must be non-empty");
  }
  if (min_length > max_length) throw InvalidInput("min_length exceeds max_length");
  if (background_vocab < 1) throw InvalidInput("background vocabulary must be non-empty");
  if (events_per_doc < 1) throw InvalidInput("events_per_doc must be at least 1");
  if (!(zipf_exponent > 0.0)) throw InvalidInput("zipf exponent must be positive");
  if (adjacency < 1) throw InvalidInput("adjacency must be at least 1");
  std::set<std::string> all;
  for (const auto* v : {&x_markers, &y_markers, &a_terms, &b_terms}) {
    for (const auto& t : *v) {
      if (!all.insert(t).second) throw InvalidInput("term '" + t + "' appears twice in the bias spec");
      if (t.size() > 1 && t[0] == 'w' &&
          std::all_of(t.begin() + 1, t.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        throw InvalidInput("term '" + t + "' collides with the background vocabulary");
      }
    }
  }
}

weat::WordSets BiasSpec::word_sets() const { return {x_markers, y_markers, a_terms, b_terms}; }

std::size_t BiasSpec::marker_floor(std::uint64_t min_count) const {
  // Markers are assigned round-robin, so each gets floor(events / M) or more.
  const std::size_t m = x_markers.size() + y_markers.size();
  const std::size_t events_needed = static_cast<std::size_t>(min_count) * m;
  return (events_needed + events_per_doc - 1) / events_per_doc;
}

corpus::CorpusShard generate(const BiasSpec& spec) {
  spec.validate();
  std::vector<double> cdf(spec.background_vocab);
  double acc = 0.0;
  for (std::size_t r = 0; r < cdf.size(); ++r) {
    acc += 1.0 / std::pow(static_cast<double>(r + 1), spec.zipf_exponent);
    cdf[r] = acc;
  }
  for (auto& c : cdf) c /= acc;
  std::vector<std::string> background(spec.background_vocab);
  for (std::size_t r = 0; r < background.size(); ++r) background[r] = background_term(r + 1);

  std::vector<const std::string*> markers;
  for (const auto& m : spec.x_markers) markers.push_back(&m);
  for (const auto& m : spec.y_markers) markers.push_back(&m);
  std::vector<const std::string*> pool;
  for (const auto& t : spec.a_terms) pool.push_back(&t);
  for (const auto& t : spec.b_terms) pool.push_back(&t);
  const std::size_t nx = spec.x_markers.size();

  corpus::CorpusShard shard{{"synthetic", format_fixed(spec.beta, 3)}, {}};
  shard.documents.resize(spec.documents);
  for (std::size_t i = 0; i < spec.documents; ++i) {
    Rng rng = make_stream(spec.seed, i);
    auto& doc = shard.documents[i];
    const std::size_t len =
        spec.min_length + uniform_below(rng, spec.max_length - spec.min_length + 1);
    doc.reserve(len + 2 * spec.events_per_doc);
    for (std::size_t k = 0; k < len; ++k) {
      const double u = uniform01(rng);
      const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      doc.push_back(background[std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1)]);
    }
    for (std::size_t e = 0; e < spec.events_per_doc; ++e) {
      const std::size_t g = i * spec.events_per_doc + e;
      const std::size_t m = g % markers.size();
      const bool is_x = m < nx;
      // A fixed number of draws per event keeps runs with different beta on
      // common random numbers.
      const double u_bias = uniform01(rng);
      const double u_term = uniform01(rng);
      const double u_marker_pos = uniform01(rng);
      const double u_term_pos = uniform01(rng);
      const double u_dist = uniform01(rng);
      const double u_side = uniform01(rng);

      const auto marker_at = static_cast<std::size_t>(u_marker_pos * static_cast<double>(doc.size() + 1));
      doc.insert(doc.begin() + static_cast<std::ptrdiff_t>(std::min(marker_at, doc.size())), *markers[m]);
      const std::size_t p = std::min(marker_at, doc.size() - 1);

      if (u_bias < spec.beta) {
        const auto& congruent = is_x ? spec.a_terms : spec.b_terms;
        const auto& term = congruent[static_cast<std::size_t>(u_term * static_cast<double>(congruent.size()))];
        const auto dist = 1 + static_cast<std::size_t>(u_dist * spec.adjacency);
        std::size_t q;
        if (u_side < 0.5) {
          q = std::min(p + dist, doc.size());
        } else {
          q = p + 1 >= dist ? p + 1 - dist : 0;
        }
        doc.insert(doc.begin() + static_cast<std::ptrdiff_t>(q), term);
      } else {
        const auto& term = *pool[static_cast<std::size_t>(u_term * static_cast<double>(pool.size()))];
        const auto q = static_cast<std::size_t>(u_term_pos * static_cast<double>(doc.size() + 1));
        doc.insert(doc.begin() + static_cast<std::ptrdiff_t>(std::min(q, doc.size())), term);
      }
    }
  }
  return shard;
}

BiasSpec spec_from_json(const nlohmann::json& j) {
  try {
    auto s = BiasSpec::standard(j.value("beta", 0.0), j.value("documents", std::size_t{5000}),
                                j.value("seed", std::uint64_t{0}));
    if (j.contains("x_markers")) s.x_markers = j.at("x_markers").get<std::vector<std::string>>();
    if (j.contains("y_markers")) s.y_markers = j.at("y_markers").get<std::vector<std::string>>();
    if (j.contains("a_terms")) s.a_terms = j.at("a_terms").get<std::vector<std::string>>();
    if (j.contains("b_terms")) s.b_terms = j.at("b_terms").get<std::vector<std::string>>();
    s.background_vocab = j.value("background_vocab", s.background_vocab);
    s.min_length = j.value("min_length", s.min_length);
    s.max_length = j.value("max_length", s.max_length);
    s.events_per_doc = j.value("events_per_doc", s.events_per_doc);
    s.zipf_exponent = j.value("zipf_exponent", s.zipf_exponent);
    s.adjacency = j.value("adjacency", s.adjacency);
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed bias spec: ") + e.what());
  }
}

nlohmann::json to_json(const BiasSpec& s) {
  return {{"beta", s.beta},
          {"documents", s.documents},
          {"seed", s.seed},
          {"x_markers", s.x_markers},
          {"y_markers", s.y_markers},
          {"a_terms", s.a_terms},
          {"b_terms", s.b_terms},
          {"background_vocab", s.background_vocab},
          {"min_length", s.min_length},
          {"max_length", s.max_length},
          {"events_per_doc", s.events_per_doc},
          {"zipf_exponent", s.zipf_exponent},
          {"adjacency", s.adjacency}};
}

std::vector<SweepRow> sweep(const std::vector<BiasSpec>& specs, const embedding::TrainConfig& train,
                            const weat::WeatConfig& test) {
  if (specs.empty()) throw InvalidInput("sweep needs at least one spec");
  std::vector<SweepRow> rows;
  for (const auto& spec : specs) {
    SweepRow row{spec.beta, spec.documents, spec.seed, {}, {}, {}, {}};
    try {
      const auto shard = generate(spec);
      auto t = train;
      t.seed = derive_seed(spec.seed, 1);
      auto w = test;
      w.seed = derive_seed(spec.seed, 2);
      const auto a = pipeline::analyze_shard(shard, spec.word_sets(), t, w);
      row.observed = a.result.observed;
      row.normalized = a.result.normalized;
      row.p_value = a.result.p_value;
      if (!row.normalized) row.error = "normalized statistic undefined";
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  std::string out = "beta,documents,seed,observed,normalized,p_value,status\n";
  for (const auto& r : rows) {
    std::string status = r.error.empty() ? "ok" : "error: " + r.error;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    out += format_number(r.beta) + "," + std::to_string(r.documents) + "," + std::to_string(r.seed) +
           "," + opt(r.observed) + "," + opt(r.normalized) + "," + opt(r.p_value) + "," + status + "\n";
  }
  return out;
}

}  // namespace lexbias::synthgen
