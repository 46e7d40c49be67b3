#include "lexbias/weat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "lexbias/parallel.hpp"
#include "lexbias/resources.hpp"
#include "lexbias/stats.hpp"

namespace lexbias::weat {
namespace {

void check_list(const std::vector<std::string>& v, const char* name) {
  if (v.empty()) throw InvalidInput(std::string("word set ") + name + " is empty");
  std::set<std::string> seen;
  for (const auto& t : v) {
    if (!seen.insert(t).second) {
      throw InvalidInput(std::string("word set ") + name + " lists '" + t + "' twice");
    }
  }
}

void check_disjoint(const std::vector<std::string>& p, const char* pn,
                    const std::vector<std::string>& q, const char* qn) {
  std::set<std::string> s(p.begin(), p.end());
  for (const auto& t : q) {
    if (s.count(t)) {
      throw InvalidInput("term '" + t + "' appears in both " + pn + " and " + qn);
    }
  }
}

ResolvedSet resolve_one(const std::vector<std::string>& terms, const embedding::EmbeddingSet& emb) {
  ResolvedSet r;
  for (const auto& t : terms) {
    if (auto i = emb.index(t)) {
      r.terms.push_back(t);
      r.rows.push_back(*i);
    } else {
      r.dropped.push_back(t);
    }
  }
  return r;
}

}  // namespace

void WordSets::validate() const {
  check_list(x, "X");
  check_list(y, "Y");
  check_list(a, "A");
  check_list(b, "B");
  check_disjoint(x, "X", y, "Y");
  check_disjoint(a, "A", b, "B");
  check_disjoint(x, "X", a, "A");
  check_disjoint(x, "X", b, "B");
  check_disjoint(y, "Y", a, "A");
  check_disjoint(y, "Y", b, "B");
}

WordSets WordSets::defaults() {
  WordSets s{read_list(resources::names_black()), read_list(resources::names_white()),
             read_list(resources::pleasant_terms()), read_list(resources::unpleasant_terms())};
  s.validate();
  return s;
}

WordSets WordSets::load_dir(const std::filesystem::path& dir) {
  WordSets s{read_list(read_file(dir / "names_black.txt")),
             read_list(read_file(dir / "names_white.txt")),
             read_list(read_file(dir / "pleasant.txt")),
             read_list(read_file(dir / "unpleasant.txt"))};
  s.validate();
  return s;
}

void WordSets::save_dir(const std::filesystem::path& dir) const {
  auto join = [](const std::vector<std::string>& v) {
    std::string out;
    for (const auto& t : v) out += t + "\n";
    return out;
  };
  write_file(dir / "names_black.txt", join(x));
  write_file(dir / "names_white.txt", join(y));
  write_file(dir / "pleasant.txt", join(a));
  write_file(dir / "unpleasant.txt", join(b));
}

void ResolvedWordSets::require_valid() const {
  if (x.empty()) throw TestInvalid("target set X has no terms with vectors");
  if (y.empty()) throw TestInvalid("target set Y has no terms with vectors");
  if (a.empty()) throw TestInvalid("attribute set A has no terms with vectors");
  if (b.empty()) throw TestInvalid("attribute set B has no terms with vectors");
}

ResolvedWordSets resolve(const WordSets& sets, const embedding::EmbeddingSet& emb) {
  return {resolve_one(sets.x, emb), resolve_one(sets.y, emb), resolve_one(sets.a, emb),
          resolve_one(sets.b, emb)};
}

double cosine(std::span<const float> u, std::span<const float> v) noexcept {
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double a = u[k];
    const double b = v[k];
    dot += a * b;
    nu += a * a;
    nv += b * b;
  }
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return dot / (std::sqrt(nu) * std::sqrt(nv));
}

std::optional<double> association(std::string_view w, const ResolvedSet& a, const ResolvedSet& b,
                                  const embedding::EmbeddingSet& emb) {
  if (a.empty() && b.empty()) throw TestInvalid("attribute sets A and B have no terms with vectors");
  if (a.empty()) throw TestInvalid("attribute set A has no terms with vectors");
  if (b.empty()) throw TestInvalid("attribute set B has no terms with vectors");
  auto wv = emb.vector(w);
  if (!wv) return std::nullopt;
  double sa = 0.0;
  for (auto r : a.rows) sa += cosine(*wv, emb.vector(r));
  double sb = 0.0;
  for (auto r : b.rows) sb += cosine(*wv, emb.vector(r));
  return sa / static_cast<double>(a.size()) - sb / static_cast<double>(b.size());
}

std::string_view form_name(StatisticForm f) noexcept {
  return f == StatisticForm::kSum ? "sum" : "mean";
}

std::optional<StatisticForm> parse_form(std::string_view name) noexcept {
  if (name == "sum") return StatisticForm::kSum;
  if (name == "mean") return StatisticForm::kMean;
  return std::nullopt;
}

double weat_statistic(const ResolvedWordSets& sets, const embedding::EmbeddingSet& emb,
                      StatisticForm form) {
  sets.require_valid();
  double sx = 0.0;
  for (const auto& t : sets.x.terms) sx += *association(t, sets.a, sets.b, emb);
  double sy = 0.0;
  for (const auto& t : sets.y.terms) sy += *association(t, sets.a, sets.b, emb);
  if (form == StatisticForm::kMean) {
    sx /= static_cast<double>(sets.x.size());
    sy /= static_cast<double>(sets.y.size());
  }
  return sx - sy;
}

void WeatConfig::validate() const {
  if (shuffles < 1) throw InvalidInput("shuffle count must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
}

double WeatResult::critical_value() const {
  const auto n = randomized.size();
  const auto allowed = static_cast<long long>(std::floor(alpha * static_cast<double>(n + 1) + 1e-9)) - 1;
  if (allowed < 0 || n == 0) return std::numeric_limits<double>::infinity();
  if (static_cast<std::size_t>(allowed) >= n) return -std::numeric_limits<double>::infinity();
  std::vector<double> sorted = randomized;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  return sorted[static_cast<std::size_t>(allowed)];
}

namespace {

// Per-term contrast: c_t = wx * sum_x cos(x, t) - wy * sum_y cos(y, t), so a
// split's statistic is mean of c over its A side minus mean over its B side.
std::vector<double> term_contrasts(const ResolvedWordSets& sets, const embedding::EmbeddingSet& emb,
                                   StatisticForm form) {
  const double wx = form == StatisticForm::kMean ? 1.0 / static_cast<double>(sets.x.size()) : 1.0;
  const double wy = form == StatisticForm::kMean ? 1.0 / static_cast<double>(sets.y.size()) : 1.0;
  std::vector<std::size_t> pool(sets.a.rows);
  pool.insert(pool.end(), sets.b.rows.begin(), sets.b.rows.end());
  std::vector<double> c(pool.size());
  for (std::size_t t = 0; t < pool.size(); ++t) {
    const auto tv = emb.vector(pool[t]);
    double sx = 0.0;
    for (auto r : sets.x.rows) sx += cosine(emb.vector(r), tv);
    double sy = 0.0;
    for (auto r : sets.y.rows) sy += cosine(emb.vector(r), tv);
    c[t] = wx * sx - wy * sy;
  }
  return c;
}

double split_value(const std::vector<double>& c, const std::vector<char>& in_a, std::size_t na,
                   std::size_t nb) {
  double sa = 0.0, sb = 0.0;
  for (std::size_t t = 0; t < c.size(); ++t) {
    if (in_a[t]) {
      sa += c[t];
    } else {
      sb += c[t];
    }
  }
  return sa / static_cast<double>(na) - sb / static_cast<double>(nb);
}

void fill_split(std::vector<std::size_t>& perm, std::vector<char>& mask, std::size_t na, std::uint64_t seed,
                std::size_t index) {
  for (std::size_t k = 0; k < perm.size(); ++k) perm[k] = k;
  Rng rng = make_stream(seed, index);
  shuffle(perm, rng);
  for (std::size_t k = 0; k < perm.size(); ++k) mask[perm[k]] = k < na ? 1 : 0;
}

}  // namespace

std::vector<bool> shuffle_split(std::size_t na, std::size_t nb, std::uint64_t seed, std::size_t index) {
  std::vector<std::size_t> perm(na + nb);
  std::vector<char> mask(na + nb);
  fill_split(perm, mask, na, seed, index);
  return {mask.begin(), mask.end()};
}

double split_statistic(const ResolvedWordSets& sets, const embedding::EmbeddingSet& emb,
                       const std::vector<bool>& in_a, StatisticForm form) {
  sets.require_valid();
  const auto c = term_contrasts(sets, emb, form);
  if (in_a.size() != c.size()) throw InvalidInput("split mask does not cover the pooled terms");
  std::vector<char> mask(in_a.begin(), in_a.end());
  const auto na = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
  if (na == 0 || na == c.size()) throw InvalidInput("split leaves a category empty");
  return split_value(c, mask, na, c.size() - na);
}

WeatResult randomization_test(const ResolvedWordSets& sets, const embedding::EmbeddingSet& emb,
                              const WeatConfig& cfg) {
  cfg.validate();
  sets.require_valid();
  const auto c = term_contrasts(sets, emb, cfg.form);
  const std::size_t na = sets.a.size();
  const std::size_t nb = sets.b.size();
  const std::size_t n = c.size();

  WeatResult r;
  r.form = cfg.form;
  r.alpha = cfg.alpha;
  r.seed = cfg.seed;
  r.size_x = sets.x.size();
  r.size_y = sets.y.size();
  r.size_a = na;
  r.size_b = nb;
  r.dropped_x = sets.x.dropped;
  r.dropped_y = sets.y.dropped;
  r.dropped_a = sets.a.dropped;
  r.dropped_b = sets.b.dropped;

  std::vector<char> observed_mask(n, 0);
  std::fill(observed_mask.begin(), observed_mask.begin() + static_cast<std::ptrdiff_t>(na), 1);
  r.observed = split_value(c, observed_mask, na, nb);

  r.randomized.assign(cfg.shuffles, 0.0);
  parallel_ranges(cfg.shuffles, cfg.threads, [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> perm(n);
    std::vector<char> mask(n);
    for (std::size_t i = begin; i < end; ++i) {
      fill_split(perm, mask, na, cfg.seed, i);
      r.randomized[i] = split_value(c, mask, na, nb);
    }
  });

  std::size_t at_least = 0;
  for (double t : r.randomized) at_least += (t >= r.observed) ? 1 : 0;
  r.p_value = static_cast<double>(1 + at_least) / static_cast<double>(1 + cfg.shuffles);
  r.significant = r.p_value <= cfg.alpha;
  r.randomized_stdev = stats::sample_stdev(r.randomized);
  if (r.randomized_stdev > 0.0) r.normalized = r.observed / r.randomized_stdev;
  return r;
}

nlohmann::json to_json(const WeatResult& r) {
  nlohmann::json j;
  j["schema"] = "lexbias.weat_result/1";
  j["label"] = r.key.label();
  j["region"] = r.key.region;
  j["period"] = r.key.period;
  j["statistic_form"] = form_name(r.form);
  j["observed"] = r.observed;
  j["randomized_stdev"] = r.randomized_stdev;
  j["normalized_defined"] = r.normalized.has_value();
  j["normalized"] = r.normalized ? nlohmann::json(*r.normalized) : nlohmann::json(nullptr);
  j["p_value"] = r.p_value;
  j["alpha"] = r.alpha;
  j["significant"] = r.significant;
  j["shuffles"] = r.randomized.size();
  j["seed"] = r.seed;
  j["critical_value"] = std::isfinite(r.critical_value()) ? nlohmann::json(r.critical_value())
                                                          : nlohmann::json(nullptr);
  j["resolved_sizes"] = {{"x", r.size_x}, {"y", r.size_y}, {"a", r.size_a}, {"b", r.size_b}};
  j["dropped"] = {{"x", r.dropped_x}, {"y", r.dropped_y}, {"a", r.dropped_a}, {"b", r.dropped_b}};
  j["randomized"] = r.randomized;
  if (!r.manifest.empty()) j["manifest"] = r.manifest;
  return j;
}

WeatResult weat_result_from_json(const nlohmann::json& j) {
  try {
    WeatResult r;
    r.key = {j.at("region").get<std::string>(), j.at("period").get<std::string>()};
    auto form = parse_form(j.at("statistic_form").get<std::string>());
    if (!form) throw InvalidInput("unknown statistic_form");
    r.form = *form;
    r.observed = j.at("observed").get<double>();
    r.randomized = j.at("randomized").get<std::vector<double>>();
    r.randomized_stdev = j.at("randomized_stdev").get<double>();
    if (!j.at("normalized").is_null()) r.normalized = j.at("normalized").get<double>();
    r.p_value = j.at("p_value").get<double>();
    r.alpha = j.at("alpha").get<double>();
    r.significant = j.at("significant").get<bool>();
    r.seed = j.at("seed").get<std::uint64_t>();
    const auto& sz = j.at("resolved_sizes");
    r.size_x = sz.at("x");
    r.size_y = sz.at("y");
    r.size_a = sz.at("a");
    r.size_b = sz.at("b");
    const auto& d = j.at("dropped");
    r.dropped_x = d.at("x").get<std::vector<std::string>>();
    r.dropped_y = d.at("y").get<std::vector<std::string>>();
    r.dropped_a = d.at("a").get<std::vector<std::string>>();
    r.dropped_b = d.at("b").get<std::vector<std::string>>();
    if (j.contains("manifest")) r.manifest = j.at("manifest").get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed WEAT result: ") + e.what());
  }
}

}  // namespace lexbias::weat
