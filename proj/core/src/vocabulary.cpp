#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "lexbias/embedding.hpp"
#include "lexbias/parallel.hpp"

namespace lexbias::embedding {

Vocabulary::Vocabulary(std::vector<Entry> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.term < b.term;
  });
  index_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!index_.emplace(entries_[i].term, static_cast<std::uint32_t>(i)).second) {
      throw InvalidInput("duplicate vocabulary term '" + entries_[i].term + "'");
    }
  }
}

std::optional<std::uint32_t> Vocabulary::id(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary build_vocab(const corpus::CorpusShard& shard, std::uint64_t min_count) {
  std::unordered_map<std::string_view, std::uint64_t> counts;
  for (const auto& doc : shard.documents) {
    for (const auto& t : doc) ++counts[t];
  }
  std::vector<Vocabulary::Entry> entries;
  for (const auto& [term, n] : counts) {
    if (n >= min_count) entries.push_back({std::string(term), n});
  }
  return Vocabulary(std::move(entries));
}

CooccurrenceTable::CooccurrenceTable(Vocabulary vocab, std::uint32_t window,
                                     std::vector<CooccurrenceEntry> upper)
    : vocab_(std::move(vocab)), window_(window), upper_(std::move(upper)) {
  std::sort(upper_.begin(), upper_.end(), [](const auto& a, const auto& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (std::size_t k = 0; k < upper_.size(); ++k) {
    const auto& e = upper_[k];
    if (e.row > e.col) throw InvalidInput("co-occurrence entry below the diagonal");
    if (e.col >= vocab_.size()) throw InvalidInput("co-occurrence entry outside the vocabulary");
    if (!(e.weight > 0.0)) throw InvalidInput("co-occurrence weights must be positive");
    if (k > 0 && upper_[k - 1].row == e.row && upper_[k - 1].col == e.col) {
      throw InvalidInput("duplicate co-occurrence entry");
    }
  }
}

double CooccurrenceTable::at(std::uint32_t i, std::uint32_t j) const {
  if (i > j) std::swap(i, j);
  auto it = std::lower_bound(upper_.begin(), upper_.end(), std::pair{i, j},
                             [](const CooccurrenceEntry& e, const std::pair<std::uint32_t, std::uint32_t>& k) {
                               return e.row != k.first ? e.row < k.first : e.col < k.second;
                             });
  if (it == upper_.end() || it->row != i || it->col != j) return 0.0;
  return it->weight;
}

std::vector<CooccurrenceEntry> CooccurrenceTable::entries() const {
  std::vector<CooccurrenceEntry> out;
  out.reserve(nonzero());
  for (const auto& e : upper_) {
    out.push_back(e);
    if (e.row != e.col) out.push_back({e.col, e.row, e.weight});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  return out;
}

std::size_t CooccurrenceTable::nonzero() const noexcept {
  std::size_t n = 0;
  for (const auto& e : upper_) n += (e.row == e.col) ? 1 : 2;
  return n;
}

double CooccurrenceTable::total_weight() const noexcept {
  double s = 0.0;
  for (const auto& e : upper_) s += (e.row == e.col) ? e.weight : 2.0 * e.weight;
  return s;
}

namespace {

constexpr std::size_t kChunkDocs = 512;

inline std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

template <typename Acc, typename UnitFn>
std::vector<std::unordered_map<std::uint64_t, Acc>> count_chunks(
    const corpus::CorpusShard& shard, const Vocabulary& vocab, std::uint32_t window,
    unsigned threads, UnitFn unit) {
  const std::size_t n_docs = shard.documents.size();
  const std::size_t n_chunks = (n_docs + kChunkDocs - 1) / kChunkDocs;
  std::vector<std::unordered_map<std::uint64_t, Acc>> partial(n_chunks);
  parallel_for(n_chunks, threads, [&](std::size_t c) {
    auto& table = partial[c];
    std::vector<std::int64_t> ids;
    const std::size_t end = std::min(n_docs, (c + 1) * kChunkDocs);
    for (std::size_t d = c * kChunkDocs; d < end; ++d) {
      const auto& doc = shard.documents[d];
      ids.resize(doc.size());
      for (std::size_t i = 0; i < doc.size(); ++i) {
        auto id = vocab.id(doc[i]);
        ids[i] = id ? static_cast<std::int64_t>(*id) : -1;
      }
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] < 0) continue;
        const std::size_t last = std::min<std::size_t>(ids.size() - 1, i + window);
        for (std::size_t j = i + 1; j <= last; ++j) {
          if (ids[j] < 0) continue;
          const auto a = static_cast<std::uint32_t>(ids[i]);
          const auto b = static_cast<std::uint32_t>(ids[j]);
          const Acc u = unit(static_cast<std::uint32_t>(j - i));
          // Both ordered pairs land on the diagonal entry when a == b.
          table[pair_key(a, b)] += (a == b) ? u + u : u;
        }
      }
    }
  });
  return partial;
}

template <typename Acc, typename ToWeight>
std::vector<CooccurrenceEntry> merge(std::vector<std::unordered_map<std::uint64_t, Acc>>& partial,
                                     ToWeight to_weight) {
  std::unordered_map<std::uint64_t, Acc> total;
  if (!partial.empty()) total = std::move(partial.front());
  for (std::size_t c = 1; c < partial.size(); ++c) {
    for (const auto& [k, v] : partial[c]) total[k] += v;
    partial[c].clear();
  }
  std::vector<CooccurrenceEntry> out;
  out.reserve(total.size());
  for (const auto& [k, v] : total) {
    out.push_back({static_cast<std::uint32_t>(k >> 32), static_cast<std::uint32_t>(k & 0xffffffffu),
                   to_weight(v)});
  }
  return out;
}

}  // namespace

CooccurrenceTable count_cooccurrences(const corpus::CorpusShard& shard, const Vocabulary& vocab,
                                      std::uint32_t window, unsigned threads) {
  if (vocab.empty()) throw InvalidInput("count_cooccurrences: vocabulary is empty");
  if (window == 0) throw InvalidInput("count_cooccurrences: window must be at least 1");
  std::vector<CooccurrenceEntry> upper;
  if (window <= kExactWindowLimit) {
    std::uint64_t lcm = 1;
    for (std::uint64_t d = 2; d <= window; ++d) lcm = std::lcm(lcm, d);
    std::vector<std::uint64_t> units(window + 1, 0);
    for (std::uint32_t d = 1; d <= window; ++d) units[d] = lcm / d;
    auto partial = count_chunks<std::uint64_t>(shard, vocab, window, threads,
                                               [&](std::uint32_t d) { return units[d]; });
    const double denom = static_cast<double>(lcm);
    upper = merge(partial, [&](std::uint64_t v) { return static_cast<double>(v) / denom; });
  } else {
    auto partial = count_chunks<double>(shard, vocab, window, threads,
                                        [](std::uint32_t d) { return 1.0 / d; });
    upper = merge(partial, [](double v) { return v; });
  }
  return CooccurrenceTable(vocab, window, std::move(upper));
}

}  // namespace lexbias::embedding
