#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include "lexbias/embedding.hpp"

namespace lexbias::embedding {

EmbeddingSet::EmbeddingSet(std::vector<std::string> terms, std::size_t dim,
                           std::vector<float> combined)
    : terms_(std::move(terms)), dim_(dim), combined_(std::move(combined)) {
  if (dim_ == 0) throw InvalidInput("embedding dimension must be at least 1");
  if (combined_.size() != terms_.size() * dim_) throw InvalidInput("embedding data size mismatch");
  build_index();
}

EmbeddingSet::EmbeddingSet(std::vector<std::string> terms, std::size_t dim,
                           std::vector<float> main, std::vector<float> context)
    : terms_(std::move(terms)), dim_(dim), main_(std::move(main)), context_(std::move(context)) {
  if (dim_ == 0) throw InvalidInput("embedding dimension must be at least 1");
  if (main_.size() != terms_.size() * dim_ || context_.size() != main_.size()) {
    throw InvalidInput("embedding data size mismatch");
  }
  combined_.resize(main_.size());
  for (std::size_t i = 0; i < main_.size(); ++i) combined_[i] = main_[i] + context_[i];
  build_index();
}

void EmbeddingSet::build_index() {
  index_.clear();
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!index_.emplace(terms_[i], i).second) {
      throw InvalidInput("duplicate embedding term '" + terms_[i] + "'");
    }
  }
  for (float x : combined_) {
    if (!std::isfinite(x)) throw InvalidInput("embedding contains a non-finite component");
  }
}

std::optional<std::size_t> EmbeddingSet::index(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const float> EmbeddingSet::vector(std::size_t i) const {
  return std::span<const float>(combined_).subspan(i * dim_, dim_);
}

std::optional<std::span<const float>> EmbeddingSet::vector(std::string_view term) const {
  auto i = index(term);
  if (!i) return std::nullopt;
  return vector(*i);
}

std::span<const float> EmbeddingSet::main_vector(std::size_t i) const {
  return std::span<const float>(main_).subspan(i * dim_, dim_);
}

std::span<const float> EmbeddingSet::context_vector(std::size_t i) const {
  return std::span<const float>(context_).subspan(i * dim_, dim_);
}

EmbeddingSet EmbeddingSet::scaled(float factor) const {
  EmbeddingSet out = *this;
  for (auto& x : out.main_) x *= factor;
  for (auto& x : out.context_) x *= factor;
  for (auto& x : out.combined_) x *= factor;
  return out;
}

namespace {

constexpr char kMagic[4] = {'G', 'L', 'V', 'E'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::string& out, T value) {
  if constexpr (std::endian::native == std::endian::big) {
    auto* p = reinterpret_cast<unsigned char*>(&value);
    std::reverse(p, p + sizeof(T));
  }
  out.append(reinterpret_cast<const char*>(&value), sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
  T get(const char* what) {
    need(sizeof(T), what);
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
      auto* p = reinterpret_cast<unsigned char*>(&value);
      std::reverse(p, p + sizeof(T));
    }
    pos_ += sizeof(T);
    return value;
  }

  std::string_view take(std::size_t n, const char* what) {
    need(n, what);
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n, const char* what) {
    if (remaining() < n) {
      throw FormatError(std::string("truncated embedding file while reading ") + what + "; file ends at " +
                            std::to_string(bytes_.size()),
                        pos_);
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_binary(const EmbeddingSet& set) {
  std::string out(kMagic, 4);
  put<std::uint32_t>(out, kVersion);
  put<std::uint64_t>(out, set.size());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(set.dim()));
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& t = set.terms()[i];
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.size()));
    out += t;
    for (float x : set.vector(i)) put<std::uint32_t>(out, std::bit_cast<std::uint32_t>(x));
  }
  return out;
}

EmbeddingSet decode_binary(std::string_view bytes) {
  Reader r(bytes);
  auto magic = r.take(4, "magic");
  if (magic != std::string_view(kMagic, 4)) throw FormatError("bad magic; not a GLVE file", 0);
  const auto version = r.get<std::uint32_t>("version");
  if (version != kVersion) throw FormatError("unsupported version " + std::to_string(version), 4);
  const auto count = r.get<std::uint64_t>("vocabulary size");
  const auto dim_pos = r.pos();
  const auto dim = r.get<std::uint32_t>("dimension");
  if (dim == 0) throw FormatError("dimension is zero", dim_pos);
  // Each entry needs at least a length prefix and the vector.
  const std::uint64_t min_entry = 4 + 4ull * dim;
  if (count > r.remaining() / min_entry + 1) {
    throw FormatError("vocabulary size " + std::to_string(count) + " exceeds file length",
                      bytes.size());
  }
  std::vector<std::string> terms;
  std::vector<float> data;
  terms.reserve(count);
  data.reserve(count * dim);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto len = r.get<std::uint32_t>("term length");
    const auto term_pos = r.pos();
    auto term = r.take(len, "term");
    if (auto bad = find_invalid_utf8(term); bad != std::string_view::npos) {
      throw FormatError("term " + std::to_string(i) + " is not valid UTF-8", term_pos + bad);
    }
    terms.emplace_back(term);
    for (std::uint32_t k = 0; k < dim; ++k) {
      const auto at = r.pos();
      const float x = std::bit_cast<float>(r.get<std::uint32_t>("vector component"));
      if (!std::isfinite(x)) throw FormatError("non-finite vector component", at);
      data.push_back(x);
    }
  }
  if (r.remaining() != 0) throw FormatError("trailing bytes after the last entry", r.pos());
  return EmbeddingSet(std::move(terms), dim, std::move(data));
}

std::string encode_text(const EmbeddingSet& set) {
  std::string out;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& t = set.terms()[i];
    if (t.empty() || t.find_first_of(" \t\n\r") != std::string::npos) {
      throw InvalidInput("term '" + t + "' cannot be written in text format");
    }
    out += t;
    for (float x : set.vector(i)) {
      out.push_back(' ');
      out += format_number(x);
    }
    out.push_back('\n');
  }
  return out;
}

EmbeddingSet decode_text(std::string_view text) {
  std::vector<std::string> terms;
  std::vector<float> data;
  std::size_t dim = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) {
      auto fields = split(line, ' ');
      std::erase_if(fields, [](const std::string& f) { return f.empty(); });
      if (fields.size() < 2) throw FormatError("line has no vector components", pos);
      if (auto bad = find_invalid_utf8(fields[0]); bad != std::string_view::npos) {
        throw FormatError("term is not valid UTF-8", pos + bad);
      }
      const std::size_t d = fields.size() - 1;
      if (dim == 0) {
        dim = d;
      } else if (d != dim) {
        throw FormatError("dimension mismatch: expected " + std::to_string(dim) + ", found " +
                              std::to_string(d),
                          pos);
      }
      terms.push_back(fields[0]);
      for (std::size_t k = 1; k < fields.size(); ++k) {
        char* end = nullptr;
        const float x = std::strtof(fields[k].c_str(), &end);
        if (end != fields[k].c_str() + fields[k].size() || !std::isfinite(x)) {
          throw FormatError("bad vector component '" + fields[k] + "'", pos);
        }
        data.push_back(x);
      }
    }
    pos = nl + 1;
  }
  if (terms.empty()) throw FormatError("embedding text file is empty", 0);
  return EmbeddingSet(std::move(terms), dim, std::move(data));
}

void save_binary(const EmbeddingSet& set, const std::filesystem::path& path) {
  write_file(path, encode_binary(set));
}

void save_text(const EmbeddingSet& set, const std::filesystem::path& path) {
  write_file(path, encode_text(set));
}

void save(const EmbeddingSet& set, const std::filesystem::path& path, FileFormat format) {
  if (format == FileFormat::kBinary) {
    save_binary(set, path);
  } else {
    save_text(set, path);
  }
}

EmbeddingSet load(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  if (bytes.size() >= 4 && std::string_view(bytes).substr(0, 4) == std::string_view(kMagic, 4)) {
    return decode_binary(bytes);
  }
  return decode_text(bytes);
}

}  // namespace lexbias::embedding
