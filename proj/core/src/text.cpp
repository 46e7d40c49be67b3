#include "lexbias/text.hpp"

#include <algorithm>
#include <cstdint>

#include "lexbias/common.hpp"
#include "lexbias/resources.hpp"

namespace lexbias::corpus {
namespace {

struct CodePoint {
  std::uint32_t value;
  std::size_t offset;
  std::size_t length;
};

// Lenient decoder: an invalid byte decodes as U+FFFD of length 1.
std::vector<CodePoint> decode(std::string_view s) {
  std::vector<CodePoint> out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    std::uint32_t cp = c;
    if (c >= 0x80) {
      if ((c & 0xE0) == 0xC0) {
        len = 2;
        cp = c & 0x1F;
      } else if ((c & 0xF0) == 0xE0) {
        len = 3;
        cp = c & 0x0F;
      } else if ((c & 0xF8) == 0xF0) {
        len = 4;
        cp = c & 0x07;
      } else {
        len = 0;
      }
      bool ok = len != 0 && i + len <= s.size();
      for (std::size_t k = 1; ok && k < len; ++k) {
        const auto cc = static_cast<unsigned char>(s[i + k]);
        if ((cc & 0xC0) != 0x80) ok = false;
        cp = (cp << 6) | (cc & 0x3F);
      }
      if (!ok) {
        len = 1;
        cp = 0xFFFD;
      }
    }
    out.push_back({cp, i, len});
    i += len;
  }
  return out;
}

void encode(std::uint32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_space(std::uint32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

bool is_punct(std::uint32_t cp) {
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
           (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
  }
  switch (cp) {
    case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB: case 0xBF:
    case 0x037E: case 0x0387:
      return true;
    default:
      break;
  }
  return (cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x205E) ||
         (cp >= 0x3001 && cp <= 0x3003) || (cp >= 0x3008 && cp <= 0x3011) ||
         (cp >= 0xFE10 && cp <= 0xFE19) || (cp >= 0xFF01 && cp <= 0xFF0F) ||
         cp == 0xFFFD;
}

std::uint32_t lower(std::uint32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp < 0xC0) return cp;
  if (cp <= 0xDE) return cp == 0xD7 ? cp : cp + 0x20;
  if (cp < 0x100 || cp > 0x17F) return cp;
  // Latin Extended-A alternates upper/lower case in pairs.
  if ((cp <= 0x12F) || (cp >= 0x132 && cp <= 0x137) || (cp >= 0x14A && cp <= 0x177)) {
    return (cp % 2 == 0) ? cp + 1 : cp;
  }
  if ((cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E)) {
    return (cp % 2 == 1) ? cp + 1 : cp;
  }
  if (cp == 0x178) return 0xFF;
  return cp;
}

bool ascii_letters(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  const auto cps = decode(text);
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && is_space(cps[i].value)) ++i;
    std::size_t j = i;
    while (j < cps.size() && !is_space(cps[j].value)) ++j;
    std::size_t b = i;
    std::size_t e = j;
    while (b < e && is_punct(cps[b].value)) ++b;
    while (e > b && is_punct(cps[e - 1].value)) --e;
    if (b < e) {
      std::string tok;
      for (std::size_t k = b; k < e; ++k) {
        if (cps[k].value == 0xFFFD && cps[k].length == 1) {
          encode(0xFFFD, tok);
        } else {
          tok.append(text.substr(cps[k].offset, cps[k].length));
        }
      }
      tokens.push_back(std::move(tok));
    }
    i = j;
  }
  return tokens;
}

std::string to_lower(std::string_view token) {
  std::string out;
  out.reserve(token.size());
  bool ascii = std::all_of(token.begin(), token.end(),
                           [](char c) { return static_cast<unsigned char>(c) < 0x80; });
  if (ascii) {
    for (char c : token) out.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c + 0x20) : c);
    return out;
  }
  for (const auto& cp : decode(token)) encode(lower(cp.value), out);
  return out;
}

bool is_punctuation_only(std::string_view token) {
  const auto cps = decode(token);
  return std::all_of(cps.begin(), cps.end(), [](const CodePoint& c) { return is_punct(c.value); });
}

Lemmatizer::Lemmatizer(std::vector<SuffixRule> rules,
                       std::unordered_map<std::string, std::string> exceptions)
    : rules_(std::move(rules)), exceptions_(std::move(exceptions)) {}

const Lemmatizer& Lemmatizer::standard() {
  static const Lemmatizer instance(parse_rules(resources::suffix_rules()),
                                   parse_exceptions(resources::lemma_exceptions()));
  return instance;
}

std::vector<SuffixRule> Lemmatizer::parse_rules(std::string_view tsv) {
  std::vector<SuffixRule> rules;
  for (const auto& line : read_list(tsv)) {
    auto fields = split(line, '\t');
    if (fields.size() != 3) throw InvalidInput("suffix rule needs 3 tab-separated fields: '" + line + "'");
    SuffixRule r;
    r.suffix = trim(fields[0]);
    const auto repl = trim(fields[1]);
    if (repl == "=") {
      r.keep = true;
    } else if (repl != "-") {
      r.replacement = repl;
    }
    try {
      r.min_stem = static_cast<std::size_t>(std::stoul(trim(fields[2])));
    } catch (const std::exception&) {
      throw InvalidInput("bad min_stem in suffix rule '" + line + "'");
    }
    if (r.suffix.empty()) throw InvalidInput("empty suffix in rule '" + line + "'");
    rules.push_back(std::move(r));
  }
  return rules;
}

std::unordered_map<std::string, std::string> Lemmatizer::parse_exceptions(std::string_view tsv) {
  std::unordered_map<std::string, std::string> out;
  for (const auto& line : read_list(tsv)) {
    auto fields = split(line, '\t');
    if (fields.size() != 2) throw InvalidInput("lemma exception needs 2 tab-separated fields: '" + line + "'");
    out[trim(fields[0])] = trim(fields[1]);
  }
  return out;
}

std::string Lemmatizer::lemma(std::string_view token) const {
  if (auto it = exceptions_.find(std::string(token)); it != exceptions_.end()) return it->second;
  std::string_view base = token;
  const bool possessive = ends_with(token, "'s");
  if (possessive) base = token.substr(0, token.size() - 2);
  if (!ascii_letters(base)) return std::string(token);
  if (possessive) {
    // "court's" -> "court"; the stem itself is not lemmatized again.
    return base.size() >= 1 ? std::string(base) : std::string(token);
  }
  for (const auto& r : rules_) {
    if (!ends_with(token, r.suffix)) continue;
    const std::size_t stem = token.size() - r.suffix.size();
    if (stem < r.min_stem) continue;
    if (r.keep) return std::string(token);
    return std::string(token.substr(0, stem)) + r.replacement;
  }
  return std::string(token);
}

std::unordered_set<std::string> default_stopwords() {
  const auto words = read_list(resources::stopwords_en());
  return {words.begin(), words.end()};
}

PreprocessConfig PreprocessConfig::defaults() {
  PreprocessConfig cfg;
  cfg.stopword_list = default_stopwords();
  cfg.lemmatizer = Lemmatizer::standard();
  return cfg;
}

void PreprocessConfig::validate() const {
  if (remove_stopwords && stopword_list.empty()) {
    throw InvalidInput("remove_stopwords is set but the stopword list is empty");
  }
}

std::vector<std::string> preprocess_text(std::string_view text, const PreprocessConfig& cfg) {
  std::vector<std::string> out;
  for (auto& raw : tokenize(text)) {
    std::string tok = cfg.lowercase ? to_lower(raw) : std::move(raw);
    if (cfg.remove_stopwords && cfg.stopword_list.count(tok)) continue;
    if (cfg.lemmatize) {
      tok = cfg.lemmatizer.lemma(tok);
      if (tok.empty()) continue;
      if (cfg.remove_stopwords && cfg.stopword_list.count(tok)) continue;
    }
    out.push_back(std::move(tok));
  }
  return out;
}

}  // namespace lexbias::corpus
