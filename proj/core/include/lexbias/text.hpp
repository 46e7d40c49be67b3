#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lexbias/common.hpp"

namespace lexbias::corpus {

/// Splits on Unicode whitespace, then strips leading and trailing punctuation
/// from each piece. Pieces that are punctuation only are dropped. Interior
/// punctuation (hyphens, apostrophes) is kept.
std::vector<std::string> tokenize(std::string_view text);

/// Lowercases ASCII, Latin-1 and Latin Extended-A letters; other code points
/// pass through unchanged.
std::string to_lower(std::string_view token);

/// True if every code point of the token is punctuation.
bool is_punctuation_only(std::string_view token);

struct SuffixRule {
  std::string suffix;
  std::string replacement;
  bool keep = false;  // matching tokens are left unchanged
  std::size_t min_stem = 1;
};

/// Rule-based lemmatizer: an exceptions dictionary consulted first, then the
/// first matching suffix rule. Only tokens made of ASCII letters (and an
/// optional trailing "'s") are rewritten.
class Lemmatizer {
 public:
  Lemmatizer() = default;
  Lemmatizer(std::vector<SuffixRule> rules, std::unordered_map<std::string, std::string> exceptions);

  /// Built from the shipped rule and exception tables.
  static const Lemmatizer& standard();
  static std::vector<SuffixRule> parse_rules(std::string_view tsv);
  static std::unordered_map<std::string, std::string> parse_exceptions(std::string_view tsv);

  std::string lemma(std::string_view token) const;

  const std::vector<SuffixRule>& rules() const noexcept { return rules_; }
  const std::unordered_map<std::string, std::string>& exceptions() const noexcept {
    return exceptions_;
  }

 private:
  std::vector<SuffixRule> rules_;
  std::unordered_map<std::string, std::string> exceptions_;
};

struct PreprocessConfig {
  bool lowercase = true;
  bool remove_stopwords = true;
  std::unordered_set<std::string> stopword_list;
  bool lemmatize = true;
  Lemmatizer lemmatizer;

  /// Lowercasing, the shipped stopword list and the shipped lemmatizer.
  static PreprocessConfig defaults();
  /// Throws InvalidInput when remove_stopwords is set with an empty list.
  void validate() const;
};

std::unordered_set<std::string> default_stopwords();

/// Tokenize, lowercase, lemmatize and filter one text. Token order is kept.
std::vector<std::string> preprocess_text(std::string_view text, const PreprocessConfig& cfg);

}  // namespace lexbias::corpus
