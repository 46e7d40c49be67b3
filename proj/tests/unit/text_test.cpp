#include <gtest/gtest.h>

#include "lexbias/text.hpp"

using namespace lexbias;
using namespace lexbias::corpus;

namespace {

PreprocessConfig no_lemma_with(std::unordered_set<std::string> stop) {
  auto cfg = PreprocessConfig::defaults();
  cfg.lemmatize = false;
  cfg.stopword_list = std::move(stop);
  return cfg;
}

}  // namespace

TEST(Tokenize, SplitsOnWhitespaceAndStripsPunctuation) {
  EXPECT_EQ(tokenize("  (Smith) v. Jones,\tappellant\n"),
            (std::vector<std::string>{"Smith", "v", "Jones", "appellant"}));
  EXPECT_EQ(tokenize("\xe2\x80\x9cquoted\xe2\x80\x9d"), std::vector<std::string>{"quoted"});
  EXPECT_EQ(tokenize("well-known"), std::vector<std::string>{"well-known"});
  EXPECT_TRUE(tokenize("... --- ;").empty());
}

TEST(Tokenize, UnicodeWhitespace) {
  EXPECT_EQ(tokenize("a\xc2\xa0" "b\xe2\x80\x83" "c").size(), 3u);
}

TEST(ToLower, AsciiAndLatin) {
  EXPECT_EQ(to_lower("HeLLo"), "hello");
  EXPECT_EQ(to_lower("\xc3\x89TAT"), "\xc3\xa9tat");
}

TEST(Preprocess, LowercaseAndStopwords) {
  EXPECT_EQ(preprocess_text("The Court HELD.", no_lemma_with({"the"})),
            (std::vector<std::string>{"court", "held"}));
}

TEST(Preprocess, EmptyInput) {
  EXPECT_TRUE(preprocess_text("", PreprocessConfig::defaults()).empty());
}

TEST(Preprocess, ShippedSuffixRules) {
  auto cfg = PreprocessConfig::defaults();
  cfg.remove_stopwords = false;
  EXPECT_EQ(preprocess_text("plaintiffs, defendants; judgments", cfg),
            (std::vector<std::string>{"plaintiff", "defendant", "judgment"}));
}

TEST(Preprocess, StopwordListRequiredWhenRemoving) {
  auto cfg = PreprocessConfig::defaults();
  cfg.stopword_list.clear();
  EXPECT_THROW(cfg.validate(), InvalidInput);
}

TEST(Lemmatizer, RulesAndExceptions) {
  const auto& l = Lemmatizer::standard();
  EXPECT_EQ(l.lemma("parties"), "party");
  EXPECT_EQ(l.lemma("witnesses"), "witness");
  EXPECT_EQ(l.lemma("business"), "business");
  EXPECT_EQ(l.lemma("children"), "child");
  EXPECT_EQ(l.lemma("held"), "hold");
  EXPECT_EQ(l.lemma("court's"), "court");
  EXPECT_EQ(l.lemma("status"), "status");
  EXPECT_EQ(l.lemma("james"), "james");
}

TEST(Lemmatizer, ParseRejectsMalformedRules) {
  EXPECT_THROW(Lemmatizer::parse_rules("s\n"), InvalidInput);
  EXPECT_EQ(Lemmatizer::parse_rules("# c\nies\ty\t2\n").size(), 1u);
}

TEST(Stopwords, ShippedListKeepsLegalTerms) {
  const auto s = default_stopwords();
  EXPECT_TRUE(s.count("the"));
  EXPECT_TRUE(s.count("and"));
  EXPECT_FALSE(s.count("court"));
  EXPECT_FALSE(s.count("law"));
}
