#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "lexbias/weat.hpp"
#include "oracles.hpp"

using namespace lexbias;

namespace {

embedding::EmbeddingSet make_set(const std::vector<std::pair<std::string, std::vector<float>>>& rows) {
  std::vector<std::string> terms;
  std::vector<float> data;
  for (const auto& [t, v] : rows) {
    terms.push_back(t);
    data.insert(data.end(), v.begin(), v.end());
  }
  return embedding::EmbeddingSet(terms, rows.front().second.size(), data);
}

}  // namespace

TEST(Association, UnitVectorsGiveOne) {
  const auto emb = make_set({{"w", {1, 0}}, {"a", {1, 0}}, {"b", {0, 1}}});
  const auto sets = weat::resolve({{"w"}, {"v"}, {"a"}, {"b"}}, emb);
  EXPECT_DOUBLE_EQ(*weat::association("w", sets.a, sets.b, emb), 1.0);
}

TEST(Association, IdenticalAttributeSetsCancel) {
  const auto emb = make_set({{"w", {0.3f, 2}}, {"a", {1, 0.5f}}, {"c", {-1, 4}}});
  weat::ResolvedSet s{{"a", "c"}, {1, 2}, {}};
  EXPECT_DOUBLE_EQ(*weat::association("w", s, s, emb), 0.0);
}

TEST(Association, UnresolvedWordIsSkipped) {
  const auto emb = make_set({{"a", {1, 0}}, {"b", {0, 1}}});
  const auto sets = weat::resolve({{"zz"}, {"yy"}, {"a"}, {"b"}}, emb);
  EXPECT_FALSE(weat::association("zz", sets.a, sets.b, emb).has_value());
}

TEST(Association, EmptyAttributeSetsThrow) {
  const auto emb = make_set({{"w", {1, 0}}});
  weat::ResolvedSet empty;
  EXPECT_THROW(weat::association("w", empty, empty, emb), TestInvalid);
}

TEST(WeatStatistic, DirectSubstitution) {
  // s(x1) = 1, s(y1) = -1, so T = 2.
  const auto emb = make_set({{"x1", {1, 0}}, {"y1", {0, 1}}, {"a", {1, 0}}, {"b", {0, 1}}});
  const auto sets = weat::resolve({{"x1"}, {"y1"}, {"a"}, {"b"}}, emb);
  EXPECT_DOUBLE_EQ(weat::weat_statistic(sets, emb), 2.0);
}

TEST(WeatStatistic, EqualTargetSetsGiveZero) {
  std::mt19937_64 rng(5);
  auto f = fixture::random_weat(rng, 4, 1, 3, 3, 6);
  auto s = weat::resolve(f.sets, f.emb);
  s.y = s.x;
  EXPECT_EQ(weat::weat_statistic(s, f.emb), 0.0);
}

TEST(WeatStatistic, MatchesCompositionalOracle) {
  std::mt19937_64 rng(11);
  const auto f = fixture::random_weat(rng, 4, 4, 6, 6, 8);
  const auto sets = weat::resolve(f.sets, f.emb);
  double expected = 0.0;
  for (const auto& t : f.sets.x) expected += *weat::association(t, sets.a, sets.b, f.emb);
  for (const auto& t : f.sets.y) expected -= *weat::association(t, sets.a, sets.b, f.emb);
  EXPECT_NEAR(weat::weat_statistic(sets, f.emb), expected, 1e-12);
}

TEST(WeatStatistic, MatchesBruteForceOnFiveTermSets) {
  std::mt19937_64 rng(17);
  const auto f = fixture::random_weat(rng, 5, 5, 5, 5, 8);
  const auto sets = weat::resolve(f.sets, f.emb);
  EXPECT_NEAR(weat::weat_statistic(sets, f.emb), oracle::weat(f.x, f.y, f.a, f.b), 1e-12);
}

TEST(WeatStatistic, MeanFormDividesBySetSizes) {
  std::mt19937_64 rng(3);
  const auto f = fixture::random_weat(rng, 3, 5, 4, 4, 6);
  const auto sets = weat::resolve(f.sets, f.emb);
  double sx = 0, sy = 0;
  for (const auto& v : f.x) sx += oracle::assoc(v, f.a, f.b);
  for (const auto& v : f.y) sy += oracle::assoc(v, f.a, f.b);
  EXPECT_NEAR(weat::weat_statistic(sets, f.emb, weat::StatisticForm::kMean), sx / 3 - sy / 5, 1e-12);
}

TEST(WeatStatistic, EmptyResolvedSetNamesTheSet) {
  const auto emb = make_set({{"x1", {1, 0}}, {"a", {1, 0}}, {"b", {0, 1}}});
  const auto sets = weat::resolve({{"x1"}, {"nobody"}, {"a"}, {"b"}}, emb);
  try {
    weat::weat_statistic(sets, emb);
    FAIL();
  } catch (const TestInvalid& e) {
    EXPECT_NE(std::string(e.what()).find("Y"), std::string::npos);
  }
}

TEST(Resolve, DropsTermsWithoutVectors) {
  const auto emb = make_set({{"x1", {1, 0}}, {"a", {1, 0}}, {"b", {0, 1}}});
  const auto sets = weat::resolve({{"x1", "x2"}, {"y"}, {"a"}, {"b", "c"}}, emb);
  EXPECT_EQ(sets.x.terms, std::vector<std::string>{"x1"});
  EXPECT_EQ(sets.x.dropped, std::vector<std::string>{"x2"});
  EXPECT_EQ(sets.b.dropped, std::vector<std::string>{"c"});
}

TEST(WordSets, ValidateRejectsOverlap) {
  weat::WordSets s{{"a1"}, {"a1"}, {"p"}, {"q"}};
  EXPECT_THROW(s.validate(), InvalidInput);
  weat::WordSets t{{"n"}, {"m"}, {"p"}, {"n"}};
  EXPECT_THROW(t.validate(), InvalidInput);
}

TEST(WordSets, ShippedListsLoad) {
  const auto s = weat::WordSets::defaults();
  EXPECT_EQ(s.y.size(), 46u);
  EXPECT_EQ(s.x.size(), 27u);
  EXPECT_GT(s.a.size(), 1000u);
  EXPECT_GT(s.b.size(), 2000u);
}

TEST(RandomizationTest, DegenerateIdenticalVectorsGivePOne) {
  const auto emb = make_set({{"x1", {1, 2}}, {"y1", {2, -1}}, {"a1", {1, 1}}, {"a2", {1, 1}},
                             {"b1", {1, 1}}, {"b2", {1, 1}}});
  const auto sets = weat::resolve({{"x1"}, {"y1"}, {"a1", "a2"}, {"b1", "b2"}}, emb);
  weat::WeatConfig cfg;
  cfg.shuffles = 200;
  const auto r = weat::randomization_test(sets, emb, cfg);
  for (double t : r.randomized) EXPECT_EQ(t, r.observed);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_FALSE(r.significant);
  EXPECT_FALSE(r.normalized.has_value());
}

TEST(RandomizationTest, SampledPValueNearExactOnSixTerms) {
  std::mt19937_64 rng(23);
  const auto f = fixture::random_weat(rng, 3, 3, 3, 3, 5);
  const auto sets = weat::resolve(f.sets, f.emb);
  weat::WeatConfig cfg;
  cfg.shuffles = 10000;
  cfg.seed = 99;
  const auto r = weat::randomization_test(sets, f.emb, cfg);
  EXPECT_NEAR(r.p_value, oracle::exact_p_value(f.x, f.y, f.a, f.b), 0.02);
}

TEST(RandomizationTest, PlantedGeometryIsSignificant) {
  // X names sit near A terms and Y names near B terms.
  std::mt19937_64 rng(7);
  std::normal_distribution<float> noise(0.0f, 0.1f);
  std::vector<std::pair<std::string, std::vector<float>>> rows;
  auto around = [&](const std::string& name, std::vector<float> c) {
    for (auto& v : c) v += noise(rng);
    rows.push_back({name, c});
  };
  weat::WordSets ws;
  for (int i = 0; i < 5; ++i) {
    ws.x.push_back("x" + std::to_string(i));
    ws.y.push_back("y" + std::to_string(i));
    around(ws.x.back(), {1, 0, 0.2f});
    around(ws.y.back(), {0, 1, 0.2f});
  }
  for (int i = 0; i < 8; ++i) {
    ws.a.push_back("a" + std::to_string(i));
    ws.b.push_back("b" + std::to_string(i));
    around(ws.a.back(), {1, 0, 0});
    around(ws.b.back(), {0, 1, 0});
  }
  const auto emb = make_set(rows);
  weat::WeatConfig cfg;
  cfg.seed = 4;
  const auto r = weat::randomization_test(weat::resolve(ws, emb), emb, cfg);
  EXPECT_GT(r.observed, 0.0);
  EXPECT_TRUE(r.significant);
  EXPECT_LE(r.p_value, 0.05);
}

TEST(RandomizationTest, ResultDoesNotDependOnThreads) {
  std::mt19937_64 rng(31);
  const auto f = fixture::random_weat(rng, 6, 6, 8, 8, 12);
  const auto sets = weat::resolve(f.sets, f.emb);
  weat::WeatConfig cfg;
  cfg.seed = 8;
  const auto one = weat::randomization_test(sets, f.emb, cfg);
  cfg.threads = 3;
  const auto three = weat::randomization_test(sets, f.emb, cfg);
  EXPECT_EQ(one.randomized, three.randomized);
  EXPECT_EQ(one.p_value, three.p_value);
}

TEST(RandomizationTest, PValueAndCriticalValueAgree) {
  std::mt19937_64 rng(41);
  const auto f = fixture::random_weat(rng, 4, 4, 6, 6, 8);
  const auto sets = weat::resolve(f.sets, f.emb);
  weat::WeatConfig cfg;
  cfg.shuffles = 999;
  auto r = weat::randomization_test(sets, f.emb, cfg);
  EXPECT_EQ(r.significant, r.observed >= r.critical_value());
  std::size_t at_least = 0;
  for (double t : r.randomized) at_least += t >= r.observed;
  EXPECT_DOUBLE_EQ(r.p_value, (1.0 + at_least) / 1000.0);
}

TEST(RandomizationTest, RejectsBadConfig) {
  std::mt19937_64 rng(2);
  const auto f = fixture::random_weat(rng, 2, 2, 2, 2, 3);
  const auto sets = weat::resolve(f.sets, f.emb);
  weat::WeatConfig cfg;
  cfg.shuffles = 0;
  EXPECT_THROW(weat::randomization_test(sets, f.emb, cfg), InvalidInput);
  cfg.shuffles = 10;
  cfg.alpha = 1.0;
  EXPECT_THROW(weat::randomization_test(sets, f.emb, cfg), InvalidInput);
}

TEST(WeatResultJson, RoundTripKeepsEveryField) {
  std::mt19937_64 rng(13);
  const auto f = fixture::random_weat(rng, 3, 3, 4, 4, 6);
  weat::WeatConfig cfg;
  cfg.shuffles = 50;
  auto r = weat::randomization_test(weat::resolve(f.sets, f.emb), f.emb, cfg);
  r.key = {"South", "1980-2009"};
  r.manifest = "abc";
  const auto j = weat::to_json(r);
  for (const char* k : {"schema", "label", "region", "period", "observed", "randomized", "randomized_stdev", "normalized",
                        "p_value", "alpha", "significant", "seed", "statistic_form", "shuffles", "critical_value", "resolved_sizes", "dropped", "manifest"}) {
    EXPECT_TRUE(j.contains(k)) << k;
  }
  const auto back = weat::weat_result_from_json(j);
  EXPECT_EQ(back.key, r.key);
  EXPECT_EQ(back.randomized, r.randomized);
  EXPECT_EQ(back.observed, r.observed);
  EXPECT_EQ(back.normalized, r.normalized);
  EXPECT_EQ(back.manifest, "abc");
}
