#include <map>
#include <set>

#include <gtest/gtest.h>

#include "lexbias/pipeline.hpp"
#include "lexbias/stats.hpp"
#include "lexbias/synthgen.hpp"

using namespace lexbias;
using namespace lexbias::synthgen;

namespace {

std::map<std::string, std::uint64_t> counts(const corpus::CorpusShard& s) {
  std::map<std::string, std::uint64_t> c;
  for (const auto& d : s.documents) {
    for (const auto& t : d) ++c[t];
  }
  return c;
}

embedding::TrainConfig small_train() {
  embedding::TrainConfig t;
  t.dim = 20;
  t.window = 5;
  t.min_count = 5;
  t.iterations = 10;
  return t;
}

}  // namespace

TEST(Generate, SameSeedSameShard) {
  const auto spec = BiasSpec::standard(0.4, 300, 9);
  EXPECT_EQ(corpus::serialize_shard(generate(spec)), corpus::serialize_shard(generate(spec)));
  EXPECT_NE(corpus::serialize_shard(generate(BiasSpec::standard(0.4, 300, 10))),
            corpus::serialize_shard(generate(spec)));
}

TEST(Generate, KeyAndDocumentCount) {
  const auto s = generate(BiasSpec::standard(0.25, 17, 1));
  EXPECT_EQ(s.key.region, "synthetic");
  EXPECT_EQ(s.key.period, "0.250");
  EXPECT_EQ(s.document_count(), 17u);
}

TEST(Generate, BetaChangesPlacementNotLength) {
  const auto a = generate(BiasSpec::standard(0.0, 200, 4));
  const auto b = generate(BiasSpec::standard(1.0, 200, 4));
  for (std::size_t i = 0; i < a.documents.size(); ++i) {
    EXPECT_EQ(a.documents[i].size(), b.documents[i].size());
  }
}

TEST(Generate, FullBiasPlacesMarkersNextToCongruentTerms) {
  auto spec = BiasSpec::standard(1.0, 200, 5);
  spec.events_per_doc = 1;
  const auto s = generate(spec);
  const std::set<std::string> xs(spec.x_markers.begin(), spec.x_markers.end());
  const std::set<std::string> as(spec.a_terms.begin(), spec.a_terms.end());
  const std::set<std::string> ys(spec.y_markers.begin(), spec.y_markers.end());
  const std::set<std::string> bs(spec.b_terms.begin(), spec.b_terms.end());
  for (const auto& d : s.documents) {
    std::ptrdiff_t m = -1, t = -1;
    bool x_marker = false;
    bool a_term = false;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (xs.count(d[i]) || ys.count(d[i])) {
        m = static_cast<std::ptrdiff_t>(i);
        x_marker = xs.count(d[i]) > 0;
      }
      if (as.count(d[i]) || bs.count(d[i])) {
        t = static_cast<std::ptrdiff_t>(i);
        a_term = as.count(d[i]) > 0;
      }
    }
    ASSERT_GE(m, 0);
    ASSERT_GE(t, 0);
    EXPECT_LE(std::abs(m - t), static_cast<std::ptrdiff_t>(spec.adjacency));
    EXPECT_EQ(x_marker, a_term);
  }
}

TEST(Generate, MarkerFloorGuaranteesMinCount) {
  auto spec = BiasSpec::standard(0.3, 0, 2);
  spec.documents = spec.marker_floor(10);
  const auto c = counts(generate(spec));
  for (const auto& m : spec.x_markers) EXPECT_GE(c.at(m), 10u);
  for (const auto& m : spec.y_markers) EXPECT_GE(c.at(m), 10u);
}

TEST(BiasSpecTest, Validation) {
  auto s = BiasSpec::standard(1.5, 10, 0);
  EXPECT_THROW(s.validate(), InvalidInput);
  s = BiasSpec::standard(0.5, 0, 0);
  EXPECT_THROW(s.validate(), InvalidInput);
  s = BiasSpec::standard(0.5, 10, 0);
  s.a_terms.push_back(s.x_markers.front());
  EXPECT_THROW(s.validate(), InvalidInput);
  s = BiasSpec::standard(0.5, 10, 0);
  s.b_terms.push_back("w12");
  EXPECT_THROW(s.validate(), InvalidInput);
  EXPECT_NO_THROW(BiasSpec::standard(0.0, 1, 0).validate());
}

TEST(BiasSpecTest, JsonRoundTrip) {
  auto s = BiasSpec::standard(0.7, 123, 45);
  s.adjacency = 2;
  s.background_vocab = 500;
  const auto back = spec_from_json(to_json(s));
  EXPECT_EQ(to_json(back), to_json(s));
  EXPECT_THROW(spec_from_json({{"beta", "high"}}), InvalidInput);
}

TEST(Sweep, OneRowPerSpecAndFailuresMarked) {
  weat::WeatConfig w;
  w.shuffles = 100;
  auto bad = BiasSpec::standard(0.5, 1, 3);  // too small for any vocabulary at min_count 5
  const auto rows = sweep({BiasSpec::standard(0.5, 600, 3), bad}, small_train(), w);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_TRUE(rows[0].error.empty());
  EXPECT_TRUE(rows[0].p_value.has_value());
  EXPECT_FALSE(rows[1].error.empty());
  const auto csv = sweep_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "beta,documents,seed,observed,normalized,p_value,status");
  EXPECT_NE(csv.find(",error: "), std::string::npos);
  EXPECT_THROW(sweep({}, small_train(), w), InvalidInput);
}

TEST(Symmetry, SwappingMarkersFlipsMeanStatistic) {
  weat::WeatConfig w;
  w.shuffles = 50;
  std::vector<double> fwd, rev;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto spec = BiasSpec::standard(0.5, 1500, seed);
    auto t = small_train();
    t.seed = seed;
    const auto sets = spec.word_sets();
    fwd.push_back(pipeline::analyze_shard(generate(spec), sets, t, w).result.observed);
    // Generate with the marker roles swapped but test the original sets.
    std::swap(spec.x_markers, spec.y_markers);
    rev.push_back(pipeline::analyze_shard(generate(spec), sets, t, w).result.observed);
  }
  EXPECT_GT(stats::mean(fwd), 0.0);
  EXPECT_LT(stats::mean(rev), 0.0);
}
