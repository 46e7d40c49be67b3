#include <filesystem>
#include <map>
#include <random>
#include <unordered_map>

#include <gtest/gtest.h>

#include "lexbias/corpus.hpp"

using namespace lexbias;
using namespace lexbias::corpus;

namespace {

const std::filesystem::path kFixtures = LEXBIAS_FIXTURE_DIR;

std::map<std::string, std::size_t> doc_counts(const IngestResult& r) {
  std::map<std::string, std::size_t> out;
  for (const auto& s : r.shards) out[s.key.label()] = s.document_count();
  return out;
}

}  // namespace

TEST(DateTest, ParsesPrefixes) {
  EXPECT_EQ(Date::parse("1875")->year, 1875);
  EXPECT_EQ(Date::parse("1875-03")->month, 3);
  EXPECT_EQ(Date::parse("1875-03-02")->day, 2);
  EXPECT_FALSE(Date::parse("75").has_value());
  EXPECT_FALSE(Date::parse("1875-13-01").has_value());
  EXPECT_FALSE(Date::parse("1875-02-30x").has_value());
}

TEST(Record, ParsesFieldsAndNullDate) {
  const auto r = parse_record(R"({"id":"a","decision_date":null,"jurisdiction":"NY","text":"x"})");
  EXPECT_EQ(r.id, "a");
  EXPECT_FALSE(r.decision_date.has_value());
  EXPECT_THROW(parse_record("{"), InvalidInput);
  EXPECT_THROW(parse_record(R"({"id":"a"})"), InvalidInput);
}

TEST(Regions, CensusDefault) {
  const auto m = RegionMap::census_default();
  EXPECT_EQ(m.lookup("NY"), Region::kNortheast);
  EXPECT_EQ(m.lookup("ny"), Region::kNortheast);
  EXPECT_EQ(m.lookup("GA"), Region::kSouth);
  EXPECT_EQ(m.lookup("DC"), Region::kSouth);
  EXPECT_EQ(m.lookup("IL"), Region::kMidwest);
  EXPECT_EQ(m.lookup("CA"), Region::kWest);
  EXPECT_EQ(m.lookup("US"), Region::kFederal);
  EXPECT_FALSE(m.lookup("ZZ").has_value());
}

TEST(Regions, ParsedMapMustBeTotal) {
  EXPECT_THROW(RegionMap::parse("NY Northeast\n"), InvalidInput);
  std::string all;
  const auto census = RegionMap::census_default();
  for (const auto& [code, region] : census.entries()) {
    all += code + " " + std::string(region_name(region)) + "\n";
  }
  EXPECT_EQ(RegionMap::parse(all).entries(), RegionMap::census_default().entries());
  EXPECT_THROW(RegionMap::parse(all + "NY Atlantis\n"), InvalidInput);
}

TEST(Periods, DefaultSchemeAndLookup) {
  const auto p = PeriodScheme::default_scheme();
  EXPECT_EQ(p.labels(), (std::vector<std::string>{"1860-1889", "1890-1919", "1920-1949", "1950-1979",
                                                  "1980-2009"}));
  EXPECT_EQ(p.find(1875), 0u);
  EXPECT_EQ(p.find(2009), 4u);
  EXPECT_FALSE(p.find(1859).has_value());
  EXPECT_FALSE(p.find(2010).has_value());
}

TEST(Periods, ParseValidatesContiguity) {
  EXPECT_EQ(PeriodScheme::parse("1900 1950\n1950 2000\n").labels(),
            (std::vector<std::string>{"1900-1949", "1950-1999"}));
  EXPECT_THROW(PeriodScheme::parse("1900 1950\n1960 2000\n"), InvalidInput);
  EXPECT_THROW(PeriodScheme::parse("1950 1900\n"), InvalidInput);
  EXPECT_THROW(PeriodScheme::parse(""), InvalidInput);
}

TEST(Ingest, HandAssignedFixture) {
  const auto r = ingest(kFixtures / "ingest_small.jsonl", RegionMap::census_default(),
                        PeriodScheme::default_scheme());
  // NY 1875 and MA 1860 -> Northeast 1860-1889; GA 1881 -> South 1860-1889;
  // IL 1899 -> Midwest 1890-1919; NY 1890 -> Northeast 1890-1919; TX 1919 -> South 1890-1919.
  const std::map<std::string, std::size_t> expected = {{"Northeast_1860-1889", 2},
                                                       {"South_1860-1889", 1},
                                                       {"Northeast_1890-1919", 1},
                                                       {"South_1890-1919", 1},
                                                       {"Midwest_1890-1919", 1}};
  EXPECT_EQ(doc_counts(r), expected);
  EXPECT_EQ(r.records, 11u);
  EXPECT_EQ(r.assigned_total(), 6u);
  EXPECT_EQ(r.skipped.at(SkipReason::kOutOfRange), 1u);
  EXPECT_EQ(r.skipped.at(SkipReason::kUnknownJurisdiction), 1u);
  EXPECT_EQ(r.skipped.at(SkipReason::kMissingDate), 1u);
  EXPECT_EQ(r.skipped.at(SkipReason::kDuplicateId), 1u);
  EXPECT_EQ(r.skipped.at(SkipReason::kMalformed), 1u);
  EXPECT_EQ(r.skipped_total() + r.assigned_total(), r.records);
  EXPECT_FALSE(r.diagnostics.empty());

  // Stats agree with the ingest counts.
  const auto rows = shard_stats(r.shards);
  ASSERT_EQ(rows.size(), r.shards.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].documents, r.shards[i].document_count());
  }
  EXPECT_EQ(rows.front().region, "Northeast");
  EXPECT_EQ(rows.front().period, "1860-1889");
}

TEST(Ingest, NewYork1875LandsInNortheast) {
  const auto r = ingest_lines({R"({"id":"a","decision_date":"1875","jurisdiction":"NY","text":"Court"})"},
                              RegionMap::census_default(), PeriodScheme::default_scheme());
  ASSERT_EQ(r.shards.size(), 1u);
  EXPECT_EQ(r.shards[0].key, (ShardKey{"Northeast", "1860-1889"}));
}

TEST(Ingest, ThreadsDoNotChangeShards) {
  std::vector<std::string> lines;
  const char* codes[] = {"NY", "GA", "IL", "CA", "US"};
  for (int i = 0; i < 3000; ++i) {
    lines.push_back(R"({"id":")" + std::to_string(i) + R"(","decision_date":")" + std::to_string(1860 + i % 150) +
                    R"(","jurisdiction":")" + codes[i % 5] + R"(","text":"Case number )" + std::to_string(i % 17) +
                    R"( was decided"})");
  }
  IngestOptions one, four;
  four.threads = 4;
  const auto a = ingest_lines(lines, RegionMap::census_default(), PeriodScheme::default_scheme(), one);
  const auto b = ingest_lines(lines, RegionMap::census_default(), PeriodScheme::default_scheme(), four);
  ASSERT_EQ(a.shards.size(), 25u);
  for (std::size_t i = 0; i < a.shards.size(); ++i) EXPECT_EQ(a.shards[i].documents, b.shards[i].documents);
}

TEST(Ingest, UnreadableSourceIsFatal) {
  EXPECT_THROW(ingest(kFixtures / "does_not_exist.jsonl", RegionMap::census_default(),
                      PeriodScheme::default_scheme()),
               InvalidInput);
}

TEST(TermFrequencies, CountsAndTies) {
  CorpusShard s{{"R", "P"}, {{"a", "a", "b"}}};
  EXPECT_EQ(term_frequencies(s, 2), (std::vector<std::pair<std::string, std::uint64_t>>{{"a", 2}, {"b", 1}}));
  CorpusShard t{{"R", "P"}, {{"b", "a"}}};
  EXPECT_EQ(term_frequencies(t, 1), (std::vector<std::pair<std::string, std::uint64_t>>{{"a", 1}}));
  EXPECT_TRUE(term_frequencies(CorpusShard{}, 3).empty());
}

TEST(TermFrequencies, MatchesHashRecount) {
  std::mt19937_64 rng(3);
  CorpusShard s{{"R", "P"}, {}};
  std::unordered_map<std::string, std::uint64_t> recount;
  for (int d = 0; d < 10; ++d) {
    std::vector<std::string> doc;
    for (int k = 0; k < 100; ++k) {
      doc.push_back("t" + std::to_string(rng() % 60));
      ++recount[doc.back()];
    }
    s.documents.push_back(doc);
  }
  const auto top = term_frequencies(s, 1000);
  ASSERT_EQ(top.size(), recount.size());
  for (std::size_t i = 0; i < top.size(); ++i) {
    EXPECT_EQ(top[i].second, recount.at(top[i].first));
    if (i > 0) {
      EXPECT_TRUE(top[i - 1].second > top[i].second ||
                  (top[i - 1].second == top[i].second && top[i - 1].first < top[i].first));
    }
  }
}

TEST(ShardStats, EmptyAndSingle) {
  EXPECT_TRUE(shard_stats({}).empty());
  EXPECT_EQ(stats_csv({}), "region,period,documents,tokens\n");
  CorpusShard s{{"West", "1980-2009"}, {{"a"}, {"b", "c"}, {}}};
  const auto rows = shard_stats({s});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].documents, 3u);
  EXPECT_EQ(rows[0].tokens, 3u);
  EXPECT_EQ(stats_csv(rows), "region,period,documents,tokens\nWest,1980-2009,3,3\n");
}

TEST(ShardIo, RoundTripThroughFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "lexbias_shard_io";
  std::filesystem::remove_all(dir);
  CorpusShard s{{"South", "1890-1919"}, {{"a", "b"}, {"\xc3\xa9"}}};
  const auto path = write_shard(s, dir);
  EXPECT_EQ(path.filename(), "South_1890-1919.txt");
  EXPECT_EQ(std::filesystem::file_size(path), s.byte_size());
  const auto back = read_shard(path);
  EXPECT_EQ(back.key, s.key);
  EXPECT_EQ(back.documents, s.documents);
  EXPECT_EQ(read_shard_dir(dir).size(), 1u);
  std::filesystem::remove_all(dir);
}

TEST(ShardIo, InvalidUtf8Rejected) {
  EXPECT_THROW(parse_shard("ok\nbad \xff\n", {"R", "P"}), FormatError);
}

TEST(Merge, ConcatenatesInOrder) {
  CorpusShard a{{"A", "1"}, {{"x"}}};
  CorpusShard b{{"B", "1"}, {{"y"}, {"z"}}};
  const auto m = merge_shards({&a, &b}, {"All", "1"});
  EXPECT_EQ(m.document_count(), 3u);
  EXPECT_EQ(m.documents[1], std::vector<std::string>{"y"});
}
