#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>

#include "chronorder/corpus.hpp"
#include "chronorder/error.hpp"
#include "test_support.hpp"

using namespace chronorder;
using testing_support::doc;
using testing_support::TempDir;
using testing_support::write_file;

TEST(Tokenize, LowercasesAndStripsPunctuation) {
  EXPECT_EQ(tokenize("Drug abuse, drug treatment."),
            (std::vector<std::string>{"drug", "abuse", "drug", "treatment"}));
  EXPECT_EQ(tokenize("Francis et Anglis"), (std::vector<std::string>{"francis", "et", "anglis"}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize("  ,;. \t\n").empty());
}

TEST(Tokenize, OptionsAreHonoured) {
  TokenizeOptions keep{false, false};
  EXPECT_EQ(tokenize("Drug, abuse.", keep), (std::vector<std::string>{"Drug,", "abuse."}));
}

TEST(Tokenize, KeepsNonAsciiBytes) {
  EXPECT_EQ(tokenize("Ældred GRÜN"), (std::vector<std::string>{"Ældred", "grÜn"}));
}

TEST(Tokenize, IdempotentOnOwnOutput) {
  const std::string text = "In the year 1215, King John; sealed -- the CHARTER!";
  const auto once = tokenize(text);
  std::string joined;
  for (const auto& t : once) joined += t + " ";
  EXPECT_EQ(tokenize(joined), once);
}

TEST(Corpus, RejectsEmptyAndDuplicates) {
  try {
    Corpus c(std::vector<Document>{});
    FAIL() << "expected an error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("no documents"), std::string::npos);
  }
  EXPECT_THROW(Corpus({doc("a", 1, "x"), doc("a", 2, "y")}), ValidationError);
  EXPECT_THROW(Corpus({doc("a", 1, "x"), doc("b", 2, "...")}), ValidationError);
}

TEST(Loaders, EmptyFileHasNoDocuments) {
  TempDir dir;
  write_file(dir / "empty.jsonl", "");
  try {
    load_corpus(dir / "empty.jsonl", CorpusFormat::jsonl);
    FAIL() << "expected an error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("no documents"), std::string::npos);
  }
}

TEST(Loaders, ThreeLineJsonl) {
  TempDir dir;
  write_file(dir / "c.jsonl",
             "{\"id\":\"a\",\"date\":1801,\"text\":\"One two\"}\n"
             "{\"id\":\"b\",\"date\":1790,\"text\":\"two three\"}\n"
             "{\"id\":\"c\",\"date\":1825,\"text\":\"three, four!\"}\n");
  const auto c = load_corpus(dir / "c.jsonl", CorpusFormat::jsonl);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0].id, "a");
  EXPECT_EQ(c[2].tokens, (std::vector<std::string>{"three", "four"}));
  ASSERT_TRUE(c.span());
  EXPECT_EQ(c.span()->first, 1790);
  EXPECT_EQ(c.span()->last, 1825);
  EXPECT_TRUE(c.fully_dated());
}

TEST(Loaders, MalformedRecordNamesTheLine) {
  TempDir dir;
  write_file(dir / "bad.jsonl",
             "{\"id\":\"a\",\"text\":\"x y\"}\n{\"id\":\"b\",\"text\":\n");
  try {
    load_corpus(dir / "bad.jsonl", CorpusFormat::jsonl);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(Loaders, DuplicateIdIsValidationError) {
  TempDir dir;
  write_file(dir / "dup.jsonl",
             "{\"id\":\"a\",\"text\":\"x\"}\n{\"id\":\"a\",\"text\":\"y\"}\n");
  EXPECT_THROW(load_corpus(dir / "dup.jsonl", CorpusFormat::jsonl), ValidationError);
}

TEST(Loaders, CsvWithQuotedFields) {
  TempDir dir;
  write_file(dir / "c.csv",
             "id,date,text\n"
             "a,1200,\"Hello, \"\"world\"\"\"\n"
             "b,,\"multi\nline\"\n");
  const auto c = load_corpus(dir / "c.csv", CorpusFormat::csv);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].tokens, (std::vector<std::string>{"hello", "world"}));
  EXPECT_FALSE(c[1].year);
  EXPECT_EQ(c[1].tokens, (std::vector<std::string>{"multi", "line"}));
}

TEST(Loaders, DirectoryLayout) {
  TempDir dir;
  write_file(dir / "deed7_1203.txt", "Sciant presentes");
  write_file(dir / "note.txt", "undated text");
  const auto c = load_corpus(dir.path(), CorpusFormat::directory);
  ASSERT_EQ(c.size(), 2u);
  std::map<std::string, std::optional<int>> years;
  for (const auto& d : c.documents()) years[d.id] = d.year;
  EXPECT_EQ(years.at("deed7"), 1203);
  EXPECT_FALSE(years.at("note"));
}

TEST(Conflate, SumsTotalsPerYear) {
  Corpus c({doc("a", 1200, "x y"), doc("b", 1200, "z"), doc("c", 1201, "x"),
            doc("d", 1201, "y y y")});
  const auto out = conflate_by_year(c);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].tokens.size(), 3u);
  EXPECT_EQ(out[1].tokens.size(), 4u);
  EXPECT_EQ(out[0].tokens, (std::vector<std::string>{"x", "y", "z"}));
  EXPECT_EQ(out[0].year, 1200);
}

TEST(Conflate, OnePerYearIsIdentity) {
  Corpus c({doc("a", 1300, "p q"), doc("b", 1290, "r")});
  const auto out = conflate_by_year(c);
  ASSERT_EQ(out.size(), 2u);
  for (const auto& d : out.documents()) {
    const auto& src = d.year == 1300 ? c[0] : c[1];
    EXPECT_EQ(d.tokens, src.tokens);
  }
}

TEST(Conflate, UndatedIsRejected) {
  Corpus c({doc("a", 1300, "p"), doc("b", std::nullopt, "r")});
  EXPECT_THROW(conflate_by_year(c), ValidationError);
}

TEST(Conflate, PreservesTokenMass) {
  std::mt19937_64 rng(5);
  std::vector<Document> docs;
  for (int i = 0; i < 40; ++i) {
    Document d{"d" + std::to_string(i), 1100 + static_cast<int>(rng() % 12), {}};
    const auto n = 1 + rng() % 30;
    for (std::size_t k = 0; k < n; ++k) d.tokens.push_back("w" + std::to_string(rng() % 9));
    docs.push_back(d);
  }
  Corpus c(docs);
  EXPECT_EQ(conflate_by_year(c).total_tokens(), c.total_tokens());
}

TEST(Sampling, WrapRuleTargets) {
  const auto t = systematic_targets({1790, 2020}, 2010, 4, 24);
  EXPECT_EQ(t, (std::vector<int>{2010, 1803, 1827, 1851}));
}

TEST(Sampling, GapsEqualStepModuloWidth) {
  const YearSpan span{1120, 1300};
  const auto t = systematic_targets(span, 1290, 10, 18);
  for (std::size_t i = 1; i < t.size(); ++i) {
    const int gap = ((t[i] - t[i - 1]) % span.width() + span.width()) % span.width();
    EXPECT_EQ(gap, 18);
  }
}

namespace {

Corpus yearly(int first, int last, int per_year = 1) {
  std::vector<Document> docs;
  for (int y = first; y <= last; ++y) {
    for (int k = 0; k < per_year; ++k) {
      docs.push_back(doc("d" + std::to_string(y) + "_" + std::to_string(k), y,
                         "w" + std::to_string(y) + " common"));
    }
  }
  return Corpus(docs);
}

}  // namespace

TEST(Sampling, ReproducibleAndRanked) {
  const auto c = yearly(1790, 2020);
  Rng a(42), b(42);
  const auto s1 = systematic_sample(c, 10, 24, a, SampleMode::conflated);
  const auto s2 = systematic_sample(c, 10, 24, b, SampleMode::conflated);
  EXPECT_EQ(s1.years, s2.years);
  ASSERT_EQ(s1.documents.size(), 10u);
  std::vector<int> sorted = s1.years;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
  for (std::size_t i = 0; i < 10; ++i) {
    const auto pos = std::find(sorted.begin(), sorted.end(), s1.years[i]) - sorted.begin();
    EXPECT_EQ(s1.true_rank[i], pos + 1);
  }
}

TEST(Sampling, GappyCorpusResolvesToNearestYear) {
  // only even years exist, so odd targets move
  std::vector<Document> docs;
  for (int y = 1200; y <= 1260; y += 2) docs.push_back(doc("d" + std::to_string(y), y, "a b"));
  Corpus c(docs);
  Rng rng(3);
  const auto s = systematic_sample(c, 6, 7, rng, SampleMode::conflated);
  for (int y : s.years) EXPECT_EQ(y % 2, 0);
}

TEST(Sampling, SingleModePicksOneDocumentOfTheYear) {
  const auto c = yearly(1200, 1300, 3);
  Rng rng(9);
  const auto s = systematic_sample(c, 8, 12, rng, SampleMode::single);
  for (std::size_t i = 0; i < s.documents.size(); ++i) {
    EXPECT_EQ(s.documents[i].year, s.years[i]);
    EXPECT_EQ(s.documents[i].tokens.size(), 2u);
  }
}

TEST(Sampling, TooFewYearsIsSamplingError) {
  const auto c = yearly(1200, 1205);
  Rng rng(1);
  EXPECT_THROW(systematic_sample(c, 10, 2, rng, SampleMode::conflated), SamplingError);
}

TEST(Counts, SingleDocumentWordsExcluded) {
  const auto counts = build_counts({doc("a", 1, "x y y q"), doc("b", 2, "y z x")});
  EXPECT_EQ(counts.vocabulary(), (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(counts.totals(), (std::vector<std::uint64_t>{4, 3}));
  EXPECT_EQ(counts.dense_row(*counts.find_word("y")), (std::vector<std::uint64_t>{2, 1}));
  EXPECT_FALSE(counts.find_word("q"));
  EXPECT_EQ(counts.unfiltered_vocabulary_size(), 4u);
}

TEST(Counts, OccurrenceFilterAlternative) {
  const auto counts =
      build_counts({doc("a", 1, "q q x"), doc("b", 2, "x z")}, 2, VocabularyFilter::total_occurrences);
  EXPECT_EQ(counts.vocabulary(), (std::vector<std::string>{"q", "x"}));
}

TEST(Counts, PermutationEquivariant) {
  std::vector<Document> docs = {doc("a", 1, "x y y z"), doc("b", 2, "y z z z w"),
                                doc("c", 3, "x w w"), doc("d", 4, "x y z w v")};
  const auto base = build_counts(docs);
  std::vector<std::size_t> order = {2, 0, 3, 1};
  std::vector<Document> shuffled;
  for (auto i : order) shuffled.push_back(docs[i]);
  const auto perm = build_counts(shuffled);
  ASSERT_EQ(perm.vocabulary(), base.vocabulary());
  for (std::size_t w = 0; w < base.num_words(); ++w) {
    const auto a = base.dense_row(w);
    const auto b = perm.dense_row(w);
    for (std::size_t j = 0; j < order.size(); ++j) EXPECT_EQ(b[j], a[order[j]]);
  }
  for (std::size_t j = 0; j < order.size(); ++j) EXPECT_EQ(perm.totals()[j], base.totals()[order[j]]);
}
