#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "prodrank/indicators.hpp"
#include "prodrank/synth.hpp"

using namespace prodrank;

namespace {

using Counts = std::vector<std::int64_t>;

AuthorSlot slot(int pos, std::string uni, std::optional<std::string> id = std::nullopt) {
  return AuthorSlot{pos, std::move(id), std::move(uni)};
}

PublicationRecord pub_with(std::string id, int year, std::string cat, std::int64_t citations,
                           std::vector<std::string> universities, const std::string& author, std::size_t author_pos) {
  PublicationRecord p;
  p.publication_id = std::move(id);
  p.year = year;
  p.subject_categories = {std::move(cat)};
  p.citations = citations;
  for (std::size_t i = 0; i < universities.size(); ++i) {
    std::optional<std::string> rid;
    if (i == author_pos) rid = author;
    p.byline.push_back(slot(static_cast<int>(i) + 1, universities[i], rid));
  }
  return p;
}

ResearcherRecord researcher(std::string id, std::string uda = "01") {
  return ResearcherRecord{std::move(id), "MAT/05", std::move(uda), "U1", Role::full, 1990, 2010};
}

}  // namespace

TEST(HIndex, Anchors) {
  EXPECT_EQ(h_index(Counts{10, 10, 10}), 3);
  EXPECT_EQ(h_index(Counts{5, 3, 1, 0}), 2);
  EXPECT_EQ(h_index(Counts{}), 0);
  EXPECT_EQ(h_index(Counts{0, 0, 0}), 0);
  EXPECT_EQ(h_index(Counts{1}), 1);
  EXPECT_EQ(h_index(Counts{100}), 1);
}

TEST(HIndex, OrderDoesNotMatter) {
  EXPECT_EQ(h_index(Counts{0, 5, 1, 3}), 2);
  EXPECT_EQ(h_index(Counts{3, 3, 3, 4, 0}), 3);
}

TEST(GIndex, Anchors) {
  EXPECT_EQ(g_index(Counts{10, 10, 10, 10}, GPadding::pad_zeros), 6);
  EXPECT_EQ(g_index(Counts{10, 10, 10, 10}, GPadding::cap_at_n), 4);
  EXPECT_EQ(g_index(Counts{0, 0}, GPadding::pad_zeros), 0);
  EXPECT_EQ(g_index(Counts{0, 0}, GPadding::cap_at_n), 0);
  EXPECT_EQ(g_index(Counts{10, 10, 10}, GPadding::pad_zeros), 5);
  EXPECT_EQ(g_index(Counts{}, GPadding::pad_zeros), 0);
  EXPECT_EQ(g_index(Counts{1}, GPadding::pad_zeros), 1);
  // 3 citations: g = 1 (1 <= 3 < 4)
  EXPECT_EQ(g_index(Counts{3}, GPadding::pad_zeros), 1);
  EXPECT_EQ(g_index(Counts{4}, GPadding::pad_zeros), 2);
}

TEST(GIndex, SingleHugeCount) {
  // all citations on one paper: g = floor(sqrt(c)) when padded
  EXPECT_EQ(g_index(Counts{10000}, GPadding::pad_zeros), 100);
  EXPECT_EQ(g_index(Counts{9999}, GPadding::pad_zeros), 99);
  EXPECT_EQ(g_index(Counts{10000}, GPadding::cap_at_n), 1);
}

TEST(IndexOracle, RandomProfilesMatchBruteForce) {
  std::mt19937_64 rng(20240601);
  for (int i = 0; i < 300; ++i) {
    const auto c = oracle::random_profile(rng);
    ASSERT_EQ(h_index(c), oracle::brute_h(c));
    ASSERT_EQ(g_index(c, GPadding::pad_zeros), oracle::brute_g(c, true));
    ASSERT_EQ(g_index(c, GPadding::cap_at_n), oracle::brute_g(c, false));
    ASSERT_GE(g_index(c, GPadding::cap_at_n), h_index(c));
  }
}

TEST(Isqrt, ExactAroundSquares) {
  for (std::int64_t r = 0; r < 3000; ++r) {
    EXPECT_EQ(isqrt(r * r), r);
    if (r > 0) EXPECT_EQ(isqrt(r * r - 1), r - 1);
  }
  EXPECT_EQ(isqrt(3037000499LL * 3037000499LL), 3037000499LL);
}

TEST(AuthorWeights, TwoAuthorsAlwaysHalf) {
  for (bool positional : {false, true}) {
    auto p = pub_with("P", 2003, "C", 1, {"A", "A"}, "R", 0);
    auto w = byline_weights(p, positional);
    EXPECT_DOUBLE_EQ(w.weights[0], 0.5);
    EXPECT_DOUBLE_EQ(w.weights[1], 0.5);
  }
}

TEST(AuthorWeights, IntramuralThreeAuthors) {
  auto p = pub_with("P", 2003, "C", 1, {"A", "B", "A"}, "R", 1);
  auto w = byline_weights(p, true);
  EXPECT_EQ(w.rule, PositionalCase::intramural);
  EXPECT_NEAR(w.weights[1], 0.20, 1e-15);
  EXPECT_NEAR(w.weights[0], 0.40, 1e-15);
  EXPECT_NEAR(w.weights[2], 0.40, 1e-15);
}

TEST(AuthorWeights, ExtramuralSixAuthors) {
  auto p = pub_with("P", 2003, "C", 1, {"A", "B", "X", "X", "C", "D"}, "R", 2);
  auto w = byline_weights(p, true);
  EXPECT_EQ(w.rule, PositionalCase::extramural);
  EXPECT_NEAR(w.weights[2], 0.05, 1e-15);
  EXPECT_NEAR(w.weights[3], 0.05, 1e-15);
  EXPECT_NEAR(w.weights[1], 0.15, 1e-15);
  EXPECT_NEAR(w.weights[5], 0.30, 1e-15);
}

TEST(AuthorWeights, FourAuthorsExtramuralFallsBackToFractional) {
  auto p = pub_with("P", 2003, "C", 1, {"A", "B", "C", "D"}, "R", 0);
  auto w = byline_weights(p, true);
  EXPECT_EQ(w.rule, PositionalCase::fallback);
  for (double x : w.weights) EXPECT_DOUBLE_EQ(x, 0.25);
}

TEST(AuthorWeights, RepeatedEdgeUniversityIsFallback) {
  auto p = pub_with("P", 2003, "C", 1, {"A", "B", "X", "B", "D"}, "R", 0);
  EXPECT_EQ(byline_weights(p, true).rule, PositionalCase::fallback);
}

TEST(AuthorWeights, ModeAndBasisSelection) {
  auto p = pub_with("P", 2003, "Oncology", 1, {"A", "B", "A"}, "R", 0);
  AuthorWeightScheme scheme;
  EXPECT_NEAR(author_weight(p, "R", scheme, "06"), 0.4, 1e-15);
  EXPECT_NEAR(author_weight(p, "R", scheme, "01"), 1.0 / 3.0, 1e-15);
  scheme.mode = WeightMode::fractional;
  EXPECT_NEAR(author_weight(p, "R", scheme, "06"), 1.0 / 3.0, 1e-15);
  scheme.mode = WeightMode::life_science_positional;
  scheme.basis = LifeScienceBasis::publication_category;
  scheme.life_science_categories = {"Oncology"};
  EXPECT_NEAR(author_weight(p, "R", scheme, "01"), 0.4, 1e-15);
  EXPECT_THROW(author_weight(p, "nobody", scheme, "01"), ValidationError);
}

TEST(AuthorWeights, MatchOracleOnEnumeratedBylines) {
  // every university assignment over a 3-letter alphabet for s = 1..7
  for (std::size_t s = 1; s <= 7; ++s) {
    std::vector<int> digits(s, 0);
    while (true) {
      std::vector<std::string> unis;
      for (int d : digits) unis.push_back(std::string(1, static_cast<char>('A' + d)));
      // extra distinct universities so the extramural pattern is reachable
      if (s >= 5) {
        unis[0] = "E0";
        unis[1] = "E1";
        if (digits[0] == 0) unis[s - 2] = "E2";
        if (digits[1] == 0) unis[s - 1] = "E3";
      }
      auto p = pub_with("P", 2003, "C", 1, unis, "R", 0);
      const auto expected = oracle::positional_shares(unis);
      const auto got = byline_weights(p, true).weights;
      ASSERT_EQ(got.size(), expected.size());
      for (std::size_t i = 0; i < s; ++i) ASSERT_NEAR(got[i], expected[i], 1e-15);
      std::size_t k = 0;
      while (k < s && ++digits[k] == 3) digits[k++] = 0;
      if (k == s) break;
    }
  }
}

TEST(Fss, WorkedExamples) {
  const auto r = researcher("R");
  BaselineTable table;
  table.set({2003, "A"}, 2.0);
  table.set({2003, "B"}, 3.0);
  table.set({2004, "B"}, 4.0);
  AuthorWeightScheme fractional;
  fractional.mode = WeightMode::fractional;

  PublicationSet one = {pub_with("P1", 2003, "A", 4, {"U", "V"}, "R", 0)};
  std::vector<std::size_t> idx1 = {0};
  EXPECT_NEAR(fss(r, one, idx1, table, {}, fractional), 1.0, 1e-12);

  PublicationSet two = {pub_with("P1", 2003, "B", 6, {"U"}, "R", 0), pub_with("P2", 2004, "B", 2, {"U", "V"}, "R", 1)};
  std::vector<std::size_t> idx2 = {0, 1};
  EXPECT_NEAR(fss(r, two, idx2, table, {}, fractional), 2.25, 1e-12);

  std::vector<std::size_t> none;
  EXPECT_EQ(fss(r, two, none, table, {}, fractional), 0.0);

  // profile [10,10,10], m = 1, sole author
  BaselineTable unit;
  unit.set({2003, "A"}, 1.0);
  PublicationSet three;
  for (int i = 0; i < 3; ++i) three.push_back(pub_with("Q" + std::to_string(i), 2003, "A", 10, {"U"}, "R", 0));
  std::vector<std::size_t> idx3 = {0, 1, 2};
  EXPECT_NEAR(fss(r, three, idx3, unit, {}, fractional), 30.0, 1e-12);
  EXPECT_EQ(h_index(Counts{10, 10, 10}), 3);
  EXPECT_EQ(g_index(Counts{10, 10, 10}), 5);
}

TEST(Fss, ZeroCitedPublicationNeedsNoBaseline) {
  const auto r = researcher("R");
  BaselineTable table;
  table.set({2003, "A"}, 2.0);
  PublicationSet pubs = {pub_with("P1", 2003, "A", 4, {"U"}, "R", 0), pub_with("P2", 2002, "Z", 0, {"U"}, "R", 0)};
  std::vector<std::size_t> idx = {0, 1};
  EXPECT_NEAR(fss(r, pubs, idx, table), 2.0, 1e-12);
  pubs[1].citations = 1;
  EXPECT_THROW(fss(r, pubs, idx, table), MissingBaselineError);
}

TEST(Fss, PositionalWeightAppliedForLifeScienceResearcher) {
  auto r = researcher("R", "06");
  BaselineTable table;
  table.set({2003, "A"}, 5.0);
  PublicationSet pubs = {pub_with("P1", 2003, "A", 10, {"U", "V", "W", "U"}, "R", 3)};
  std::vector<std::size_t> idx = {0};
  EXPECT_NEAR(fss(r, pubs, idx, table), 2.0 * 0.4, 1e-12);
}

TEST(Fss, WeightsSumToOneOnGeneratedCorpus) {
  auto config = synth::paper_like_preset(3);
  const auto corpus = synth::generate_corpus(config);
  double worst = 0.0;
  for (const auto& p : corpus.publications) {
    for (bool positional : {false, true}) {
      double sum = 0.0;
      for (double w : byline_weights(p, positional).weights) sum += w;
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(ScoreAll, ReportsEveryFailure) {
  Registry reg;
  reg.add(researcher("R1"));
  reg.add(researcher("R2"));
  PublicationSet pubs = {pub_with("P1", 2003, "A", 4, {"U"}, "R1", 0), pub_with("P2", 2003, "B", 4, {"U"}, "R2", 0)};
  BaselineTable empty;
  const PublicationIndex index(pubs, AnalysisWindow{});
  auto res = score_all(reg, index, {"R1", "R2"}, empty, {});
  EXPECT_TRUE(res.table.empty());
  ASSERT_EQ(res.failures.size(), 2u);
}

TEST(ScoreAll, ParallelMatchesSerial) {
  auto config = synth::paper_like_preset(5);
  const auto corpus = synth::generate_corpus(config);
  const PublicationIndex index(corpus.publications, config.window);
  std::set<std::string> ids;
  for (const auto& r : corpus.registry) {
    bool cited = false;
    for (auto i : index.of(r.researcher_id)) cited |= corpus.publications[i].citations > 0;
    if (cited) ids.insert(r.researcher_id);
  }
  const auto baselines = compute_baselines(corpus.publications, config.window);
  ScoringConfig serial;
  ScoringConfig parallel;
  parallel.threads = 4;
  const auto a = score_all(corpus.registry, index, ids, baselines, serial);
  const auto b = score_all(corpus.registry, index, ids, baselines, parallel);
  ASSERT_TRUE(a.failures.empty());
  EXPECT_EQ(a.table.size(), ids.size());
  EXPECT_EQ(a.positional_fallbacks, b.positional_fallbacks);
  for (const auto& [id, e] : a.table) {
    const auto& o = b.table.at(id);
    EXPECT_EQ(e.scores.h, o.scores.h);
    EXPECT_EQ(e.scores.g, o.scores.g);
    EXPECT_EQ(e.scores.fss, o.scores.fss);
  }
}
