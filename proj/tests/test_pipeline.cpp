#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "prodrank/prodrank.hpp"
#include "test_paths.hpp"

using namespace prodrank;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Every table rendered in memory, keyed by file name.
std::map<std::string, std::string> render(const std::vector<report::Table>& tables, report::Format format) {
  std::map<std::string, std::string> out;
  for (const auto& t : tables) {
    std::ostringstream s;
    format == report::Format::csv ? report::write_csv(s, t) : report::write_json(s, t);
    out[report::file_name(t, format)] = s.str();
  }
  return out;
}

synth::Corpus golden_corpus() {
  return synth::generate_corpus(synth::from_json(nlohmann::json::parse(slurp(test_paths::golden / "config.json"))));
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("prodrank_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Pipeline, GoldenReports) {
  const auto corpus = golden_corpus();
  AnalysisConfig config;
  const auto result = run_analysis(corpus.registry, corpus.publications, config);
  const auto dir = scratch("golden");
  const auto written = report::write_all(run_tables(corpus.registry, result), dir, report::Format::csv, result.notices);
  const auto expected_dir = test_paths::golden / "expected";
  if (std::getenv("PRODRANK_UPDATE_GOLDEN")) {
    fs::create_directories(expected_dir);
    for (const auto& p : written) fs::copy_file(p, expected_dir / p.filename(), fs::copy_options::overwrite_existing);
    GTEST_SKIP() << "golden files regenerated";
  }
  std::size_t expected_files = 0;
  for (const auto& e : fs::directory_iterator(expected_dir)) {
    ++expected_files;
    const auto got = dir / e.path().filename();
    ASSERT_TRUE(fs::exists(got)) << "missing " << e.path().filename();
    EXPECT_EQ(slurp(got), slurp(e.path())) << "report differs: " << e.path().filename();
  }
  EXPECT_EQ(expected_files, written.size());
  fs::remove_all(dir);
}

TEST(Pipeline, SerialAndParallelIdentical) {
  const auto config_synth = synth::paper_like_preset(21);
  const auto corpus = synth::generate_corpus(config_synth);
  AnalysisConfig serial;
  AnalysisConfig parallel;
  parallel.threads = 6;
  const auto a = run_analysis(corpus.registry, corpus.publications, serial);
  const auto b = run_analysis(corpus.registry, corpus.publications, parallel);
  EXPECT_EQ(render(run_tables(corpus.registry, a), report::Format::csv),
            render(run_tables(corpus.registry, b), report::Format::csv));
  EXPECT_EQ(render(run_tables(corpus.registry, a), report::Format::json),
            render(run_tables(corpus.registry, b), report::Format::json));
  EXPECT_EQ(a.notices, b.notices);
}

TEST(Pipeline, NothingCoveredGivesEmptyReportsAndNotice) {
  const auto corpus = golden_corpus();
  AnalysisConfig config;
  config.coverage_threshold = 1.0;  // no field has every researcher publishing
  const auto result = run_analysis(corpus.registry, corpus.publications, config);
  EXPECT_TRUE(result.scores.table.empty());
  EXPECT_TRUE(result.comparisons.sds.empty());
  EXPECT_TRUE(result.comparisons.uda.empty());
  bool noticed = false;
  for (const auto& n : result.notices) noticed |= n.find("no sds passed") != std::string::npos;
  EXPECT_TRUE(noticed);
  const auto tables = render(run_tables(corpus.registry, result), report::Format::csv);
  EXPECT_TRUE(tables.contains("comparison_sds.csv"));
}

TEST(Pipeline, SingleSdsUdaEqualsSds) {
  auto sc = synth::paper_like_preset(3);
  sc.fields.resize(1);
  sc.cross_field_copub_rate = 0.0;
  const auto corpus = synth::generate_corpus(sc);
  const auto result = run_analysis(corpus.registry, corpus.publications, AnalysisConfig{});
  ASSERT_EQ(result.comparisons.sds.size(), 1u);
  ASSERT_EQ(result.comparisons.uda.size(), 1u);
  const auto& s = result.comparisons.sds[0];
  const auto& u = result.comparisons.uda[0];
  EXPECT_EQ(u.n, s.n);
  for (std::size_t i = 0; i < s.pairs.size(); ++i) {
    EXPECT_EQ(u.pairs[i].shifts, s.pairs[i].shifts);
    EXPECT_NEAR(*u.pairs[i].rho, *s.pairs[i].rho, 1e-12);
  }
  for (std::size_t i = 0; i < s.overlaps.size(); ++i) EXPECT_EQ(u.overlaps[i].intersection, s.overlaps[i].intersection);
}

TEST(Pipeline, ScoresMatchDirectComputation) {
  const auto corpus = golden_corpus();
  AnalysisConfig config;
  const auto result = run_analysis(corpus.registry, corpus.publications, config);
  const PublicationIndex index(corpus.publications, config.window);
  ASSERT_FALSE(result.scores.table.empty());
  for (const auto& [id, e] : result.scores.table) {
    std::vector<std::int64_t> counts;
    for (auto i : index.of(id)) counts.push_back(corpus.publications[i].citations);
    EXPECT_EQ(e.scores.h, h_index(counts));
    EXPECT_EQ(e.scores.g, g_index(counts));
    const auto& r = corpus.registry.at(id);
    EXPECT_EQ(e.scores.fss, fss(r, corpus.publications, index.of(id), result.baselines, config.baseline, config.weights));
  }
}

TEST(Pipeline, StagedEqualsRun) {
  // scores -> csv -> rank -> csv -> compare reproduces the in-memory result
  const auto corpus = golden_corpus();
  const auto result = run_analysis(corpus.registry, corpus.publications, AnalysisConfig{});
  std::stringstream scores_csv;
  report::write_csv(scores_csv, tables::scores(result.scores.table));
  const auto scores = read_scores(scores_csv, corpus.registry.sds_to_uda());
  const auto rankings = rank_all(scores, QuartileConvention::rank_offset);
  std::stringstream ranked_csv;
  report::write_csv(ranked_csv, tables::ranked(rankings));
  RankingSet reread;
  for (auto& [key, list] : read_ranked(ranked_csv)) reread[key.first][key.second] = std::move(list);
  EXPECT_EQ(reread, result.rankings);
  const auto cmp = compare_all(reread, corpus.registry.sds_to_uda(), UdaCorrelationMode::pooled_percentile);
  EXPECT_EQ(render(comparison_tables(cmp), report::Format::csv),
            render(comparison_tables(result.comparisons), report::Format::csv));
}

TEST(Pipeline, ImportedBaselinesEqualComputed) {
  const auto corpus = golden_corpus();
  const auto computed = run_analysis(corpus.registry, corpus.publications, AnalysisConfig{});
  std::stringstream csv;
  report::write_csv(csv, tables::baselines(computed.baselines));
  const auto imported = read_baselines(csv);
  const auto again = run_analysis(corpus.registry, corpus.publications, AnalysisConfig{}, nullptr, &imported);
  for (const auto& [id, e] : computed.scores.table) EXPECT_EQ(e.scores.fss, again.scores.table.at(id).scores.fss);
}

TEST(Pipeline, MissingBaselineFailsWithAllResearchers) {
  const auto corpus = golden_corpus();
  BaselineTable empty;
  try {
    run_analysis(corpus.registry, corpus.publications, AnalysisConfig{}, nullptr, &empty);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("could not be scored"), std::string::npos);
  }
}

TEST(Pipeline, EligibilityTablePartitionsRegistry) {
  const auto corpus = golden_corpus();
  const auto result = run_analysis(corpus.registry, corpus.publications, AnalysisConfig{});
  const auto t = tables::eligibility(corpus.registry, result.eligibility);
  EXPECT_EQ(t.rows.size(), corpus.registry.size());
}

TEST(Report, WriteAllRemovesPartialOutput) {
  const auto dir = scratch("partial");
  fs::create_directories(dir / "scores.csv");  // a directory where a file must go
  report::Table a{"aaa", {}, {"x"}, {}};
  report::Table b{"scores", {}, {"x"}, {}};
  EXPECT_THROW(report::write_all({a, b}, dir, report::Format::csv), IoError);
  EXPECT_FALSE(fs::exists(dir / "aaa.csv"));
  fs::remove_all(dir);
}

TEST(Report, CsvAndJsonShapes) {
  report::Table t{"demo", {"a note"}, {"name", "value", "rho"}, {}};
  t.add({report::Cell::text("x,y"), report::Cell::exact(0.1), report::Cell::missing()});
  std::ostringstream csv, json;
  report::write_csv(csv, t);
  report::write_json(json, t);
  EXPECT_EQ(csv.str(), "# a note\nname,value,rho\n\"x,y\",0.1,undefined\n");
  const auto j = nlohmann::json::parse(json.str());
  EXPECT_TRUE(j["rows"][0]["rho"].is_null());
  EXPECT_EQ(j["rows"][0]["value"], 0.1);
}

TEST(RunConfig, FileThenOverlay) {
  RunConfig c;
  apply_json(c, nlohmann::json::parse(R"({"quartile_convention":"midpoint","threads":3,"window":{"pub_year_to":2006}})"));
  EXPECT_EQ(c.analysis.quartiles, QuartileConvention::midpoint);
  EXPECT_EQ(c.analysis.threads, 3u);
  EXPECT_EQ(c.analysis.window.pub_year_to, 2006);
  EXPECT_EQ(c.analysis.window.pub_year_from, 2001);
  apply_json(c, nlohmann::json::parse(R"({"quartile_convention":"nearest_rank"})"));
  EXPECT_EQ(c.analysis.quartiles, QuartileConvention::nearest_rank);
  EXPECT_THROW(apply_json(c, nlohmann::json::parse(R"({"quartile":"x"})")), ConfigError);
  EXPECT_THROW(apply_json(c, nlohmann::json::parse(R"({"uda_mode":"median"})")), ConfigError);
  EXPECT_THROW(apply_json(c, nlohmann::json::parse(R"({"threads":0})")), ConfigError);
  c.analysis.coverage_threshold = 1.5;
  EXPECT_THROW(validate(c), ConfigError);
  const auto j = to_json(RunConfig{});
  EXPECT_EQ(j["baseline_combine"], "mean");
  EXPECT_EQ(j["life_science_udas"], nlohmann::json::array({"05", "06", "07"}));
}
