// prodrank: h-index, g-index and FSS rankings per field, and how they diverge.
//
// Exit codes: 0 success, 1 validation failure, 2 I/O failure, 3 configuration failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "prodrank/prodrank.hpp"

namespace fs = std::filesystem;
using namespace prodrank;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitConfig = 3;

std::ifstream open_input(const std::string& path) {
  if (path.empty()) throw ConfigError("missing input path");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

std::string join_diagnostics(const std::string& path, const std::vector<Diagnostic>& diags) {
  std::string out;
  for (const auto& d : diags) out += path + ":" + std::to_string(d.row) + ": " + d.message + "\n";
  return out;
}

Registry load_researchers(const std::string& path) {
  auto in = open_input(path);
  auto result = ingest_researchers(in);
  if (!result.ok()) throw ValidationError(join_diagnostics(path, result.diagnostics) + "invalid researcher file");
  return std::move(result.records);
}

PublicationSet load_publications(const std::string& path) {
  auto in = open_input(path);
  auto result = ingest_publications(in);
  if (!result.ok()) throw ValidationError(join_diagnostics(path, result.diagnostics) + "invalid publication file");
  return std::move(result.records);
}

nlohmann::json read_json_file(const std::string& path) {
  auto in = open_input(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_table(const report::Table& table, const std::string& path, report::Format format) {
  if (path.empty()) throw ConfigError("missing output path");
  const fs::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  format == report::Format::csv ? report::write_csv(out, table) : report::write_json(out, table);
  if (!out) {
    out.close();
    std::error_code ignored;
    fs::remove(p, ignored);
    throw IoError("write failed for " + path);
  }
}

/// Command-line values collected as a JSON overlay so they pass through the
/// same validation as the config file and override it key by key.
struct Overlay {
  nlohmann::json values = nlohmann::json::object();
  std::string config_file;
  bool explain = false;

  void set(const std::string& key, nlohmann::json v) {
    if (auto dot = key.find('.'); dot != std::string::npos) {
      values[key.substr(0, dot)][key.substr(dot + 1)] = std::move(v);
    } else {
      values[key] = std::move(v);
    }
  }

  RunConfig resolve() const {
    RunConfig c;
    if (!config_file.empty()) apply_json(c, read_json_file(config_file));
    apply_json(c, values);
    validate(c);
    return c;
  }
};

void add_text(CLI::App* app, Overlay& ov, const std::string& flag, const std::string& key, const std::string& help) {
  app->add_option_function<std::string>(flag, [&ov, key](const std::string& v) { ov.set(key, v); }, help);
}

void add_int(CLI::App* app, Overlay& ov, const std::string& flag, const std::string& key, const std::string& help) {
  app->add_option_function<int>(flag, [&ov, key](const int& v) { ov.set(key, v); }, help);
}

void add_list(CLI::App* app, Overlay& ov, const std::string& flag, const std::string& key, const std::string& help) {
  app->add_option_function<std::vector<std::string>>(
         flag, [&ov, key](const std::vector<std::string>& v) { ov.set(key, v); }, help)
      ->delimiter(',');
}

void add_analysis_options(CLI::App* app, Overlay& ov) {
  app->add_option("--config", ov.config_file, "JSON run configuration; command-line flags override it");
  app->add_flag("--explain-config", ov.explain, "print the effective configuration with defaults and exit");
  add_int(app, ov, "--from", "window.pub_year_from", "first publication year of the window (default 2001)");
  add_int(app, ov, "--to", "window.pub_year_to", "last publication year of the window (default 2005)");
  add_text(app, ov, "--census-date", "window.census_date", "citation census date, yyyy-mm-dd (default 2009-06-30)");
  app->add_option_function<double>(
      "--coverage-threshold", [&ov](const double& v) { ov.set("coverage_threshold", v); },
      "minimum share of publishing researchers for an sds to be analysed (default 0.5)");
  add_text(app, ov, "--coverage-denominator", "coverage_denominator", "tenure_eligible (default) or all");
  add_text(app, ov, "--baseline-combine", "baseline_combine", "multi-category baseline: mean (default), min, max, first");
  add_text(app, ov, "--baseline-missing", "baseline_missing", "strict (default) or fallback");
  add_text(app, ov, "--g-padding", "g_padding", "pad_zeros (default) or cap_at_n");
  add_text(app, ov, "--weight-mode", "weight_mode", "life_science_positional (default) or fractional");
  add_text(app, ov, "--life-science-basis", "life_science_basis", "researcher_uda (default) or publication_category");
  add_list(app, ov, "--life-science-udas", "life_science_udas", "comma-separated UDA codes (default 05,06,07)");
  add_list(app, ov, "--life-science-categories", "life_science_categories",
           "comma-separated subject categories for the publication_category basis");
  add_text(app, ov, "--quartile-convention", "quartile_convention", "rank_offset (default), midpoint, nearest_rank");
  add_text(app, ov, "--uda-mode", "uda_mode", "pooled_percentile (default) or weighted_mean");
  add_text(app, ov, "--format", "format", "csv (default) or json");
  add_int(app, ov, "--threads", "threads", "worker threads (default 1); output does not depend on it");
}

bool explain(const Overlay& ov) {
  if (!ov.explain) return false;
  std::cout << to_json(ov.resolve()).dump(2) << '\n';
  return true;
}

int cmd_ingest(const std::string& researchers, const std::string& publications) {
  auto rin = open_input(researchers);
  auto pin = open_input(publications);
  auto r = ingest_researchers(rin);
  auto p = ingest_publications(pin);
  std::cerr << join_diagnostics(researchers, r.diagnostics) << join_diagnostics(publications, p.diagnostics);
  if (!r.ok() || !p.ok()) {
    std::cout << "failed: " << r.diagnostics.size() + p.diagnostics.size() << " error(s)\n";
    return kExitValidation;
  }
  std::cout << "ok: " << r.records.size() << " researchers, " << p.records.size() << " publications\n";
  return 0;
}

int cmd_synth(const std::string& config_path, const std::string& preset, std::optional<std::uint64_t> seed,
              const std::string& out_dir, bool dump_config) {
  synth::SynthConfig config;
  if (!config_path.empty()) {
    config = synth::from_json(read_json_file(config_path));
  } else if (preset == "paper_like") {
    config = synth::paper_like_preset();
  } else if (!preset.empty()) {
    throw ConfigError("preset: unknown preset '" + preset + "' (expected paper_like)");
  } else {
    throw ConfigError("synth needs --config or --preset");
  }
  if (seed) config.seed = *seed;
  if (dump_config) {
    std::cout << synth::to_json(config).dump(2) << '\n';
    return 0;
  }
  if (out_dir.empty()) throw ConfigError("synth needs --out");
  const auto corpus = synth::generate_corpus(config);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());
  {
    std::ofstream r(fs::path(out_dir) / "researchers.csv", std::ios::binary | std::ios::trunc);
    std::ofstream p(fs::path(out_dir) / "publications.jsonl", std::ios::binary | std::ios::trunc);
    if (!r || !p) throw IoError("cannot write corpus files into " + out_dir);
    write_researchers(r, corpus.registry);
    write_publications(p, corpus.publications);
    if (!r || !p) throw IoError("write failed in " + out_dir);
  }
  std::printf("%-12s %6s %7s %6s %6s %8s %8s\n", "sds", "n", "unpub", "uncit", "pubs", "byline", "med_cit");
  for (const auto& s : synth::summarize(corpus, config.window)) {
    std::printf("%-12s %6zu %7zu %6zu %6zu %8.2f %8.1f\n", s.sds.c_str(), s.researchers, s.unpublished, s.uncited,
                s.publications, s.mean_byline, s.median_citations);
  }
  std::printf("total: %zu researchers, %zu publications\n", corpus.registry.size(), corpus.publications.size());
  return 0;
}

BaselineTable baselines_for(const RunConfig& c, const PublicationSet& pubs) {
  if (!c.baselines.empty()) {
    auto in = open_input(c.baselines);
    return read_baselines(in);
  }
  if (!c.reference.empty()) return compute_baselines(load_publications(c.reference), c.analysis.window);
  return compute_baselines(pubs, c.analysis.window);
}

int cmd_run(const RunConfig& c) {
  const auto registry = load_researchers(c.researchers);
  const auto pubs = load_publications(c.publications);
  const auto baselines = baselines_for(c, pubs);
  const auto result = run_analysis(registry, pubs, c.analysis, nullptr, &baselines);
  const auto written = report::write_all(run_tables(registry, result), c.output_dir, c.format, result.notices);
  for (const auto& n : result.notices) std::cerr << n << '\n';
  std::cout << "wrote " << written.size() << " files to " << c.output_dir << ": " << result.scores.table.size()
            << " researchers ranked in " << result.comparisons.sds.size() << " sds\n";
  return 0;
}

int cmd_baseline(const RunConfig& c, const std::string& out) {
  const auto pubs = load_publications(c.publications);
  const auto table = baselines_for(c, pubs);
  write_table(tables::baselines(table), out, c.format);
  std::cout << "wrote " << table.size() << " baseline strata to " << out << '\n';
  return 0;
}

int cmd_score(const RunConfig& c, const std::string& out) {
  const auto registry = load_researchers(c.researchers);
  const auto pubs = load_publications(c.publications);
  const auto baselines = baselines_for(c, pubs);
  const PublicationIndex index(pubs, c.analysis.window);
  const auto eligibility = evaluate_eligibility(registry, pubs, index, c.analysis);
  for (const auto& w : eligibility.coverage.warnings) std::cerr << "warning: " << w << '\n';
  ScoringConfig sc{c.analysis.padding, c.analysis.baseline, c.analysis.weights, c.analysis.threads};
  const auto scores = score_all(registry, index, eligibility.rankable(registry), baselines, sc);
  if (!scores.failures.empty()) {
    std::string msg = std::to_string(scores.failures.size()) + " researcher(s) could not be scored:";
    for (const auto& f : scores.failures) msg += "\n  " + f;
    throw ValidationError(msg);
  }
  write_table(tables::scores(scores.table), out, c.format);
  const auto& s = eligibility.sets;
  std::cout << "registry " << registry.size() << ": tenure-excluded " << s.excluded_tenure.size() << ", unpublished "
            << s.excluded_unpublished.size() << ", uncited " << s.excluded_uncited.size() << ", ranked "
            << s.ranked.size() << " (" << scores.table.size() << " in covered sds)\n";
  return 0;
}

int cmd_rank(const RunConfig& c, const std::string& scores_path, const std::string& out) {
  auto in = open_input(scores_path);
  const auto scores = read_scores(in);
  const auto rankings = rank_all(scores, c.analysis.quartiles, c.analysis.threads);
  write_table(tables::ranked(rankings), out, c.format);
  std::cout << "ranked " << scores.size() << " researchers in " << rankings.size() << " sds\n";
  return 0;
}

int cmd_compare(const RunConfig& c, const std::string& ranked_path) {
  const auto registry = load_researchers(c.researchers);
  auto in = open_input(ranked_path);
  RankingSet rankings;
  for (auto& [key, list] : read_ranked(in)) rankings[key.first][key.second] = std::move(list);
  const auto cmp = compare_all(rankings, registry.sds_to_uda(), c.analysis.uda_mode, c.analysis.threads);
  const auto notices = comparison_notices(cmp);
  const auto written = report::write_all(comparison_tables(cmp), c.output_dir, c.format, notices);
  for (const auto& n : notices) std::cerr << n << '\n';
  std::cout << "wrote " << written.size() << " files to " << c.output_dir << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Research-productivity rankings by h-index, g-index and FSS, and their divergence"};
  app.require_subcommand(1);

  std::string researchers, publications;
  auto* ingest = app.add_subcommand("ingest", "validate researcher and publication files");
  ingest->add_option("--researchers", researchers, "researchers.csv")->required();
  ingest->add_option("--publications", publications, "publications.jsonl")->required();

  std::string synth_config, preset, synth_out;
  std::optional<std::uint64_t> seed;
  bool dump_config = false;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic corpus");
  synth_cmd->add_option("--config", synth_config, "JSON generator configuration");
  synth_cmd->add_option("--preset", preset, "built-in configuration: paper_like");
  synth_cmd->add_option("--seed", seed, "override the configured seed");
  synth_cmd->add_option("--out", synth_out, "output directory for researchers.csv and publications.jsonl");
  synth_cmd->add_flag("--dump-config", dump_config, "print the resolved generator configuration and exit");

  Overlay run_ov, base_ov, score_ov, rank_ov, cmp_ov;
  auto corpus_options = [](CLI::App* cmd, Overlay& ov, bool with_researchers) {
    if (with_researchers) add_text(cmd, ov, "--researchers", "researchers", "researchers.csv");
    add_text(cmd, ov, "--publications", "publications", "publications.jsonl");
    add_text(cmd, ov, "--reference", "reference", "reference publications for baselines (default: the corpus)");
    add_text(cmd, ov, "--baselines", "baselines", "import a baseline table instead of computing one");
  };

  auto* run = app.add_subcommand("run", "full pipeline: filter, baseline, score, rank, compare");
  corpus_options(run, run_ov, true);
  add_text(run, run_ov, "--out", "output_dir", "report directory (default reports)");
  add_analysis_options(run, run_ov);

  std::string stage_out;
  auto* baseline = app.add_subcommand("baseline", "compute the (year, category) baseline table");
  corpus_options(baseline, base_ov, false);
  baseline->add_option("--out", stage_out, "output file")->required();
  add_analysis_options(baseline, base_ov);

  auto* score = app.add_subcommand("score", "apply eligibility filters and score researchers");
  corpus_options(score, score_ov, true);
  score->add_option("--out", stage_out, "output file")->required();
  add_analysis_options(score, score_ov);

  std::string scores_in;
  auto* rank = app.add_subcommand("rank", "rank a score table within each sds");
  rank->add_option("--scores", scores_in, "score table (csv)")->required();
  rank->add_option("--out", stage_out, "output file")->required();
  add_analysis_options(rank, rank_ov);

  std::string ranked_in;
  auto* compare = app.add_subcommand("compare", "compare rankings: correlations, quartile shifts, top sets");
  compare->add_option("--ranked", ranked_in, "ranked lists (csv)")->required();
  add_text(compare, cmp_ov, "--researchers", "researchers", "researchers.csv (sds to uda mapping)");
  add_text(compare, cmp_ov, "--out", "output_dir", "report directory (default reports)");
  add_analysis_options(compare, cmp_ov);

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::Success& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      app.exit(e);
      return kExitConfig;
    }
    if (*ingest) return cmd_ingest(researchers, publications);
    if (*synth_cmd) return cmd_synth(synth_config, preset, seed, synth_out, dump_config);
    if (*run) return explain(run_ov) ? 0 : cmd_run(run_ov.resolve());
    if (*baseline) return explain(base_ov) ? 0 : cmd_baseline(base_ov.resolve(), stage_out);
    if (*score) return explain(score_ov) ? 0 : cmd_score(score_ov.resolve(), stage_out);
    if (*rank) return explain(rank_ov) ? 0 : cmd_rank(rank_ov.resolve(), scores_in, stage_out);
    if (*compare) return explain(cmp_ov) ? 0 : cmd_compare(cmp_ov.resolve(), ranked_in);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
