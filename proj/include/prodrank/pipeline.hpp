#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "prodrank/baseline.hpp"
#include "prodrank/compare.hpp"
#include "prodrank/corpus.hpp"
#include "prodrank/indicators.hpp"
#include "prodrank/parallel.hpp"
#include "prodrank/ranking.hpp"
#include "prodrank/report.hpp"

namespace prodrank {

/// Analysis policies shared by the stage-wise commands and `run`.
struct AnalysisConfig {
  AnalysisWindow window;
  double coverage_threshold = 0.5;
  CoverageDenominator coverage_denominator = CoverageDenominator::tenure_eligible;
  BaselinePolicy baseline;
  GPadding padding = GPadding::pad_zeros;
  AuthorWeightScheme weights;
  QuartileConvention quartiles = QuartileConvention::rank_offset;
  UdaCorrelationMode uda_mode = UdaCorrelationMode::pooled_percentile;
  unsigned threads = 1;
};

struct Eligibility {
  TenureSplit tenure;
  EligibilitySet sets;
  CoverageResult coverage;

  /// Ranked researchers whose sds passed the coverage filter.
  std::set<std::string> rankable(const Registry& registry) const {
    std::set<std::string> out;
    for (const auto& id : sets.ranked) {
      if (coverage.covered.contains(registry.at(id).sds)) out.insert(id);
    }
    return out;
  }
};

inline Eligibility evaluate_eligibility(const Registry& registry, const PublicationSet& pubs,
                                        const PublicationIndex& index, const AnalysisConfig& config) {
  Eligibility e;
  e.tenure = filter_tenure(registry, config.window);
  e.sets = classify_exclusions(e.tenure, index);
  e.coverage = filter_covered_fields(registry, pubs, config.window, config.coverage_threshold,
                                     config.coverage_denominator);
  return e;
}

/// sds -> indicator -> ranking
using RankingSet = std::map<std::string, std::map<Indicator, RankedList>>;

inline RankingSet rank_all(const ScoreTable& scores, QuartileConvention convention, unsigned threads = 1) {
  std::map<std::string, std::vector<std::pair<std::string, const ScoreTriple*>>> by_sds;
  for (const auto& [id, e] : scores) by_sds[e.sds].emplace_back(id, &e.scores);
  std::vector<std::string> fields;
  for (const auto& [sds, members] : by_sds) fields.push_back(sds);
  std::vector<std::map<Indicator, RankedList>> lists(fields.size());
  parallel_for(fields.size(), threads, [&](std::size_t i) {
    const auto& members = by_sds.at(fields[i]);
    for (auto ind : kIndicators) {
      std::vector<std::pair<std::string, double>> values;
      values.reserve(members.size());
      for (const auto& [id, t] : members) values.emplace_back(id, score_of(*t, ind));
      lists[i].emplace(ind, rank_field(fields[i], ind, std::move(values), convention));
    }
  });
  RankingSet out;
  for (std::size_t i = 0; i < fields.size(); ++i) out.emplace(fields[i], std::move(lists[i]));
  return out;
}

struct ComparisonSet {
  std::vector<SdsComparison> sds;
  std::vector<UdaReport> uda;
  std::optional<UdaReport> overall;  // absent when nothing was compared
};

inline ComparisonSet compare_all(const RankingSet& rankings, const std::map<std::string, std::string>& sds_to_uda,
                                 UdaCorrelationMode mode, unsigned threads = 1) {
  std::vector<const std::map<Indicator, RankedList>*> fields;
  std::vector<std::string> names;
  for (const auto& [sds, lists] : rankings) {
    if (!sds_to_uda.contains(sds)) throw ValidationError("sds '" + sds + "' has no uda mapping");
    names.push_back(sds);
    fields.push_back(&lists);
  }
  ComparisonSet out;
  out.sds.resize(fields.size());
  parallel_for(fields.size(), threads,
               [&](std::size_t i) { out.sds[i] = compare_field(*fields[i], sds_to_uda.at(names[i])); });
  out.uda = aggregate_uda(out.sds, sds_to_uda, mode);
  if (!out.sds.empty()) {
    std::vector<const SdsComparison*> all;
    for (const auto& c : out.sds) all.push_back(&c);
    out.overall = pool_comparisons("ALL", all, mode);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Report tables

namespace tables {

using report::Cell;
using report::Table;

inline Table eligibility(const Registry& registry, const Eligibility& e) {
  Table t{"eligibility",
          {"status: partition of the registry (tenure filter, then in-window publications, then citations)",
           "sds_covered: whether the researcher's sds passed the publishing-coverage filter"},
          {"researcher_id", "sds", "uda", "status", "sds_covered"},
          {}};
  for (const auto& r : registry) {
    std::string status = "ranked";
    if (e.sets.excluded_tenure.contains(r.researcher_id)) {
      status = "excluded_tenure";
    } else if (e.sets.excluded_unpublished.contains(r.researcher_id)) {
      status = "excluded_unpublished";
    } else if (e.sets.excluded_uncited.contains(r.researcher_id)) {
      status = "excluded_uncited";
    }
    t.add({Cell::text(r.researcher_id), Cell::text(r.sds), Cell::text(r.uda), Cell::text(status),
           Cell::text(e.coverage.covered.contains(r.sds) ? "yes" : "no")});
  }
  return t;
}

inline Table eligibility_summary(const Registry& registry, const Eligibility& e) {
  struct Counts {
    std::string uda;
    std::int64_t total = 0, tenure = 0, unpublished = 0, uncited = 0, ranked = 0;
  };
  std::map<std::string, Counts> by_sds;
  for (const auto& r : registry) {
    auto& c = by_sds[r.sds];
    c.uda = r.uda;
    ++c.total;
    c.tenure += e.sets.excluded_tenure.contains(r.researcher_id);
    c.unpublished += e.sets.excluded_unpublished.contains(r.researcher_id);
    c.uncited += e.sets.excluded_uncited.contains(r.researcher_id);
    c.ranked += e.sets.ranked.contains(r.researcher_id);
  }
  Table t{"eligibility_summary",
          {"counts partition registry = excluded_tenure + excluded_unpublished + excluded_uncited + ranked",
           "publishing_share: researchers with >= 1 in-window publication over the coverage denominator"},
          {"sds", "uda", "registry", "excluded_tenure", "excluded_unpublished", "excluded_uncited", "ranked",
           "publishing_share", "covered"},
          {}};
  for (const auto& [sds, c] : by_sds) {
    auto share = e.coverage.share.find(sds);
    t.add({Cell::text(sds), Cell::text(c.uda), Cell::integer(c.total), Cell::integer(c.tenure),
           Cell::integer(c.unpublished), Cell::integer(c.uncited), Cell::integer(c.ranked),
           share == e.coverage.share.end() ? Cell::missing() : Cell::fixed(share->second, 4),
           Cell::text(e.coverage.covered.contains(sds) ? "yes" : "no")});
  }
  return t;
}

inline Table baselines(const BaselineTable& table) {
  Table t{"baselines", {"median: median citations over cited-only publications of the (year, category) stratum"},
          {"year", "subject_category", "median"}, {}};
  for (const auto& [key, m] : table.entries()) {
    t.add({Cell::integer(key.year), Cell::text(key.category), Cell::exact(m)});
  }
  return t;
}

inline Table scores(const ScoreTable& table) {
  Table t{"scores",
          {"h, g: indexes over in-window citation counts",
           "fss: sum over publications of (citations / baseline median) x author weight"},
          {"researcher_id", "sds", "h", "g", "fss"},
          {}};
  for (const auto& [id, e] : table) {
    t.add({Cell::text(id), Cell::text(e.sds), Cell::integer(e.scores.h), Cell::integer(e.scores.g),
           Cell::exact(e.scores.fss)});
  }
  return t;
}

inline Table ranked(const RankingSet& rankings) {
  Table t{"ranked",
          {"avg_rank: mid-rank within sds by descending score (1 = best)",
           "percentile = 100 (N - avg_rank + 0.5) / N; quartile 1 = top"},
          {"sds", "indicator", "researcher_id", "score", "avg_rank", "percentile", "quartile"},
          {}};
  for (const auto& [sds, lists] : rankings) {
    for (auto ind : kIndicators) {
      const auto& list = lists.at(ind);
      for (const auto& e : list.entries) {
        t.add({Cell::text(sds), Cell::text(std::string(to_string(ind))), Cell::text(e.researcher_id),
               Cell::exact(e.score), Cell::exact(e.avg_rank), Cell::exact(e.percentile), Cell::integer(e.quartile)});
      }
    }
  }
  return t;
}

inline std::vector<Cell> shift_cells(const std::optional<double>& rho, const ShiftStats& s) {
  return {Cell::optional_fixed(rho, 4),
          Cell::integer(static_cast<std::int64_t>(s.n)),
          Cell::integer(static_cast<std::int64_t>(s.shifted_ge1)),
          Cell::fixed(100.0 * s.frac_ge1(), 2),
          Cell::integer(static_cast<std::int64_t>(s.shifted_ge2)),
          Cell::fixed(100.0 * s.frac_ge2(), 2),
          Cell::integer(static_cast<std::int64_t>(s.shifted_eq3)),
          Cell::fixed(s.mean_shift(), 2),
          Cell::integer(s.total_shift)};
}

inline Table comparison_sds(const ComparisonSet& cmp) {
  Table t{"comparison_sds",
          {"rho: Spearman (Pearson on mid-ranks) between the two rankings; undefined when a ranking is constant",
           "shifted_ge1/ge2, eq3: researchers whose quartile differs by >= 1, >= 2, exactly 3; pct_* in percent of n",
           "total_shift: sum of |quartile difference|; mean_shift = total_shift / n"},
          {"sds", "pair", "rho", "n", "shifted_ge1", "pct_ge1", "shifted_ge2", "pct_ge2", "eq3", "mean_shift",
           "total_shift"},
          {}};
  for (const auto& c : cmp.sds) {
    for (const auto& p : c.pairs) {
      std::vector<Cell> row = {Cell::text(c.sds), Cell::text(pair_label(p.pair))};
      auto rest = shift_cells(p.rho, p.shifts);
      row.insert(row.end(), rest.begin(), rest.end());
      t.add(std::move(row));
    }
  }
  return t;
}

inline Table comparison_uda(const ComparisonSet& cmp) {
  Table t{"comparison_uda",
          {"pooled over constituent sds: counts summed, no re-ranking; uda ALL pools every compared sds",
           "rho_mode pooled_percentile: Pearson on within-sds percentiles; weighted_mean: n-weighted mean of sds rhos"},
          {"uda", "pair", "rho_mode", "n_sds", "rho", "n", "shifted_ge1", "pct_ge1", "shifted_ge2", "pct_ge2", "eq3",
           "mean_shift", "total_shift"},
          {}};
  auto emit = [&](const UdaReport& r) {
    for (const auto& p : r.pairs) {
      std::vector<Cell> row = {Cell::text(r.uda), Cell::text(pair_label(p.pair)),
                               Cell::text(std::string(to_string(r.mode))),
                               Cell::integer(static_cast<std::int64_t>(r.sds.size()))};
      auto rest = shift_cells(p.rho, p.shifts);
      row.insert(row.end(), rest.begin(), rest.end());
      t.add(std::move(row));
    }
  };
  for (const auto& r : cmp.uda) emit(r);
  if (cmp.overall) emit(*cmp.overall);
  return t;
}

inline Table top_sets(const ComparisonSet& cmp) {
  Table t{"top_sets", {"researchers in quartile 1 of their sds for the indicator"}, {"sds", "indicator", "researcher_id"}, {}};
  for (const auto& c : cmp.sds) {
    for (auto ind : kIndicators) {
      for (const auto& id : c.tops.at(ind)) {
        t.add({Cell::text(c.sds), Cell::text(std::string(to_string(ind))), Cell::text(id)});
      }
    }
  }
  return t;
}

inline std::vector<Cell> overlap_cells(const TopOverlap& o) {
  const auto frac = o.fraction();
  return {Cell::text(std::string(to_string(o.from))),
          Cell::text(std::string(to_string(o.to))),
          Cell::integer(static_cast<std::int64_t>(o.size_from)),
          Cell::integer(static_cast<std::int64_t>(o.intersection)),
          Cell::optional_fixed(frac, 4),
          frac ? Cell::fixed(1.0 - *frac, 4) : Cell::missing(),
          Cell::integer(static_cast<std::int64_t>(o.to_last_quartile))};
}

inline Table top_overlap_sds(const ComparisonSet& cmp) {
  Table t{"top_overlap_sds",
          {"fraction = |top(from) ∩ top(to)| / |top(from)|; lost_fraction = 1 - fraction; undefined when top(from) is empty",
           "to_last_quartile: researchers top under `from` and in quartile 4 under `to`"},
          {"sds", "from", "to", "size_from", "intersection", "fraction", "lost_fraction", "to_last_quartile"},
          {}};
  for (const auto& c : cmp.sds) {
    for (const auto& o : c.overlaps) {
      if (o.from == o.to) continue;
      std::vector<Cell> row = {Cell::text(c.sds)};
      auto rest = overlap_cells(o);
      row.insert(row.end(), rest.begin(), rest.end());
      t.add(std::move(row));
    }
  }
  return t;
}

inline Table top_overlap_uda(const ComparisonSet& cmp) {
  Table t{"top_overlap_uda",
          {"counts summed over constituent sds; uda ALL pools every compared sds",
           "fraction = sum |top(from) ∩ top(to)| / sum |top(from)|; lost_fraction = 1 - fraction"},
          {"uda", "from", "to", "size_from", "intersection", "fraction", "lost_fraction", "to_last_quartile"},
          {}};
  auto emit = [&](const UdaReport& r) {
    for (const auto& o : r.overlaps) {
      if (o.from == o.to) continue;
      std::vector<Cell> row = {Cell::text(r.uda)};
      auto rest = overlap_cells(o);
      row.insert(row.end(), rest.begin(), rest.end());
      t.add(std::move(row));
    }
  };
  for (const auto& r : cmp.uda) emit(r);
  if (cmp.overall) emit(*cmp.overall);
  return t;
}

inline const std::vector<double>& rho_edges() {
  static const std::vector<double> edges = {-1.0, 0.0, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  return edges;
}

inline const std::vector<double>& shift_edges() {
  static const std::vector<double> edges = {0.0, 20.0, 40.0, 60.0, 80.0, 100.0};
  return edges;
}

inline Table histogram_table(std::string name, std::string what, std::span<const double> values,
                             const std::vector<double>& edges, std::size_t undefined = 0) {
  Table t{std::move(name), {std::move(what), "bins are [low, high) except the last, which is closed"},
          {"bin_low", "bin_high", "count"}, {}};
  if (undefined) t.comments.push_back(std::to_string(undefined) + " sds with undefined rho not binned");
  const auto counts = histogram(values, edges);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    t.add({Cell::exact(edges[i]), Cell::exact(edges[i + 1]), Cell::integer(static_cast<std::int64_t>(counts[i]))});
  }
  return t;
}

inline std::vector<Table> histograms(const ComparisonSet& cmp) {
  std::vector<Table> out;
  for (auto p : {kComparedPairs[0], kComparedPairs[1]}) {
    std::vector<double> rhos, shifts;
    std::size_t undefined = 0;
    for (const auto& c : cmp.sds) {
      const auto& pc = c.pair(p);
      if (pc.rho) {
        rhos.push_back(*pc.rho);
      } else {
        ++undefined;
      }
      shifts.push_back(100.0 * pc.shifts.frac_ge1());
    }
    out.push_back(histogram_table("hist_rho_" + pair_label(p), "number of sds per Spearman rho class for " + pair_label(p),
                                  rhos, rho_edges(), undefined));
    out.push_back(histogram_table("hist_shift_" + pair_label(p),
                                  "number of sds per percent-of-researchers-with-a-quartile-shift class for " +
                                      pair_label(p),
                                  shifts, shift_edges()));
  }
  return out;
}

/// Linear-interpolation quantile of a sorted sample (R type 7).
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

/// Distribution of h and g per group: quartiles, max, mean, sample variance.
inline Table indicator_summary(std::string name, std::string group_column, const ScoreTable& scores, bool by_uda) {
  Table t{std::move(name),
          {"q1, median, q3: linearly interpolated quantiles of the indicator over ranked researchers in the group",
           "variance: sample variance (n - 1 denominator)"},
          {std::move(group_column), "indicator", "n_sds", "n", "q1", "median", "q3", "max", "mean", "variance"},
          {}};
  struct Group {
    std::set<std::string> sds;
    std::map<Indicator, std::vector<double>> values;
  };
  std::map<std::string, Group> groups;
  for (const auto& [id, e] : scores) {
    auto& g = groups[by_uda ? e.uda : e.sds];
    g.sds.insert(e.sds);
    for (auto ind : {Indicator::h, Indicator::g}) g.values[ind].push_back(score_of(e.scores, ind));
  }
  for (auto& [key, g] : groups) {
    for (auto ind : {Indicator::h, Indicator::g}) {
      auto& v = g.values[ind];
      std::sort(v.begin(), v.end());
      double mean = 0.0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      double ss = 0.0;
      for (double x : v) ss += (x - mean) * (x - mean);
      const auto var = v.size() > 1 ? std::optional<double>(ss / static_cast<double>(v.size() - 1)) : std::nullopt;
      t.add({Cell::text(key), Cell::text(std::string(to_string(ind))),
             Cell::integer(static_cast<std::int64_t>(g.sds.size())), Cell::integer(static_cast<std::int64_t>(v.size())),
             Cell::fixed(quantile_sorted(v, 0.25), 2), Cell::fixed(quantile_sorted(v, 0.5), 2),
             Cell::fixed(quantile_sorted(v, 0.75), 2), Cell::fixed(v.back(), 0), Cell::fixed(mean, 2),
             Cell::optional_fixed(var, 2)});
    }
  }
  return t;
}

inline Table positional_fallbacks(const std::set<std::string>& ids) {
  Table t{"positional_fallbacks",
          {"life-science publications whose byline matched neither positional pattern; weighted 1/s"},
          {"publication_id"},
          {}};
  for (const auto& id : ids) t.add({Cell::text(id)});
  return t;
}

}  // namespace tables

/// Comparison-stage tables: everything derivable from rankings alone.
inline std::vector<report::Table> comparison_tables(const ComparisonSet& cmp) {
  std::vector<report::Table> out = {tables::comparison_sds(cmp), tables::comparison_uda(cmp), tables::top_sets(cmp),
                                    tables::top_overlap_sds(cmp), tables::top_overlap_uda(cmp)};
  for (auto& h : tables::histograms(cmp)) out.push_back(std::move(h));
  return out;
}

inline std::vector<std::string> comparison_notices(const ComparisonSet& cmp) {
  std::vector<std::string> notes;
  if (cmp.sds.empty()) notes.push_back("notice: no sds passed the eligibility and coverage filters; comparison reports are empty");
  for (const auto& c : cmp.sds) {
    if (c.tops.at(Indicator::fss).empty() || c.tops.at(Indicator::h).empty() || c.tops.at(Indicator::g).empty()) {
      notes.push_back("notice: sds " + c.sds + " has an empty top set (tied scores); overlap fractions undefined");
    }
    for (const auto& p : c.pairs) {
      if (!p.rho) notes.push_back("notice: sds " + c.sds + " rho undefined for " + pair_label(p.pair));
    }
  }
  return notes;
}

/// Everything `run` computes, in pipeline order.
struct RunResult {
  Eligibility eligibility;
  BaselineTable baselines;
  ScoreResult scores;
  RankingSet rankings;
  ComparisonSet comparisons;
  std::vector<std::string> notices;
};

/// filter -> baseline -> score -> rank -> compare. Throws on scoring failures
/// after collecting all of them.
inline RunResult run_analysis(const Registry& registry, const PublicationSet& pubs, const AnalysisConfig& config,
                              const PublicationSet* reference = nullptr,
                              const BaselineTable* imported_baselines = nullptr) {
  config.window.validate();
  RunResult r;
  const PublicationIndex index(pubs, config.window);
  r.eligibility = evaluate_eligibility(registry, pubs, index, config);
  for (const auto& w : r.eligibility.coverage.warnings) r.notices.push_back("warning: " + w);
  if (imported_baselines) {
    r.baselines = *imported_baselines;
  } else {
    r.baselines = compute_baselines(reference ? *reference : pubs, config.window);
  }
  ScoringConfig sc{config.padding, config.baseline, config.weights, config.threads};
  r.scores = score_all(registry, index, r.eligibility.rankable(registry), r.baselines, sc);
  if (!r.scores.failures.empty()) {
    std::string msg = std::to_string(r.scores.failures.size()) + " researcher(s) could not be scored:";
    for (const auto& f : r.scores.failures) msg += "\n  " + f;
    throw ValidationError(msg);
  }
  if (!r.scores.positional_fallbacks.empty()) {
    r.notices.push_back("notice: " + std::to_string(r.scores.positional_fallbacks.size()) +
                        " life-science publication(s) weighted 1/s (no positional pattern); see positional_fallbacks");
  }
  r.rankings = rank_all(r.scores.table, config.quartiles, config.threads);
  r.comparisons = compare_all(r.rankings, registry.sds_to_uda(), config.uda_mode, config.threads);
  for (auto& n : comparison_notices(r.comparisons)) r.notices.push_back(std::move(n));
  return r;
}

inline std::vector<report::Table> run_tables(const Registry& registry, const RunResult& r) {
  std::vector<report::Table> out = {tables::eligibility(registry, r.eligibility),
                                    tables::eligibility_summary(registry, r.eligibility),
                                    tables::baselines(r.baselines),
                                    tables::scores(r.scores.table),
                                    tables::ranked(r.rankings),
                                    tables::positional_fallbacks(r.scores.positional_fallbacks),
                                    tables::indicator_summary("indicator_summary_uda", "uda", r.scores.table, true),
                                    tables::indicator_summary("indicator_summary_sds", "sds", r.scores.table, false)};
  for (auto& t : comparison_tables(r.comparisons)) out.push_back(std::move(t));
  return out;
}

}  // namespace prodrank
