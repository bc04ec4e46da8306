#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prodrank/baseline.hpp"
#include "prodrank/corpus.hpp"
#include "prodrank/error.hpp"
#include "prodrank/parallel.hpp"

namespace prodrank {

/// Largest h such that at least h of the counts are >= h.
inline std::int64_t h_index(std::span<const std::int64_t> counts) {
  std::vector<std::int64_t> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::int64_t h = 0;
  while (h < static_cast<std::int64_t>(sorted.size()) && sorted[h] >= h + 1) ++h;
  return h;
}

enum class GPadding {
  pad_zeros,  // profile extended with uncited items, so g may exceed n
  cap_at_n,
};

inline std::string_view to_string(GPadding p) { return p == GPadding::pad_zeros ? "pad_zeros" : "cap_at_n"; }

/// Floor of the square root, exact for every non-negative 64-bit value.
inline std::int64_t isqrt(std::int64_t v) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(v)));
  while (r > 0 && r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

/// Largest g such that the g most cited items hold at least g^2 citations.
inline std::int64_t g_index(std::span<const std::int64_t> counts, GPadding padding = GPadding::pad_zeros) {
  std::vector<std::int64_t> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  // prefix(g) - g^2 is concave in g and zero at g = 0, so the feasible g form
  // a prefix of 0, 1, 2, ...
  const auto n = static_cast<std::int64_t>(sorted.size());
  std::int64_t cumulative = 0;
  std::int64_t g = 0;
  while (g < n && cumulative + sorted[g] >= (g + 1) * (g + 1)) {
    cumulative += sorted[g];
    ++g;
  }
  if (g < n || padding == GPadding::cap_at_n) return g;
  // All n real items qualify; padding with zero-cited items keeps the total fixed.
  return std::max(n, isqrt(cumulative));
}

enum class WeightMode { fractional, life_science_positional };

/// Whether positional weighting applies according to the researcher's UDA or
/// the publication's subject categories.
enum class LifeScienceBasis { researcher_uda, publication_category };

/// UDA codes follow the Italian area numbering (05 biology, 06 medicine,
/// 07 agricultural and veterinary sciences).
inline std::set<std::string> default_life_science_udas() { return {"05", "06", "07"}; }

struct AuthorWeightScheme {
  WeightMode mode = WeightMode::life_science_positional;
  LifeScienceBasis basis = LifeScienceBasis::researcher_uda;
  std::set<std::string> life_science_udas = default_life_science_udas();
  std::set<std::string> life_science_categories;
};

/// Which weighting rule produced a byline's weights.
enum class PositionalCase {
  fractional,         // 1/s (fractional mode, or s <= 2)
  intramural,         // first and last author share a university
  extramural,         // first two and last two authors from four universities
  fallback,           // positional mode, but neither pattern matched
};

struct BylineWeights {
  std::vector<double> weights;  // one per byline slot
  PositionalCase rule = PositionalCase::fractional;
};

/// Share of byline slot `i` (0-based) of `s` under `rule`, as an exact
/// ratio of small integers evaluated in extended precision.
inline long double slot_share(PositionalCase rule, std::size_t s, std::size_t i) {
  const auto n = static_cast<long double>(s);
  switch (rule) {
    case PositionalCase::intramural:
      if (i == 0 || i + 1 == s) return 2.0L / 5.0L;
      return 1.0L / (5.0L * (n - 2.0L));
    case PositionalCase::extramural:
      if (i == 0 || i + 1 == s) return 3.0L / 10.0L;
      if (i == 1 || i + 2 == s) return 3.0L / 20.0L;
      return 1.0L / (10.0L * (n - 4.0L));
    default:
      return 1.0L / n;
  }
}

/// Credit shares over a byline. Positional shares: intramural 40/20/40 with
/// the 20% split over the middle authors; extramural 30/15/10/15/30 with the
/// 10% split over the middle. The extramural pattern needs a non-empty middle
/// (s >= 5) so that the shares sum to one; shorter bylines fall back to 1/s.
inline BylineWeights byline_weights(const PublicationRecord& pub, bool positional) {
  const std::size_t s = pub.byline.size();
  BylineWeights out;
  if (s == 0) return out;
  const auto& by = pub.byline;
  if (positional && s > 2) {
    if (by.front().university_id == by.back().university_id) {
      out.rule = PositionalCase::intramural;
    } else if (s >= 5 && std::set<std::string>{by[0].university_id, by[1].university_id, by[s - 2].university_id,
                                               by[s - 1].university_id}
                                .size() == 4) {
      out.rule = PositionalCase::extramural;
    } else {
      out.rule = PositionalCase::fallback;
    }
  }
  out.weights.reserve(s);
  for (std::size_t i = 0; i < s; ++i) out.weights.push_back(static_cast<double>(slot_share(out.rule, s, i)));
  return out;
}

/// Whether positional weights apply to this (publication, researcher) pair.
inline bool uses_positional(const PublicationRecord& pub, const AuthorWeightScheme& scheme,
                            std::string_view researcher_uda) {
  if (scheme.mode != WeightMode::life_science_positional) return false;
  if (scheme.basis == LifeScienceBasis::researcher_uda) {
    return scheme.life_science_udas.contains(std::string(researcher_uda));
  }
  return std::any_of(pub.subject_categories.begin(), pub.subject_categories.end(),
                     [&](const std::string& c) { return scheme.life_science_categories.contains(c); });
}

inline double author_weight(const PublicationRecord& pub, std::string_view researcher_id,
                            const AuthorWeightScheme& scheme, std::string_view researcher_uda) {
  const auto slot = pub.slot_of(researcher_id);
  if (!slot) {
    throw ValidationError("researcher '" + std::string(researcher_id) + "' is not in the byline of '" +
                          pub.publication_id + "'");
  }
  return byline_weights(pub, uses_positional(pub, scheme, researcher_uda)).weights[*slot];
}

struct ScoreTriple {
  std::int64_t h = 0;
  std::int64_t g = 0;
  double fss = 0.0;

  bool operator==(const ScoreTriple&) const = default;
};

struct FssTerm {
  std::size_t publication = 0;  // index into the publication set
  double normalized = 0.0;      // c / m
  double weight = 0.0;
  PositionalCase rule = PositionalCase::fractional;
  long double contribution = 0.0L;  // (c / m) x weight in extended precision
};

/// FSS values are kept on a fixed absolute grid. Sums of the same terms in a
/// different order, or of different terms with the same exact value, can
/// otherwise differ in the last bit and break ties that should hold.
inline constexpr long double kFssQuantum = 1e-12L;

inline double snap_fss(long double sum) {
  return static_cast<double>(std::roundl(sum / kFssQuantum) * kFssQuantum);
}

/// Per-publication terms of a researcher's FSS, in the given order.
inline std::vector<FssTerm> fss_terms(const ResearcherRecord& researcher, const PublicationSet& pubs,
                                      std::span<const std::size_t> mine, const BaselineTable& baselines,
                                      const BaselinePolicy& policy, const AuthorWeightScheme& scheme) {
  std::vector<FssTerm> terms;
  terms.reserve(mine.size());
  for (auto i : mine) {
    const auto& pub = pubs[i];
    const auto slot = pub.slot_of(researcher.researcher_id);
    if (!slot) {
      throw ValidationError("researcher '" + researcher.researcher_id + "' is not in the byline of '" +
                            pub.publication_id + "'");
    }
    FssTerm t;
    t.publication = i;
    // Zero-cited items contribute nothing and may lack a baseline.
    const auto w = byline_weights(pub, uses_positional(pub, scheme, researcher.uda));
    t.weight = w.weights[*slot];
    t.rule = w.rule;
    if (pub.citations > 0) {
      const double m = lookup_baseline(baselines, pub, policy);
      t.normalized = static_cast<double>(pub.citations) / m;
      t.contribution = static_cast<long double>(pub.citations) / static_cast<long double>(m) *
                       slot_share(w.rule, pub.byline.size(), *slot);
    }
    terms.push_back(t);
  }
  return terms;
}

/// Fractional scientific strength: sum of (c / m) x author weight.
inline double fss(const ResearcherRecord& researcher, const PublicationSet& pubs, std::span<const std::size_t> mine,
                  const BaselineTable& baselines, const BaselinePolicy& policy = {},
                  const AuthorWeightScheme& scheme = {}) {
  long double total = 0.0L;
  for (const auto& t : fss_terms(researcher, pubs, mine, baselines, policy, scheme)) total += t.contribution;
  return snap_fss(total);
}

struct ScoreEntry {
  std::string sds;
  std::string uda;
  ScoreTriple scores;
};

using ScoreTable = std::map<std::string, ScoreEntry>;  // researcher_id -> entry

struct ScoringConfig {
  GPadding padding = GPadding::pad_zeros;
  BaselinePolicy baseline;
  AuthorWeightScheme weights;
  unsigned threads = 1;
};

struct ScoreResult {
  ScoreTable table;
  std::vector<std::string> failures;             // one message per researcher that could not be scored
  std::set<std::string> positional_fallbacks;    // publications weighted 1/s in positional mode
};

/// Scores every researcher in `ranked`. Failures are collected per researcher
/// instead of aborting; the result is independent of `config.threads`.
inline ScoreResult score_all(const Registry& registry, const PublicationIndex& index,
                             const std::set<std::string>& ranked, const BaselineTable& baselines,
                             const ScoringConfig& config) {
  const std::vector<std::string> ids(ranked.begin(), ranked.end());
  struct Slot {
    std::optional<ScoreTriple> scores;
    std::string failure;
    std::vector<std::size_t> fallbacks;
  };
  std::vector<Slot> slots(ids.size());
  const auto& pubs = index.publications();

  auto work = [&](std::size_t k) {
    auto& slot = slots[k];
    try {
      const auto& researcher = registry.at(ids[k]);
      const auto& mine = index.of(researcher.researcher_id);
      std::vector<std::int64_t> counts;
      counts.reserve(mine.size());
      for (auto i : mine) counts.push_back(pubs[i].citations);
      ScoreTriple t;
      t.h = h_index(counts);
      t.g = g_index(counts, config.padding);
      long double fss_sum = 0.0L;
      for (const auto& term : fss_terms(researcher, pubs, mine, baselines, config.baseline, config.weights)) {
        fss_sum += term.contribution;
        if (term.rule == PositionalCase::fallback) slot.fallbacks.push_back(term.publication);
      }
      t.fss = snap_fss(fss_sum);
      slot.scores = t;
    } catch (const Error& e) {
      slot.failure = ids[k] + ": " + e.what();
    }
  };

  parallel_for(ids.size(), config.threads, work);

  ScoreResult result;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (!slots[k].scores) {
      result.failures.push_back(std::move(slots[k].failure));
      continue;
    }
    const auto& r = registry.at(ids[k]);
    result.table.emplace(ids[k], ScoreEntry{r.sds, r.uda, *slots[k].scores});
    for (auto i : slots[k].fallbacks) result.positional_fallbacks.insert(pubs[i].publication_id);
  }
  return result;
}

/// Reads a score table; `uda` is filled from `sds_to_uda` when given.
inline ScoreTable read_scores(std::istream& in, const std::map<std::string, std::string>& sds_to_uda = {}) {
  csv::Reader reader(in);
  reader.read_header({"researcher_id", "sds", "h", "g", "fss"});
  const auto ci = *reader.column("researcher_id");
  const auto cs = *reader.column("sds");
  const auto ch = *reader.column("h");
  const auto cg = *reader.column("g");
  const auto cf = *reader.column("fss");
  ScoreTable table;
  std::vector<std::string> f;
  while (reader.next(f)) {
    ScoreEntry e;
    e.sds = f[cs];
    if (auto it = sds_to_uda.find(e.sds); it != sds_to_uda.end()) e.uda = it->second;
    e.scores.h = csv::parse_int<std::int64_t>(f[ch], reader.row(), "h");
    e.scores.g = csv::parse_int<std::int64_t>(f[cg], reader.row(), "g");
    e.scores.fss = csv::parse_double(f[cf], reader.row(), "fss");
    if (!table.emplace(f[ci], std::move(e)).second) {
      throw ParseError(reader.row(), "duplicate researcher_id '" + f[ci] + "'");
    }
  }
  return table;
}

}  // namespace prodrank
