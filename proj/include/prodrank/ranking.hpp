#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "prodrank/csv.hpp"
#include "prodrank/error.hpp"
#include "prodrank/indicators.hpp"

namespace prodrank {

enum class Indicator { h, g, fss };

inline constexpr Indicator kIndicators[] = {Indicator::h, Indicator::g, Indicator::fss};

inline std::string_view to_string(Indicator i) {
  switch (i) {
    case Indicator::h: return "h";
    case Indicator::g: return "g";
    case Indicator::fss: return "fss";
  }
  return "?";
}

inline std::optional<Indicator> parse_indicator(std::string_view text) {
  if (text == "h") return Indicator::h;
  if (text == "g") return Indicator::g;
  if (text == "fss") return Indicator::fss;
  return std::nullopt;
}

inline double score_of(const ScoreTriple& t, Indicator i) {
  switch (i) {
    case Indicator::h: return static_cast<double>(t.h);
    case Indicator::g: return static_cast<double>(t.g);
    case Indicator::fss: return t.fss;
  }
  return 0.0;
}

/// Mapping from a (possibly fractional) average rank to quartile 1..4.
enum class QuartileConvention {
  rank_offset,   // floor(4 (r - 1) / N) + 1; N = 94 splits 24/23/24/23
  midpoint,      // floor(4 (r - 0.5) / N) + 1
  nearest_rank,  // ceil(4 r / N)
};

inline std::string_view to_string(QuartileConvention c) {
  switch (c) {
    case QuartileConvention::rank_offset: return "rank_offset";
    case QuartileConvention::midpoint: return "midpoint";
    case QuartileConvention::nearest_rank: return "nearest_rank";
  }
  return "?";
}

inline int quartile_of(double avg_rank, std::size_t n, QuartileConvention convention = QuartileConvention::rank_offset) {
  const double size = static_cast<double>(n);
  double q = 0.0;
  switch (convention) {
    case QuartileConvention::rank_offset: q = std::floor(4.0 * (avg_rank - 1.0) / size) + 1.0; break;
    case QuartileConvention::midpoint: q = std::floor(4.0 * (avg_rank - 0.5) / size) + 1.0; break;
    case QuartileConvention::nearest_rank: q = std::ceil(4.0 * avg_rank / size); break;
  }
  return static_cast<int>(std::clamp(q, 1.0, 4.0));
}

struct RankedEntry {
  std::string researcher_id;
  double score = 0.0;
  double avg_rank = 0.0;
  double percentile = 0.0;
  int quartile = 0;

  bool operator==(const RankedEntry&) const = default;
};

/// One SDS ranked by one indicator, best first. Equal scores share the
/// average of the positions they span, and therefore percentile and quartile.
struct RankedList {
  std::string sds;
  Indicator indicator = Indicator::fss;
  std::vector<RankedEntry> entries;

  bool operator==(const RankedList&) const = default;
};

inline void assign_quartiles(RankedList& list, QuartileConvention convention = QuartileConvention::rank_offset) {
  const auto n = list.entries.size();
  for (auto& e : list.entries) e.quartile = quartile_of(e.avg_rank, n, convention);
}

/// Ranks (researcher_id, score) pairs by descending score with mid-ranks for
/// ties. Output order among tied scores is by researcher_id.
inline RankedList rank_field(std::string sds, Indicator indicator,
                             std::vector<std::pair<std::string, double>> scores,
                             QuartileConvention convention = QuartileConvention::rank_offset) {
  if (scores.empty()) throw ValidationError("cannot rank empty sds '" + sds + "'");
  std::sort(scores.begin(), scores.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  RankedList list{std::move(sds), indicator, {}};
  const auto n = scores.size();
  list.entries.reserve(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[j].second == scores[i].second) ++j;
    // positions i+1 .. j
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    const double pct = 100.0 * (static_cast<double>(n) - avg + 0.5) / static_cast<double>(n);
    for (std::size_t k = i; k < j; ++k) list.entries.push_back({std::move(scores[k].first), scores[k].second, avg, pct, 0});
    i = j;
  }
  assign_quartiles(list, convention);
  return list;
}

/// Ranks the researchers of one sds in a score table.
inline RankedList rank_field(const ScoreTable& table, const std::string& sds, Indicator indicator,
                             QuartileConvention convention = QuartileConvention::rank_offset) {
  std::vector<std::pair<std::string, double>> scores;
  for (const auto& [id, e] : table) {
    if (e.sds == sds) scores.emplace_back(id, score_of(e.scores, indicator));
  }
  return rank_field(sds, indicator, std::move(scores), convention);
}

/// First-quartile researchers.
inline std::set<std::string> top_set(const RankedList& list) {
  std::set<std::string> out;
  for (const auto& e : list.entries) {
    if (e.quartile == 1) out.insert(e.researcher_id);
  }
  return out;
}

inline std::map<std::string, int> quartile_map(const RankedList& list) {
  std::map<std::string, int> out;
  for (const auto& e : list.entries) out.emplace(e.researcher_id, e.quartile);
  return out;
}

/// Reads ranked lists back, keyed by (sds, indicator), preserving row order.
inline std::map<std::pair<std::string, Indicator>, RankedList> read_ranked(std::istream& in) {
  csv::Reader reader(in);
  reader.read_header({"sds", "indicator", "researcher_id", "score", "avg_rank", "percentile", "quartile"});
  const auto cs = *reader.column("sds");
  const auto ci = *reader.column("indicator");
  const auto cr = *reader.column("researcher_id");
  const auto cv = *reader.column("score");
  const auto ca = *reader.column("avg_rank");
  const auto cp = *reader.column("percentile");
  const auto cq = *reader.column("quartile");
  std::map<std::pair<std::string, Indicator>, RankedList> out;
  std::vector<std::string> f;
  while (reader.next(f)) {
    const auto row = reader.row();
    auto ind = parse_indicator(f[ci]);
    if (!ind) throw ParseError(row, "unknown indicator '" + f[ci] + "'");
    auto& list = out[{f[cs], *ind}];
    list.sds = f[cs];
    list.indicator = *ind;
    RankedEntry e;
    e.researcher_id = f[cr];
    e.score = csv::parse_double(f[cv], row, "score");
    e.avg_rank = csv::parse_double(f[ca], row, "avg_rank");
    e.percentile = csv::parse_double(f[cp], row, "percentile");
    e.quartile = csv::parse_int<int>(f[cq], row, "quartile");
    if (e.quartile < 1 || e.quartile > 4) throw ParseError(row, "quartile out of range");
    list.entries.push_back(std::move(e));
  }
  return out;
}

}  // namespace prodrank
