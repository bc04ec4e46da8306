#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prodrank/error.hpp"
#include "prodrank/ranking.hpp"

namespace prodrank {

/// Ascending mid-ranks: the smallest value gets rank 1, ties share the mean
/// of the positions they occupy.
inline std::vector<double> midranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
    i = j;
  }
  return ranks;
}

/// Pearson product-moment correlation. Empty when n < 2 or either vector has
/// zero variance.
inline std::optional<double> pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ValidationError("correlation inputs differ in length: " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
  }
  const auto n = a.size();
  if (n < 2) return std::nullopt;
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= static_cast<double>(n);
  mean_b /= static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return std::nullopt;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

/// Spearman's rho from two rank vectors in the same researcher order:
/// Pearson on the (mid-)ranks, exact under ties.
inline std::optional<double> spearman(std::span<const double> ranks_a, std::span<const double> ranks_b) {
  return pearson(ranks_a, ranks_b);
}

/// Spearman's rho from raw scores.
inline std::optional<double> spearman_scores(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) return pearson(x, y);  // throws the length error
  const auto rx = midranks(x);
  const auto ry = midranks(y);
  return pearson(rx, ry);
}

struct ShiftStats {
  std::size_t n = 0;
  std::size_t shifted_ge1 = 0;
  std::size_t shifted_ge2 = 0;
  std::size_t shifted_eq3 = 0;
  std::int64_t total_shift = 0;

  double frac_ge1() const noexcept { return n ? static_cast<double>(shifted_ge1) / static_cast<double>(n) : 0.0; }
  double frac_ge2() const noexcept { return n ? static_cast<double>(shifted_ge2) / static_cast<double>(n) : 0.0; }
  double mean_shift() const noexcept { return n ? static_cast<double>(total_shift) / static_cast<double>(n) : 0.0; }

  ShiftStats& operator+=(const ShiftStats& o) noexcept {
    n += o.n;
    shifted_ge1 += o.shifted_ge1;
    shifted_ge2 += o.shifted_ge2;
    shifted_eq3 += o.shifted_eq3;
    total_shift += o.total_shift;
    return *this;
  }

  bool operator==(const ShiftStats&) const = default;
};

/// Per-researcher |qa - qb| summarized. Both maps must have the same keys.
inline ShiftStats quartile_shifts(const std::map<std::string, int>& qa, const std::map<std::string, int>& qb) {
  if (qa.size() != qb.size()) throw ValidationError("quartile maps cover different researchers");
  ShiftStats s;
  auto ib = qb.begin();
  for (const auto& [id, q] : qa) {
    if (ib->first != id) throw ValidationError("quartile maps cover different researchers (at '" + id + "')");
    const int d = std::abs(q - ib->second);
    ++s.n;
    s.total_shift += d;
    if (d >= 1) ++s.shifted_ge1;
    if (d >= 2) ++s.shifted_ge2;
    if (d == 3) ++s.shifted_eq3;
    ++ib;
  }
  return s;
}

/// |A ∩ B| / |A|; empty when A is empty.
inline std::optional<double> intersect_tops(const std::set<std::string>& top_a, const std::set<std::string>& top_b) {
  if (top_a.empty()) return std::nullopt;
  std::size_t common = 0;
  for (const auto& id : top_a) common += top_b.contains(id);
  return static_cast<double>(common) / static_cast<double>(top_a.size());
}

struct IndicatorPair {
  Indicator a;
  Indicator b;

  bool operator==(const IndicatorPair&) const = default;
};

inline std::string pair_label(IndicatorPair p) {
  return std::string(to_string(p.a)) + "_vs_" + std::string(to_string(p.b));
}

inline constexpr IndicatorPair kComparedPairs[] = {
    {Indicator::h, Indicator::fss}, {Indicator::g, Indicator::fss}, {Indicator::h, Indicator::g}};

struct PairComparison {
  IndicatorPair pair;
  std::optional<double> rho;
  ShiftStats shifts;
};

/// Overlap of the first-quartile set of `from` with that of `to`.
struct TopOverlap {
  Indicator from;
  Indicator to;
  std::size_t size_from = 0;
  std::size_t intersection = 0;
  std::size_t to_last_quartile = 0;  // top under `from`, quartile 4 under `to`

  std::optional<double> fraction() const {
    if (size_from == 0) return std::nullopt;
    return static_cast<double>(intersection) / static_cast<double>(size_from);
  }

  TopOverlap& operator+=(const TopOverlap& o) noexcept {
    size_from += o.size_from;
    intersection += o.intersection;
    to_last_quartile += o.to_last_quartile;
    return *this;
  }
};

/// Everything compared within one SDS.
struct SdsComparison {
  std::string sds;
  std::string uda;
  std::size_t n = 0;
  std::vector<PairComparison> pairs;                            // kComparedPairs order
  std::vector<TopOverlap> overlaps;                             // all ordered indicator pairs
  std::map<Indicator, std::set<std::string>> tops;
  std::map<Indicator, std::vector<double>> percentiles;         // researcher-id order

  const PairComparison& pair(IndicatorPair p) const {
    for (const auto& c : pairs) {
      if (c.pair == p) return c;
    }
    throw ValidationError("pair " + pair_label(p) + " not compared");
  }
};

/// Compares the h, g and FSS rankings of one SDS. The three lists must rank
/// the same researchers.
inline SdsComparison compare_field(const std::map<Indicator, RankedList>& lists, std::string uda = {}) {
  for (auto ind : kIndicators) {
    if (!lists.contains(ind)) throw ValidationError(std::string("missing ranking for indicator ") + std::string(to_string(ind)));
  }
  SdsComparison out;
  out.sds = lists.at(Indicator::fss).sds;
  out.uda = std::move(uda);
  out.n = lists.at(Indicator::fss).entries.size();

  std::map<Indicator, std::map<std::string, int>> quartiles;
  std::map<Indicator, std::vector<double>> ranks;
  for (auto ind : kIndicators) {
    const auto& list = lists.at(ind);
    if (list.entries.size() != out.n) {
      throw ValidationError("sds " + out.sds + ": rankings differ in size");
    }
    std::map<std::string, const RankedEntry*> by_id;
    for (const auto& e : list.entries) by_id.emplace(e.researcher_id, &e);
    for (const auto& [id, e] : by_id) {
      ranks[ind].push_back(e->avg_rank);
      out.percentiles[ind].push_back(e->percentile);
    }
    quartiles[ind] = quartile_map(list);
    out.tops[ind] = top_set(list);
  }
  for (auto p : kComparedPairs) {
    out.pairs.push_back({p, spearman(ranks[p.a], ranks[p.b]), quartile_shifts(quartiles[p.a], quartiles[p.b])});
  }
  for (auto from : kIndicators) {
    for (auto to : kIndicators) {
      TopOverlap o{from, to};
      o.size_from = out.tops[from].size();
      for (const auto& id : out.tops[from]) {
        o.intersection += out.tops[to].contains(id);
        auto q = quartiles[to].find(id);
        if (q == quartiles[to].end()) throw ValidationError("sds " + out.sds + ": rankings cover different researchers");
        o.to_last_quartile += q->second == 4;
      }
      out.overlaps.push_back(o);
    }
  }
  return out;
}

enum class UdaCorrelationMode {
  pooled_percentile,  // Pearson over the union, within-SDS percentiles as ranks
  weighted_mean,      // n-weighted mean of the defined per-SDS rhos
};

inline std::string_view to_string(UdaCorrelationMode m) {
  return m == UdaCorrelationMode::pooled_percentile ? "pooled_percentile" : "weighted_mean";
}

struct UdaReport {
  std::string uda;
  UdaCorrelationMode mode = UdaCorrelationMode::pooled_percentile;
  std::size_t n = 0;
  std::vector<std::string> sds;  // constituents, in input order
  std::vector<PairComparison> pairs;
  std::vector<TopOverlap> overlaps;
};

/// Pools already-computed SDS comparisons into one report. Counts are summed;
/// nothing is re-ranked.
inline UdaReport pool_comparisons(std::string uda, std::span<const SdsComparison* const> parts,
                                  UdaCorrelationMode mode = UdaCorrelationMode::pooled_percentile) {
  UdaReport r;
  r.uda = std::move(uda);
  r.mode = mode;
  for (const auto* c : parts) {
    r.n += c->n;
    r.sds.push_back(c->sds);
  }
  for (auto p : kComparedPairs) {
    PairComparison pooled{p, std::nullopt, {}};
    std::vector<double> pa, pb;
    double weighted = 0.0, weight = 0.0;
    for (const auto* c : parts) {
      const auto& pc = c->pair(p);
      pooled.shifts += pc.shifts;
      const auto& xa = c->percentiles.at(p.a);
      const auto& xb = c->percentiles.at(p.b);
      pa.insert(pa.end(), xa.begin(), xa.end());
      pb.insert(pb.end(), xb.begin(), xb.end());
      if (pc.rho) {
        weighted += static_cast<double>(c->n) * *pc.rho;
        weight += static_cast<double>(c->n);
      }
    }
    if (mode == UdaCorrelationMode::pooled_percentile) {
      pooled.rho = pearson(pa, pb);
    } else if (weight > 0.0) {
      pooled.rho = weighted / weight;
    }
    r.pairs.push_back(pooled);
  }
  for (auto from : kIndicators) {
    for (auto to : kIndicators) {
      TopOverlap o{from, to};
      for (const auto* c : parts) {
        for (const auto& x : c->overlaps) {
          if (x.from == from && x.to == to) o += x;
        }
      }
      r.overlaps.push_back(o);
    }
  }
  return r;
}

/// Groups SDS comparisons by UDA (ascending UDA code). Every SDS must be mapped.
inline std::vector<UdaReport> aggregate_uda(std::span<const SdsComparison> comparisons,
                                            const std::map<std::string, std::string>& sds_to_uda,
                                            UdaCorrelationMode mode = UdaCorrelationMode::pooled_percentile) {
  std::map<std::string, std::vector<const SdsComparison*>> groups;
  for (const auto& c : comparisons) {
    auto it = sds_to_uda.find(c.sds);
    if (it == sds_to_uda.end()) throw ValidationError("sds '" + c.sds + "' has no uda mapping");
    groups[it->second].push_back(&c);
  }
  std::vector<UdaReport> out;
  for (auto& [uda, parts] : groups) out.push_back(pool_comparisons(uda, parts, mode));
  return out;
}

/// Bin counts over ascending `edges`: [e0, e1), [e1, e2), ..., [e_{k-1}, e_k].
inline std::vector<std::size_t> histogram(std::span<const double> values, std::span<const double> edges) {
  if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end()) ||
      std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw ConfigError("histogram edges must be strictly increasing with at least two entries");
  }
  std::vector<std::size_t> counts(edges.size() - 1, 0);
  for (double v : values) {
    if (!(v >= edges.front() && v <= edges.back())) {
      throw ValidationError("value " + csv::format_exact(v) + " outside histogram range");
    }
    auto it = std::upper_bound(edges.begin(), edges.end(), v);
    auto bin = static_cast<std::size_t>(it - edges.begin()) - 1;
    if (bin == counts.size()) --bin;  // last bin is closed
    ++counts[bin];
  }
  return counts;
}

}  // namespace prodrank
