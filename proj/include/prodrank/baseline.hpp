#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "prodrank/corpus.hpp"
#include "prodrank/csv.hpp"
#include "prodrank/error.hpp"

namespace prodrank {

struct StratumKey {
  int year = 0;
  std::string category;

  auto operator<=>(const StratumKey&) const = default;
};

/// Median of a non-empty sample; even-length samples average the two
/// central values, so the result may be half-integral.
inline double median(std::vector<std::int64_t> values) {
  if (values.empty()) throw std::invalid_argument("median of empty sample");
  const auto mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const auto upper = values[mid];
  if (values.size() % 2 == 1) return static_cast<double>(upper);
  const auto lower = *std::max_element(values.begin(), values.begin() + mid);
  return (static_cast<double>(lower) + static_cast<double>(upper)) / 2.0;
}

/// Field-normalization denominators: median citations of cited-only
/// publications per (year, subject category).
///
/// Tables built by compute_baselines also carry the coarser fallback medians
/// (per category over all window years, per year over all categories).
/// Tables read from CSV carry strata only.
class BaselineTable {
 public:
  void set(StratumKey key, double median) {
    if (!(median > 0.0)) {
      throw ValidationError("baseline for (" + std::to_string(key.year) + ", " + key.category +
                            ") must be positive");
    }
    entries_[std::move(key)] = median;
  }

  std::optional<double> find(int year, const std::string& category) const {
    auto it = entries_.find(StratumKey{year, category});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<double> category_fallback(const std::string& category) const {
    auto it = by_category_.find(category);
    if (it == by_category_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<double> year_fallback(int year) const {
    auto it = by_year_.find(year);
    if (it == by_year_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::map<StratumKey, double>& entries() const noexcept { return entries_; }

 private:
  friend BaselineTable compute_baselines(std::span<const PublicationRecord>, const AnalysisWindow&);

  std::map<StratumKey, double> entries_;
  std::map<std::string, double> by_category_;
  std::map<int, double> by_year_;
};

/// Medians over in-window publications with at least one citation. A
/// publication listed under several categories counts in each.
inline BaselineTable compute_baselines(std::span<const PublicationRecord> publications,
                                       const AnalysisWindow& window) {
  std::map<StratumKey, std::vector<std::int64_t>> strata;
  std::map<std::string, std::vector<std::int64_t>> categories;
  std::map<int, std::vector<std::int64_t>> years;
  for (const auto& pub : publications) {
    if (!window.contains(pub.year) || pub.citations < 1) continue;
    for (const auto& cat : pub.subject_categories) {
      strata[StratumKey{pub.year, cat}].push_back(pub.citations);
      categories[cat].push_back(pub.citations);
    }
    years[pub.year].push_back(pub.citations);
  }
  BaselineTable table;
  for (auto& [key, values] : strata) table.entries_.emplace(key, median(std::move(values)));
  for (auto& [cat, values] : categories) table.by_category_.emplace(cat, median(std::move(values)));
  for (auto& [year, values] : years) table.by_year_.emplace(year, median(std::move(values)));
  return table;
}

enum class CombinePolicy { mean, min, max, first };
enum class MissingPolicy { strict, fallback };

struct BaselinePolicy {
  CombinePolicy combine = CombinePolicy::mean;
  MissingPolicy missing = MissingPolicy::strict;
};

/// The normalization denominator m for one publication.
inline double lookup_baseline(const BaselineTable& table, const PublicationRecord& pub,
                              const BaselinePolicy& policy = {}) {
  if (pub.subject_categories.empty()) {
    throw ValidationError("publication '" + pub.publication_id + "' has no subject categories");
  }
  auto resolve = [&](const std::string& cat) -> double {
    if (auto m = table.find(pub.year, cat)) return *m;
    if (policy.missing == MissingPolicy::fallback) {
      if (auto m = table.category_fallback(cat)) return *m;
      if (auto m = table.year_fallback(pub.year)) return *m;
    }
    throw MissingBaselineError(pub.year, cat);
  };
  if (policy.combine == CombinePolicy::first || pub.subject_categories.size() == 1) {
    return resolve(pub.subject_categories.front());
  }
  std::vector<double> ms;
  ms.reserve(pub.subject_categories.size());
  for (const auto& cat : pub.subject_categories) ms.push_back(resolve(cat));
  switch (policy.combine) {
    case CombinePolicy::min: return *std::min_element(ms.begin(), ms.end());
    case CombinePolicy::max: return *std::max_element(ms.begin(), ms.end());
    default: break;
  }
  double sum = 0.0;
  for (double m : ms) sum += m;
  return sum / static_cast<double>(ms.size());
}

inline BaselineTable read_baselines(std::istream& in) {
  csv::Reader reader(in);
  reader.read_header({"year", "subject_category", "median"});
  const auto cy = *reader.column("year");
  const auto cc = *reader.column("subject_category");
  const auto cm = *reader.column("median");
  BaselineTable table;
  std::vector<std::string> f;
  while (reader.next(f)) {
    const int year = csv::parse_int<int>(f[cy], reader.row(), "year");
    const double m = csv::parse_double(f[cm], reader.row(), "median");
    if (!(m > 0.0)) throw ParseError(reader.row(), "median must be positive");
    table.set(StratumKey{year, f[cc]}, m);
  }
  return table;
}

inline std::string_view to_string(CombinePolicy p) {
  switch (p) {
    case CombinePolicy::mean: return "mean";
    case CombinePolicy::min: return "min";
    case CombinePolicy::max: return "max";
    case CombinePolicy::first: return "first";
  }
  return "?";
}

inline std::string_view to_string(MissingPolicy p) {
  return p == MissingPolicy::strict ? "strict" : "fallback";
}

}  // namespace prodrank
