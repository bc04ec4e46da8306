#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "prodrank/error.hpp"
#include "prodrank/pipeline.hpp"
#include "prodrank/report.hpp"

namespace prodrank {

/// Everything `run` needs: input paths, analysis policies, output location.
struct RunConfig {
  std::string researchers;
  std::string publications;
  std::string reference;   // optional baseline reference corpus
  std::string baselines;   // optional imported baseline table
  std::string output_dir = "reports";
  report::Format format = report::Format::csv;
  AnalysisConfig analysis;
};

namespace enums {

template <typename E>
using Names = std::vector<std::pair<std::string_view, E>>;

template <typename E>
E parse(std::string_view key, std::string_view text, const Names<E>& names) {
  std::string allowed;
  for (const auto& [name, value] : names) {
    if (name == text) return value;
    allowed += (allowed.empty() ? "" : ", ") + std::string(name);
  }
  throw ConfigError(std::string(key) + ": unknown value '" + std::string(text) + "' (expected one of " + allowed + ")");
}

template <typename E>
std::string name(E value, const Names<E>& names) {
  for (const auto& [n, v] : names) {
    if (v == value) return std::string(n);
  }
  return "?";
}

inline const Names<CoverageDenominator>& coverage() {
  static const Names<CoverageDenominator> n = {{"tenure_eligible", CoverageDenominator::tenure_eligible},
                                               {"all", CoverageDenominator::all}};
  return n;
}
inline const Names<CombinePolicy>& combine() {
  static const Names<CombinePolicy> n = {{"mean", CombinePolicy::mean},
                                         {"min", CombinePolicy::min},
                                         {"max", CombinePolicy::max},
                                         {"first", CombinePolicy::first}};
  return n;
}
inline const Names<MissingPolicy>& missing() {
  static const Names<MissingPolicy> n = {{"strict", MissingPolicy::strict}, {"fallback", MissingPolicy::fallback}};
  return n;
}
inline const Names<GPadding>& padding() {
  static const Names<GPadding> n = {{"pad_zeros", GPadding::pad_zeros}, {"cap_at_n", GPadding::cap_at_n}};
  return n;
}
inline const Names<WeightMode>& weight_mode() {
  static const Names<WeightMode> n = {{"life_science_positional", WeightMode::life_science_positional},
                                      {"fractional", WeightMode::fractional}};
  return n;
}
inline const Names<LifeScienceBasis>& basis() {
  static const Names<LifeScienceBasis> n = {{"researcher_uda", LifeScienceBasis::researcher_uda},
                                            {"publication_category", LifeScienceBasis::publication_category}};
  return n;
}
inline const Names<QuartileConvention>& quartiles() {
  static const Names<QuartileConvention> n = {{"rank_offset", QuartileConvention::rank_offset},
                                              {"midpoint", QuartileConvention::midpoint},
                                              {"nearest_rank", QuartileConvention::nearest_rank}};
  return n;
}
inline const Names<UdaCorrelationMode>& uda_mode() {
  static const Names<UdaCorrelationMode> n = {{"pooled_percentile", UdaCorrelationMode::pooled_percentile},
                                              {"weighted_mean", UdaCorrelationMode::weighted_mean}};
  return n;
}
inline const Names<report::Format>& format() {
  static const Names<report::Format> n = {{"csv", report::Format::csv}, {"json", report::Format::json}};
  return n;
}

}  // namespace enums

inline nlohmann::ordered_json to_json(const RunConfig& c) {
  const auto& a = c.analysis;
  nlohmann::ordered_json j;
  j["researchers"] = c.researchers;
  j["publications"] = c.publications;
  j["reference"] = c.reference;
  j["baselines"] = c.baselines;
  j["output_dir"] = c.output_dir;
  j["format"] = enums::name(c.format, enums::format());
  j["window"] = {{"pub_year_from", a.window.pub_year_from},
                 {"pub_year_to", a.window.pub_year_to},
                 {"census_date", a.window.census_date}};
  j["coverage_threshold"] = a.coverage_threshold;
  j["coverage_denominator"] = enums::name(a.coverage_denominator, enums::coverage());
  j["baseline_combine"] = enums::name(a.baseline.combine, enums::combine());
  j["baseline_missing"] = enums::name(a.baseline.missing, enums::missing());
  j["g_padding"] = enums::name(a.padding, enums::padding());
  j["weight_mode"] = enums::name(a.weights.mode, enums::weight_mode());
  j["life_science_basis"] = enums::name(a.weights.basis, enums::basis());
  j["life_science_udas"] = a.weights.life_science_udas;
  j["life_science_categories"] = a.weights.life_science_categories;
  j["quartile_convention"] = enums::name(a.quartiles, enums::quartiles());
  j["uda_mode"] = enums::name(a.uda_mode, enums::uda_mode());
  j["threads"] = a.threads;
  return j;
}

namespace detail {

template <typename T>
void config_value(const nlohmann::json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string(key) + ": wrong type");
  }
}

template <typename E>
void config_enum(const nlohmann::json& j, const char* key, E& out, const enums::Names<E>& names) {
  std::string text;
  if (!j.contains(key)) return;
  config_value(j, key, text);
  out = enums::parse(key, text, names);
}

}  // namespace detail

/// Overlays a JSON config onto `c`. Unknown keys are configuration errors.
inline void apply_json(RunConfig& c, const nlohmann::json& j) {
  static const std::set<std::string> keys = {
      "researchers",       "publications",     "reference",         "baselines",          "output_dir",
      "format",            "window",           "coverage_threshold", "coverage_denominator", "baseline_combine",
      "baseline_missing",  "g_padding",        "weight_mode",        "life_science_basis", "life_science_udas",
      "life_science_categories", "quartile_convention", "uda_mode", "threads"};
  if (!j.is_object()) throw ConfigError("config: expected an object");
  for (const auto& [k, v] : j.items()) {
    if (!keys.contains(k)) throw ConfigError("config: unknown key '" + k + "'");
  }
  auto& a = c.analysis;
  detail::config_value(j, "researchers", c.researchers);
  detail::config_value(j, "publications", c.publications);
  detail::config_value(j, "reference", c.reference);
  detail::config_value(j, "baselines", c.baselines);
  detail::config_value(j, "output_dir", c.output_dir);
  detail::config_enum(j, "format", c.format, enums::format());
  if (auto it = j.find("window"); it != j.end()) {
    if (!it->is_object()) throw ConfigError("window: expected an object");
    detail::config_value(*it, "pub_year_from", a.window.pub_year_from);
    detail::config_value(*it, "pub_year_to", a.window.pub_year_to);
    detail::config_value(*it, "census_date", a.window.census_date);
  }
  detail::config_value(j, "coverage_threshold", a.coverage_threshold);
  detail::config_enum(j, "coverage_denominator", a.coverage_denominator, enums::coverage());
  detail::config_enum(j, "baseline_combine", a.baseline.combine, enums::combine());
  detail::config_enum(j, "baseline_missing", a.baseline.missing, enums::missing());
  detail::config_enum(j, "g_padding", a.padding, enums::padding());
  detail::config_enum(j, "weight_mode", a.weights.mode, enums::weight_mode());
  detail::config_enum(j, "life_science_basis", a.weights.basis, enums::basis());
  detail::config_value(j, "life_science_udas", a.weights.life_science_udas);
  detail::config_value(j, "life_science_categories", a.weights.life_science_categories);
  detail::config_enum(j, "quartile_convention", a.quartiles, enums::quartiles());
  detail::config_enum(j, "uda_mode", a.uda_mode, enums::uda_mode());
  if (j.contains("threads")) {
    int threads = 0;
    detail::config_value(j, "threads", threads);
    if (threads < 1) throw ConfigError("threads: must be >= 1");
    a.threads = static_cast<unsigned>(threads);
  }
}

inline void validate(const RunConfig& c) {
  c.analysis.window.validate();
  const double t = c.analysis.coverage_threshold;
  if (!(t > 0.0 && t <= 1.0)) throw ConfigError("coverage_threshold: must lie in (0, 1]");
}

}  // namespace prodrank
