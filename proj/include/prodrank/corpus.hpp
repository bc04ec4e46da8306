#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "prodrank/csv.hpp"
#include "prodrank/error.hpp"

namespace prodrank {

enum class Role { assistant, associate, full };
enum class DocType { article, review, proceedings };

inline std::string_view to_string(Role role) {
  switch (role) {
    case Role::assistant: return "assistant";
    case Role::associate: return "associate";
    case Role::full: return "full";
  }
  return "?";
}

inline std::string_view to_string(DocType type) {
  switch (type) {
    case DocType::article: return "article";
    case DocType::review: return "review";
    case DocType::proceedings: return "proceedings";
  }
  return "?";
}

inline std::optional<Role> parse_role(std::string_view text) {
  if (text == "assistant") return Role::assistant;
  if (text == "associate") return Role::associate;
  if (text == "full") return Role::full;
  return std::nullopt;
}

inline std::optional<DocType> parse_doc_type(std::string_view text) {
  if (text == "article") return DocType::article;
  if (text == "review") return DocType::review;
  if (text == "proceedings") return DocType::proceedings;
  return std::nullopt;
}

struct ResearcherRecord {
  std::string researcher_id;
  std::string sds;
  std::string uda;
  std::string university_id;
  Role role = Role::assistant;
  int active_from = 0;
  int active_to = 0;

  bool operator==(const ResearcherRecord&) const = default;
};

struct AuthorSlot {
  int position = 0;
  std::optional<std::string> researcher_id;  // absent for non-corpus co-authors
  std::string university_id;

  bool operator==(const AuthorSlot&) const = default;
};

/// A publication with its byline stored in position order (1..s).
struct PublicationRecord {
  std::string publication_id;
  int year = 0;
  DocType doc_type = DocType::article;
  std::vector<std::string> subject_categories;
  std::vector<AuthorSlot> byline;
  std::int64_t citations = 0;

  std::size_t byline_size() const noexcept { return byline.size(); }

  /// 0-based byline index of `researcher_id`, if present.
  std::optional<std::size_t> slot_of(std::string_view researcher_id) const {
    for (std::size_t i = 0; i < byline.size(); ++i) {
      if (byline[i].researcher_id && *byline[i].researcher_id == researcher_id) return i;
    }
    return std::nullopt;
  }

  bool operator==(const PublicationRecord&) const = default;
};

struct AnalysisWindow {
  int pub_year_from = 2001;
  int pub_year_to = 2005;
  std::string census_date = "2009-06-30";  // ISO yyyy-mm-dd

  bool contains(int year) const noexcept { return year >= pub_year_from && year <= pub_year_to; }

  void validate() const {
    if (pub_year_from > pub_year_to) {
      throw ConfigError("window: pub_year_from " + std::to_string(pub_year_from) +
                        " is after pub_year_to " + std::to_string(pub_year_to));
    }
    int year = 0, month = 0, day = 0;
    if (census_date.size() != 10 || census_date[4] != '-' || census_date[7] != '-' ||
        std::sscanf(census_date.c_str(), "%4d-%2d-%2d", &year, &month, &day) != 3 || month < 1 ||
        month > 12 || day < 1 || day > 31) {
      throw ConfigError("window: census_date must be yyyy-mm-dd, got '" + census_date + "'");
    }
    if (year <= pub_year_to) {
      throw ConfigError("window: census_date " + census_date + " must fall after " +
                        std::to_string(pub_year_to));
    }
  }
};

/// Researchers keyed by id, kept in ingestion order.
class Registry {
 public:
  void add(ResearcherRecord record) {
    if (record.active_from > record.active_to) {
      throw ValidationError("researcher '" + record.researcher_id + "': active_from " +
                            std::to_string(record.active_from) + " after active_to " +
                            std::to_string(record.active_to));
    }
    if (index_.contains(record.researcher_id)) {
      throw ValidationError("duplicate researcher_id '" + record.researcher_id + "'");
    }
    index_.emplace(record.researcher_id, records_.size());
    records_.push_back(std::move(record));
  }

  const ResearcherRecord* find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    return it == index_.end() ? nullptr : &records_[it->second];
  }

  const ResearcherRecord& at(std::string_view id) const {
    const auto* record = find(id);
    if (!record) throw ValidationError("unknown researcher_id '" + std::string(id) + "'");
    return *record;
  }

  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  auto begin() const noexcept { return records_.begin(); }
  auto end() const noexcept { return records_.end(); }
  const std::vector<ResearcherRecord>& records() const noexcept { return records_; }

  /// sds -> uda, as declared by the researchers of each sds.
  std::map<std::string, std::string> sds_to_uda() const {
    std::map<std::string, std::string> out;
    for (const auto& r : records_) out.emplace(r.sds, r.uda);
    return out;
  }

  bool operator==(const Registry& other) const { return records_ == other.records_; }

 private:
  std::vector<ResearcherRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
};

using PublicationSet = std::vector<PublicationRecord>;

struct Diagnostic {
  std::size_t row = 0;
  std::string message;
};

/// Records plus every problem found while reading them. Rows with problems
/// are dropped from `records`.
template <typename T>
struct Ingested {
  T records;
  std::vector<Diagnostic> diagnostics;

  bool ok() const noexcept { return diagnostics.empty(); }

  /// Throws the first diagnostic, if any.
  T& require_ok() & {
    if (!ok()) throw ValidationError(first_message());
    return records;
  }
  T require_ok() && {
    if (!ok()) throw ValidationError(first_message());
    return std::move(records);
  }

 private:
  std::string first_message() const {
    std::string msg = "row " + std::to_string(diagnostics.front().row) + ": " + diagnostics.front().message;
    if (diagnostics.size() > 1) msg += " (+" + std::to_string(diagnostics.size() - 1) + " more)";
    return msg;
  }
};

inline const std::vector<std::string>& researcher_columns() {
  static const std::vector<std::string> cols = {"researcher_id", "sds",       "uda",      "university_id",
                                                "role",          "active_from", "active_to"};
  return cols;
}

/// Reads `researchers.csv`. Every malformed or invalid row is reported; the
/// stream is read to the end regardless.
inline Ingested<Registry> ingest_researchers(std::istream& in) {
  Ingested<Registry> result;
  csv::Reader reader(in);
  try {
    reader.read_header(researcher_columns());
  } catch (const ParseError& e) {
    result.diagnostics.push_back({e.row(), e.detail()});
    return result;
  }
  std::vector<std::size_t> col;
  for (const auto& name : researcher_columns()) col.push_back(*reader.column(name));

  std::vector<std::string> f;
  while (true) {
    try {
      if (!reader.next(f)) break;
      const auto row = reader.row();
      ResearcherRecord r;
      r.researcher_id = f[col[0]];
      r.sds = f[col[1]];
      r.uda = f[col[2]];
      r.university_id = f[col[3]];
      if (r.researcher_id.empty()) throw ParseError(row, "empty researcher_id");
      if (r.sds.empty()) throw ParseError(row, "empty sds");
      if (r.uda.empty()) throw ParseError(row, "empty uda");
      auto role = parse_role(f[col[4]]);
      if (!role) throw ParseError(row, "unknown role '" + f[col[4]] + "'");
      r.role = *role;
      r.active_from = csv::parse_int<int>(f[col[5]], row, "active_from");
      r.active_to = csv::parse_int<int>(f[col[6]], row, "active_to");
      try {
        result.records.add(std::move(r));
      } catch (const ValidationError& e) {
        throw ParseError(row, e.what());
      }
    } catch (const ParseError& e) {
      result.diagnostics.push_back({e.row(), e.detail()});
    }
  }
  return result;
}

/// Validates a publication and sorts its byline by position.
inline void validate_publication(PublicationRecord& pub) {
  if (pub.publication_id.empty()) throw ValidationError("empty publication_id");
  const std::string who = "publication '" + pub.publication_id + "': ";
  if (pub.citations < 0) throw ValidationError(who + "negative citations");
  if (pub.subject_categories.empty()) throw ValidationError(who + "no subject categories");
  if (pub.byline.empty()) throw ValidationError(who + "empty byline");
  std::sort(pub.byline.begin(), pub.byline.end(),
            [](const AuthorSlot& a, const AuthorSlot& b) { return a.position < b.position; });
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < pub.byline.size(); ++i) {
    if (pub.byline[i].position != static_cast<int>(i) + 1) {
      throw ValidationError(who + "byline positions are not contiguous from 1");
    }
    if (pub.byline[i].researcher_id && !seen.insert(*pub.byline[i].researcher_id).second) {
      throw ValidationError(who + "researcher '" + *pub.byline[i].researcher_id +
                            "' appears twice in byline");
    }
  }
}

namespace detail {

template <typename T>
T json_field(const nlohmann::json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(std::string("missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace detail

inline PublicationRecord publication_from_json(const nlohmann::json& obj) {
  if (!obj.is_object()) throw ValidationError("record is not an object");
  PublicationRecord pub;
  pub.publication_id = detail::json_field<std::string>(obj, "publication_id");
  pub.year = detail::json_field<int>(obj, "year");
  const auto type_text = detail::json_field<std::string>(obj, "doc_type");
  auto type = parse_doc_type(type_text);
  if (!type) throw ValidationError("unknown doc_type '" + type_text + "'");
  pub.doc_type = *type;
  pub.subject_categories = detail::json_field<std::vector<std::string>>(obj, "subject_categories");
  pub.citations = detail::json_field<std::int64_t>(obj, "citations");
  auto byline_it = obj.find("byline");
  if (byline_it == obj.end() || !byline_it->is_array()) throw ValidationError("missing array 'byline'");
  for (const auto& slot_json : *byline_it) {
    if (!slot_json.is_object()) throw ValidationError("byline entry is not an object");
    AuthorSlot slot;
    slot.position = detail::json_field<int>(slot_json, "position");
    slot.university_id = detail::json_field<std::string>(slot_json, "university_id");
    if (auto rid = slot_json.find("researcher_id"); rid != slot_json.end() && !rid->is_null()) {
      if (!rid->is_string()) throw ValidationError("field 'researcher_id' has the wrong type");
      slot.researcher_id = rid->get<std::string>();
    }
    pub.byline.push_back(std::move(slot));
  }
  validate_publication(pub);
  return pub;
}

inline nlohmann::ordered_json publication_to_json(const PublicationRecord& pub) {
  nlohmann::ordered_json obj;
  obj["publication_id"] = pub.publication_id;
  obj["year"] = pub.year;
  obj["doc_type"] = std::string(to_string(pub.doc_type));
  obj["subject_categories"] = pub.subject_categories;
  obj["citations"] = pub.citations;
  auto byline = nlohmann::ordered_json::array();
  for (const auto& slot : pub.byline) {
    nlohmann::ordered_json s;
    s["position"] = slot.position;
    if (slot.researcher_id) s["researcher_id"] = *slot.researcher_id;
    s["university_id"] = slot.university_id;
    byline.push_back(std::move(s));
  }
  obj["byline"] = std::move(byline);
  return obj;
}

/// Reads `publications.jsonl`, one JSON object per line.
inline Ingested<PublicationSet> ingest_publications(std::istream& in) {
  Ingested<PublicationSet> result;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      nlohmann::json obj;
      try {
        obj = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("invalid JSON: ") + e.what());
      }
      auto pub = publication_from_json(obj);
      if (!ids.insert(pub.publication_id).second) {
        throw ValidationError("duplicate publication_id '" + pub.publication_id + "'");
      }
      result.records.push_back(std::move(pub));
    } catch (const ValidationError& e) {
      result.diagnostics.push_back({row, e.what()});
    }
  }
  return result;
}

inline void write_researchers(std::ostream& out, const Registry& registry) {
  csv::write_row(out, researcher_columns());
  for (const auto& r : registry) {
    csv::write_row(out, {r.researcher_id, r.sds, r.uda, r.university_id, std::string(to_string(r.role)),
                         std::to_string(r.active_from), std::to_string(r.active_to)});
  }
}

inline void write_publications(std::ostream& out, const PublicationSet& pubs) {
  for (const auto& pub : pubs) out << publication_to_json(pub).dump() << '\n';
}

/// In-window publications of each corpus researcher, as indices into the
/// publication set, in publication-set order.
class PublicationIndex {
 public:
  PublicationIndex(const PublicationSet& pubs, const AnalysisWindow& window) : pubs_(&pubs) {
    for (std::size_t i = 0; i < pubs.size(); ++i) {
      if (!window.contains(pubs[i].year)) continue;
      for (const auto& slot : pubs[i].byline) {
        if (slot.researcher_id) by_researcher_[*slot.researcher_id].push_back(i);
      }
    }
  }

  const std::vector<std::size_t>& of(const std::string& researcher_id) const {
    static const std::vector<std::size_t> none;
    auto it = by_researcher_.find(researcher_id);
    return it == by_researcher_.end() ? none : it->second;
  }

  const PublicationSet& publications() const noexcept { return *pubs_; }

 private:
  const PublicationSet* pubs_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_researcher_;
};

struct TenureSplit {
  std::vector<std::string> candidates;  // registry order
  std::set<std::string> excluded_tenure;
};

/// Keeps researchers in role for the whole window, endpoints inclusive.
inline TenureSplit filter_tenure(const Registry& registry, const AnalysisWindow& window) {
  TenureSplit split;
  for (const auto& r : registry) {
    if (r.active_from > window.pub_year_from || r.active_to < window.pub_year_to) {
      split.excluded_tenure.insert(r.researcher_id);
    } else {
      split.candidates.push_back(r.researcher_id);
    }
  }
  return split;
}

enum class CoverageDenominator { tenure_eligible, all };

struct CoverageResult {
  std::set<std::string> covered;
  std::map<std::string, double> share;  // sds -> publishing share, for every sds with a denominator
  std::vector<std::string> warnings;
};

/// Keeps every sds in which at least `threshold` of the researchers published
/// in the window.
inline CoverageResult filter_covered_fields(const Registry& registry, const PublicationSet& pubs,
                                            const AnalysisWindow& window, double threshold = 0.5,
                                            CoverageDenominator denominator = CoverageDenominator::tenure_eligible) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ConfigError("coverage threshold must lie in (0, 1], got " + csv::format_exact(threshold));
  }
  std::unordered_set<std::string> publishing;
  for (const auto& pub : pubs) {
    if (!window.contains(pub.year)) continue;
    for (const auto& slot : pub.byline) {
      if (slot.researcher_id) publishing.insert(*slot.researcher_id);
    }
  }
  const auto split = filter_tenure(registry, window);
  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;  // sds -> (publishing, total)
  for (const auto& r : registry) {
    auto& c = counts[r.sds];
    if (denominator == CoverageDenominator::tenure_eligible && split.excluded_tenure.contains(r.researcher_id)) {
      continue;
    }
    ++c.second;
    if (publishing.contains(r.researcher_id)) ++c.first;
  }
  CoverageResult result;
  for (const auto& [sds, c] : counts) {
    if (c.second == 0) {
      result.warnings.push_back("sds " + sds + " has no researchers in the coverage denominator; skipped");
      continue;
    }
    const double share = static_cast<double>(c.first) / static_cast<double>(c.second);
    result.share[sds] = share;
    if (static_cast<double>(c.first) >= threshold * static_cast<double>(c.second)) result.covered.insert(sds);
  }
  return result;
}

/// Four-way partition of the registry.
struct EligibilitySet {
  std::set<std::string> ranked;
  std::set<std::string> excluded_unpublished;
  std::set<std::string> excluded_uncited;
  std::set<std::string> excluded_tenure;

  std::size_t total() const noexcept {
    return ranked.size() + excluded_unpublished.size() + excluded_uncited.size() + excluded_tenure.size();
  }
};

/// Splits tenure candidates by publishing record: no in-window publication,
/// publications but zero citations, or ranked.
inline EligibilitySet classify_exclusions(const TenureSplit& split, const PublicationIndex& index) {
  EligibilitySet out;
  out.excluded_tenure = split.excluded_tenure;
  const auto& pubs = index.publications();
  for (const auto& id : split.candidates) {
    const auto& mine = index.of(id);
    if (mine.empty()) {
      out.excluded_unpublished.insert(id);
      continue;
    }
    std::int64_t total = 0;
    for (auto i : mine) total += pubs[i].citations;
    (total == 0 ? out.excluded_uncited : out.ranked).insert(id);
  }
  return out;
}

}  // namespace prodrank
