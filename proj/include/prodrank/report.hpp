#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "prodrank/csv.hpp"
#include "prodrank/error.hpp"

namespace prodrank::report {

/// A report cell: text, a pre-formatted number, or a missing value.
struct Cell {
  enum class Kind { text, number, missing };
  Kind kind = Kind::text;
  std::string value;

  static Cell text(std::string s) { return {Kind::text, std::move(s)}; }
  static Cell integer(std::int64_t v) { return {Kind::number, std::to_string(v)}; }
  static Cell exact(double v) { return {Kind::number, csv::format_exact(v)}; }
  static Cell fixed(double v, int decimals) { return {Kind::number, csv::format_fixed(v, decimals)}; }
  static Cell missing() { return {Kind::missing, "undefined"}; }
  static Cell optional_fixed(const std::optional<double>& v, int decimals) {
    return v ? fixed(*v, decimals) : missing();
  }
};

struct Table {
  std::string name;                   // file stem
  std::vector<std::string> comments;  // column provenance
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

enum class Format { csv, json };

inline std::string_view to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

inline void write_csv(std::ostream& out, const Table& t) {
  for (const auto& c : t.comments) out << "# " << c << '\n';
  csv::write_row(out, t.columns);
  std::vector<std::string> fields;
  for (const auto& row : t.rows) {
    fields.clear();
    for (const auto& cell : row) fields.push_back(cell.value);
    csv::write_row(out, fields);
  }
}

inline void write_json(std::ostream& out, const Table& t) {
  nlohmann::ordered_json doc;
  doc["table"] = t.name;
  doc["provenance"] = t.comments;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) {
      const auto& cell = row[i];
      switch (cell.kind) {
        case Cell::Kind::text: obj[t.columns[i]] = cell.value; break;
        case Cell::Kind::number: obj[t.columns[i]] = nlohmann::ordered_json::parse(cell.value); break;
        case Cell::Kind::missing: obj[t.columns[i]] = nullptr; break;
      }
    }
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(1) << '\n';
}

inline std::string file_name(const Table& t, Format f) { return t.name + (f == Format::csv ? ".csv" : ".json"); }

/// Writes all tables into `dir`. On failure, files written by this call are
/// removed before the error propagates.
inline std::vector<std::filesystem::path> write_all(const std::vector<Table>& tables, const std::filesystem::path& dir,
                                                    Format format, const std::vector<std::string>& notices = {}) {
  std::vector<std::filesystem::path> written;
  try {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    auto open = [&](const std::filesystem::path& path) {
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot write " + path.string());
      written.push_back(path);
      return out;
    };
    for (const auto& t : tables) {
      const auto path = dir / file_name(t, format);
      auto out = open(path);
      format == Format::csv ? write_csv(out, t) : write_json(out, t);
      if (!out) throw IoError("write failed for " + path.string());
    }
    auto out = open(dir / "notices.txt");
    for (const auto& n : notices) out << n << '\n';
    if (!out) throw IoError("write failed for notices.txt");
  } catch (...) {
    for (const auto& p : written) {
      std::error_code ignored;
      std::filesystem::remove(p, ignored);
    }
    throw;
  }
  return written;
}

}  // namespace prodrank::report
