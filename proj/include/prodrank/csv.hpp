#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "prodrank/error.hpp"

namespace prodrank::csv {

/// Splits one RFC 4180 line. Quoted fields may contain commas and doubled
/// quotes; embedded newlines are not supported.
inline std::vector<std::string> split_line(std::string_view line, std::size_t row) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      if (!cur.empty() || was_quoted) throw ParseError(row, "stray quote");
      quoted = true;
      was_quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
      was_quoted = false;
    } else {
      if (was_quoted) throw ParseError(row, "text after closing quote");
      cur.push_back(ch);
    }
  }
  if (quoted) throw ParseError(row, "unterminated quote");
  fields.push_back(std::move(cur));
  return fields;
}

inline std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

/// Reads a headered CSV stream. Lines starting with '#' and blank lines are
/// skipped; row numbers still count them so diagnostics match the file.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  /// Reads the header and checks every required column is present.
  void read_header(const std::vector<std::string>& required) {
    std::vector<std::string> fields;
    if (!next(fields)) throw ParseError(row_ == 0 ? 1 : row_, "missing header row");
    header_ = fields;
    for (const auto& name : required) {
      if (!column(name)) throw ParseError(row_, "header lacks column '" + name + "'");
    }
  }

  bool next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++row_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (row_ == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
      if (line.empty() || line.front() == '#') continue;
      fields = split_line(line, row_);
      if (!header_.empty() && fields.size() != header_.size()) {
        throw ParseError(row_, "expected " + std::to_string(header_.size()) + " fields, got " +
                                   std::to_string(fields.size()));
      }
      return true;
    }
    return false;
  }

  std::optional<std::size_t> column(std::string_view name) const {
    for (std::size_t i = 0; i < header_.size(); ++i) {
      if (header_[i] == name) return i;
    }
    return std::nullopt;
  }

  std::size_t row() const noexcept { return row_; }

 private:
  std::istream& in_;
  std::vector<std::string> header_;
  std::size_t row_ = 0;
};

template <typename Int>
Int parse_int(std::string_view text, std::size_t row, std::string_view what) {
  Int value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ParseError(row, std::string(what) + ": not an integer: '" + std::string(text) + "'");
  }
  return value;
}

inline double parse_double(std::string_view text, std::size_t row, std::string_view what) {
  double value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ParseError(row, std::string(what) + ": not a number: '" + std::string(text) + "'");
  }
  return value;
}

/// Shortest representation that round-trips through parse_double.
inline std::string format_exact(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

inline std::string format_fixed(double value, int decimals) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, decimals);
  return std::string(buf, ptr);
}

inline void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

}  // namespace prodrank::csv
