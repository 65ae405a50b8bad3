#pragma once

#include <string>
#include <vector>

#include "hhgen/error.hpp"
#include "hhgen/util/fs.hpp"

namespace hhgen::csv {

using Row = std::vector<std::string>;

/// RFC 4180 style parser: quoted fields, doubled quotes, CRLF tolerated.
inline std::vector<Row> parse(const std::string& text) {
  std::vector<Row> rows;
  Row row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"': quoted = true; any = true; break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        any = true;
        break;
      case '\r': break;
      case '\n':
        if (any || !field.empty()) {
          row.push_back(std::move(field));
          rows.push_back(std::move(row));
        }
        row.clear();
        field.clear();
        any = false;
        break;
      default: field.push_back(c); any = true;
    }
  }
  if (quoted) fail(ErrorCode::io, "unterminated quoted CSV field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += '"';
  return out;
}

inline std::string write(const std::vector<Row>& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out.push_back(',');
      out += escape(row[i]);
    }
    out.push_back('\n');
  }
  return out;
}

inline std::string read_file(const std::string& path) { return read_text_file(path); }

inline void write_file(const std::string& path, const std::string& content) { write_text_file(path, content); }

/// Header-keyed access: maps column names to indices and errors on
/// missing columns.
class Table {
 public:
  explicit Table(std::vector<Row> rows) {
    if (rows.empty()) fail(ErrorCode::io, "CSV has no header row");
    header_ = std::move(rows.front());
    for (auto& h : header_) h = trim_copy(h);
    rows.erase(rows.begin());
    rows_ = std::move(rows);
  }

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header_.size(); ++i)
      if (header_[i] == name) return i;
    fail(ErrorCode::io, "CSV missing column '" + name + "'");
  }

  bool has_column(const std::string& name) const {
    for (const auto& h : header_)
      if (h == name) return true;
    return false;
  }

  const std::vector<Row>& rows() const { return rows_; }

  const std::string& at(const Row& row, std::size_t col) const {
    if (col >= row.size()) fail(ErrorCode::io, "CSV row too short");
    return row[col];
  }

 private:
  static std::string trim_copy(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
  }

  Row header_;
  std::vector<Row> rows_;
};

}  // namespace hhgen::csv
