#pragma once

// Tabular output shared by all subcommands: a metadata block plus rows of
// string cells. CSV files carry the metadata as leading "# key: value" lines;
// JSON files use {"metadata": {...}, "records": [...]}.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace cvhbac::cli {

struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_meta(std::string key, std::string value);
  const std::string* meta(const std::string& key) const;
  int column(const std::string& name) const;  // -1 if absent
};

enum class Format { csv, json };

// Shortest round-trip decimal form; "inf", "-inf", "nan" for non-finite values.
std::string format_number(double x);
std::string format_number(long x);
std::string format_number(int x);

void write_table(std::ostream& out, const Table& table, Format format);
std::string render_table(const Table& table, Format format);

// Inverse of write_table. Throws std::runtime_error on malformed input.
Table parse_csv(const std::string& text);
Table parse_json(const std::string& text);
Table parse_table(const std::string& text, Format format);

// RFC-4180 field quoting.
std::string csv_escape(const std::string& field);

// 64-bit FNV-1a, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& data);

}  // namespace cvhbac::cli
