#include "table.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cvhbac::cli {

void Table::add_meta(std::string key, std::string value) {
  metadata.emplace_back(std::move(key), std::move(value));
}

const std::string* Table::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return &v;
  }
  return nullptr;
}

int Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return static_cast<int>(i);
  }
  return -1;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string format_number(long x) { return std::to_string(x); }
std::string format_number(int x) { return std::to_string(x); }

std::string csv_escape(const std::string& field) {
  const bool quote = field.find_first_of(",\"\r\n") != std::string::npos;
  if (!quote) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

bool parse_finite(const std::string& s, double& value) {
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(value);
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    out << csv_escape(row[i]);
  }
  out << "\r\n";
}

// Splits CSV text into records, honoring quoted fields with embedded newlines.
std::vector<std::vector<std::string>> split_csv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      field_started = false;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      record.push_back(std::move(field));
      field.clear();
      field_started = false;
      records.push_back(std::move(record));
      record.clear();
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted) throw std::runtime_error("csv: unterminated quoted field");
  if (field_started || !record.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace

void write_table(std::ostream& out, const Table& table, Format format) {
  if (format == Format::csv) {
    for (const auto& [k, v] : table.metadata) out << "# " << k << ": " << v << "\r\n";
    write_csv_row(out, table.columns);
    for (const auto& row : table.rows) write_csv_row(out, row);
    return;
  }
  nlohmann::ordered_json doc;
  doc["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : table.metadata) doc["metadata"][k] = v;
  doc["columns"] = table.columns;
  doc["records"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json rec = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      const std::string& cell = i < row.size() ? row[i] : std::string();
      double value = 0.0;
      if (parse_finite(cell, value)) {
        rec[table.columns[i]] = value;
      } else {
        rec[table.columns[i]] = cell;
      }
    }
    doc["records"].push_back(std::move(rec));
  }
  out << doc.dump(2) << "\n";
}

std::string render_table(const Table& table, Format format) {
  std::ostringstream os;
  write_table(os, table, format);
  return os.str();
}

Table parse_csv(const std::string& text) {
  Table table;
  std::size_t pos = 0;
  while (pos < text.size() && text[pos] == '#') {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t colon = line.find(": ");
    if (line.size() < 2 || line[1] != ' ' || colon == std::string::npos) {
      throw std::runtime_error("csv: malformed metadata line: " + line);
    }
    table.add_meta(line.substr(2, colon - 2), line.substr(colon + 2));
    pos = end + 1;
  }
  auto records = split_csv(text.substr(std::min(pos, text.size())));
  if (records.empty()) throw std::runtime_error("csv: missing header row");
  table.columns = std::move(records.front());
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() != table.columns.size()) {
      throw std::runtime_error("csv: row " + std::to_string(i) + " has " +
                               std::to_string(records[i].size()) + " fields, expected " +
                               std::to_string(table.columns.size()));
    }
    table.rows.push_back(std::move(records[i]));
  }
  return table;
}

Table parse_json(const std::string& text) {
  const auto doc = nlohmann::ordered_json::parse(text);
  Table table;
  for (const auto& [k, v] : doc.at("metadata").items()) table.add_meta(k, v.get<std::string>());
  table.columns = doc.at("columns").get<std::vector<std::string>>();
  for (const auto& rec : doc.at("records")) {
    std::vector<std::string> row;
    row.reserve(table.columns.size());
    for (const auto& col : table.columns) {
      const auto& cell = rec.at(col);
      if (cell.is_number()) {
        row.push_back(format_number(cell.get<double>()));
      } else {
        row.push_back(cell.get<std::string>());
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table parse_table(const std::string& text, Format format) {
  return format == Format::csv ? parse_csv(text) : parse_json(text);
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace cvhbac::cli
