#ifndef RANGESYNTH_CSV_HPP
#define RANGESYNTH_CSV_HPP

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rangesynth/schema.hpp"

namespace rangesynth {

struct CsvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RawCsv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// RFC-4180 style: quoted fields may contain commas, quotes ("") and newlines.
inline RawCsv read_csv(std::istream& in) {
  RawCsv out;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false, any = false;
  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
  };
  auto end_record = [&] {
    end_field();
    if (out.header.empty())
      out.header = std::move(record);
    else
      out.rows.push_back(std::move(record));
    record.clear();
    any = false;
  };
  int ch;
  while ((ch = in.get()) != EOF) {
    char c = static_cast<char>(ch);
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          field += '"';
          in.get();
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"': quoted = true; any = true; break;
      case ',': end_field(); any = true; break;
      case '\r': break;
      case '\n':
        if (any || !field.empty() || !record.empty()) end_record();
        break;
      default: field += c; any = true; break;
    }
  }
  if (any || !field.empty() || !record.empty()) end_record();
  if (out.header.empty()) throw CsvError("empty CSV: no header row");
  for (const auto& r : out.rows)
    if (r.size() != out.header.size())
      throw CsvError("CSV row has " + std::to_string(r.size()) + " fields, expected " +
                     std::to_string(out.header.size()));
  return out;
}

inline RawCsv read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError("cannot open " + path);
  return read_csv(in);
}

// Typed ingestion: infer kinds, parse cells, build text casting tables.
inline Table load_table(const RawCsv& raw, const std::vector<std::string>& pid_columns = {}) {
  Table t;
  t.columns = infer_column_kinds(raw.header, raw.rows);
  t.pid_columns = pid_columns;
  for (const auto& name : pid_columns) {
    int idx = -1;
    for (std::size_t i = 0; i < t.columns.size(); ++i)
      if (t.columns[i].name == name) idx = static_cast<int>(i);
    if (idx < 0) throw SchemaError("PID column not found: " + name);
    t.columns[idx].pid_role = true;
  }
  t.rows.reserve(raw.rows.size());
  for (const auto& raw_row : raw.rows) {
    std::vector<Value> row(t.columns.size());
    for (std::size_t c = 0; c < t.columns.size(); ++c) row[c] = parse_cell(raw_row[c], t.columns[c]);
    t.rows.push_back(std::move(row));
  }
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    std::vector<Value> col;
    col.reserve(t.rows.size());
    for (const auto& row : t.rows) col.push_back(row[c]);
    build_casting_table(t.columns[c], col);
  }
  return t;
}

inline Table load_table_file(const std::string& path, const std::vector<std::string>& pid_columns = {}) {
  return load_table(read_csv_file(path), pid_columns);
}

inline std::string csv_escape(const std::string& s) {
  bool need = s.find_first_of(",\"\n\r") != std::string::npos;
  if (!need) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline void write_csv(std::ostream& out, const Table& t) {
  for (std::size_t c = 0; c < t.columns.size(); ++c)
    out << (c ? "," : "") << csv_escape(t.columns[c].name);
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      out << (c ? "," : "") << csv_escape(value_to_string(row[c]));
    out << '\n';
  }
}

inline void write_csv_file(const std::string& path, const Table& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CsvError("cannot write " + path);
  write_csv(out, t);
  out.flush();
  if (!out) throw CsvError("write failed: " + path);
}

}  // namespace rangesynth

#endif
