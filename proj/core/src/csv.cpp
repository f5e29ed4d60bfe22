#include "rtsim/csv.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

namespace rtsim::csv {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw DataError("csv: missing column '" + name + "'");
}

bool Table::has_column(const std::string& name) const {
  for (const auto& h : header)
    if (h == name) return true;
  return false;
}

static Table parse(std::istream& in, const std::string& origin) {
  Table t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (lineno == 1) {
      t.header = std::move(fields);
      continue;
    }
    if (fields.size() != t.header.size())
      throw DataError(origin + ":" + std::to_string(lineno) + ": expected " +
                      std::to_string(t.header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    t.rows.push_back(std::move(fields));
  }
  if (t.header.empty()) throw DataError(origin + ": empty csv file");
  return t;
}

Table read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open csv file: " + path.string());
  return parse(in, path.string());
}

Table read_string(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  return parse(in, origin);
}

std::int64_t to_i64(const std::string& field, const std::string& context) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || p != field.data() + field.size())
    throw DataError(context + ": not an integer: '" + field + "'");
  return v;
}

double to_double(const std::string& field, const std::string& context) {
  double v = 0;
  auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || p != field.data() + field.size())
    throw DataError(context + ": not a number: '" + field + "'");
  return v;
}

Writer::Writer(const std::filesystem::path& path) : path_(path) {
  std::filesystem::create_directories(path.parent_path().empty()
                                          ? std::filesystem::path(".")
                                          : path.parent_path());
  out_.open(path, std::ios::binary);  // binary: LF endings everywhere
  if (!out_) throw ConfigError("cannot open for writing: " + path.string());
}

Writer& Writer::field(const std::string& s) {
  if (row_open_) out_ << ',';
  out_ << s;
  row_open_ = true;
  return *this;
}

Writer& Writer::field(std::int64_t v) { return field(std::to_string(v)); }

Writer& Writer::field(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return field(std::string(buf, p));
}

Writer& Writer::field_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return field(std::string(buf));
}

Writer& Writer::blank() { return field(std::string()); }

void Writer::end_row() {
  out_ << '\n';
  row_open_ = false;
}

void Writer::close() {
  out_.close();
  if (out_.fail()) throw DataError("write failed: " + path_.string());
}

}  // namespace rtsim::csv
