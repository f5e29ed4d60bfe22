#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "rtsim/errors.hpp"

namespace rtsim::csv {

// Minimal CSV support for the artifact's file formats: UTF-8, header row,
// comma separator, '.' decimal separator, LF line endings. No quoting is
// needed by any shipped format.

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
  bool has_column(const std::string& name) const;
};

Table read_file(const std::filesystem::path& path);
Table read_string(const std::string& text, const std::string& origin = "<string>");

// Field accessors with location-carrying errors.
std::int64_t to_i64(const std::string& field, const std::string& context);
double to_double(const std::string& field, const std::string& context);

class Writer {
public:
  explicit Writer(const std::filesystem::path& path);
  Writer& field(const std::string& s);
  Writer& field(std::int64_t v);
  Writer& field(double v);           // shortest round-trip representation
  Writer& field_fixed(double v, int decimals);
  Writer& blank();
  void end_row();
  void close();

private:
  std::ofstream out_;
  bool row_open_ = false;
  std::filesystem::path path_;
};

std::vector<std::string> split(const std::string& line, char sep);

}  // namespace rtsim::csv
