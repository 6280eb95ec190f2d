#include "cqad/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cqad/error.hpp"

namespace cqad::io {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& cell, std::size_t line_no) {
  if (cell == "inf") return std::numeric_limits<double>::infinity();
  if (cell == "-inf") return -std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size()) {
    throw InvalidArgument("csv line " + std::to_string(line_no) + ": not a number: '" + cell + "'");
  }
  return v;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::string format_optional(const std::optional<double>& x) {
  return x ? format_number(*x) : std::string("inf");
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw InvalidArgument("csv: empty header");
}

void CsvWriter::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw InvalidArgument("csv: row width does not match header");
  rows_.push_back(std::move(cells));
}

void CsvWriter::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  add_row(std::move(cells));
}

std::string CsvWriter::str() const {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  emit(header_);
  for (const auto& r : rows_) emit(r);
  return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::vector<double>& CsvColumns::column(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return columns[i];
  }
  throw InvalidArgument("csv: no column named '" + std::string(name) + "'");
}

CsvColumns parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  CsvColumns out;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (out.names.empty()) {
      out.names = split(line);
      out.columns.resize(out.names.size());
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != out.names.size()) {
      throw InvalidArgument("csv line " + std::to_string(line_no) + ": expected " +
                            std::to_string(out.names.size()) + " columns");
    }
    for (std::size_t i = 0; i < cells.size(); ++i) out.columns[i].push_back(parse_double(cells[i], line_no));
  }
  if (out.names.empty()) throw InvalidArgument("csv: missing header row");
  return out;
}

TimeSeries parse_time_series_csv(const std::string& text, std::string_view time_column,
                                 std::string_view value_column) {
  const CsvColumns csv = parse_csv(text);
  if (csv.names.size() < 2) throw InvalidArgument("csv: need at least two columns");
  TimeSeries ts;
  ts.times = time_column.empty() ? csv.columns[0] : csv.column(time_column);
  ts.values = value_column.empty() ? csv.columns[1] : csv.column(value_column);
  ts.label = value_column.empty() ? csv.names[1] : std::string(value_column);
  ts.check();
  return ts;
}

}  // namespace cqad::io
