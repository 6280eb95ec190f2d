#pragma once

// CSV/JSON artifact helpers: fixed 9-significant-digit number formatting,
// atomic file writes and CSV time-series reading.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cqad/model.hpp"

namespace cqad::io {

/// "%.9g"; infinities become "inf"/"-inf", NaN becomes "nan".
std::string format_number(double x);

/// Empty optional becomes "inf" (the unreached sentinel).
std::string format_optional(const std::optional<double>& x);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  void add_row(const std::vector<double>& values);
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// Parses a headed CSV and returns the named columns (first two columns when
/// the names are empty) as a TimeSeries.
TimeSeries parse_time_series_csv(const std::string& text, std::string_view time_column = {},
                                 std::string_view value_column = {});

/// All columns of a headed numeric CSV, by header name.
struct CsvColumns {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;

  const std::vector<double>& column(std::string_view name) const;
};
CsvColumns parse_csv(const std::string& text);

}  // namespace cqad::io
