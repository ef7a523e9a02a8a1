#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rtkit/dated_series.hpp"

namespace rtkit {

/// One column of a plot-ready output table.
struct Column {
  enum class Kind { kDate, kInteger, kReal, kText };

  std::string name;
  Kind kind = Kind::kReal;
  /// Real columns: fixed decimals, or -1 for the shortest exact representation.
  int decimals = -1;
  /// kDate (days since 1970-01-01), kInteger and kReal cells; nullopt is absent.
  std::vector<std::optional<double>> numbers;
  /// kText cells.
  std::vector<std::string> text;

  std::size_t size() const noexcept { return kind == Kind::kText ? text.size() : numbers.size(); }

  static Column dates(std::string name, const std::vector<Date>& values);
  static Column integers(std::string name, std::vector<std::optional<double>> values);
  static Column reals(std::string name, std::vector<std::optional<double>> values, int decimals = -1);
  static Column texts(std::string name, std::vector<std::string> values);
};

/// Metadata lines plus equally long columns.
///
/// CSV layout: `# key: value` lines, a `# columns:` line declaring each
/// column's type, then a header row and the data rows. Absent cells are empty.
struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<Column> columns;

  std::size_t rows() const noexcept { return columns.empty() ? 0 : columns.front().size(); }
  const Column& column(std::string_view name) const;
  std::optional<std::string> meta(std::string_view key) const;
};

/// Shortest decimal text that parses back to exactly `v`.
std::string format_real(double v);
std::string format_fixed(double v, int decimals);

std::string to_csv(const Table& table);
/// Throws MalformedRow on structural problems.
Table parse_table_csv(std::string_view text, const std::string& name = "<table>");
Table read_table_csv(const std::filesystem::path& path);

/// Object with a "metadata" member and one array per column.
std::string to_json(const Table& table);

/// Writes to a temporary sibling, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Two-column (date, `name`) table of a series.
Table series_table(const DatedSeries& series, const std::string& name);
/// Reads back a series column from a table whose first column is `date`.
/// Dates must be consecutive.
DatedSeries table_series(const Table& table, std::string_view name);

}  // namespace rtkit
