#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rtkit::csv {

/// Splits one CSV record. Double-quoted fields may contain commas and "" escapes.
/// Returns nullopt on an unterminated quote.
std::optional<std::vector<std::string>> split_record(std::string_view line);

/// Quotes a field if it contains a comma, quote or leading/trailing space.
std::string quote(std::string_view field);

/// Line-oriented reader that tracks 1-based line numbers and strips CR.
class Reader {
 public:
  explicit Reader(const std::filesystem::path& path);

  /// Next record, or nullopt at end of file. Throws MalformedRow on bad quoting.
  std::optional<std::vector<std::string>> next();

  std::size_t line() const noexcept { return line_; }
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
  std::unique_ptr<std::istream> in_;
  std::size_t line_ = 0;
};

/// Parses a numeric cell. Empty cells are absent; anything unparsable is nullopt
/// with `ok` set to false.
std::optional<double> parse_number(std::string_view cell, bool& ok);

}  // namespace rtkit::csv
