#include "rtkit/table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rtkit/csv.hpp"
#include "rtkit/errors.hpp"

namespace rtkit {
namespace {

constexpr std::string_view kColumnsKey = "columns";

std::string kind_tag(const Column& c) {
  switch (c.kind) {
    case Column::Kind::kDate:
      return "date";
    case Column::Kind::kInteger:
      return "int";
    case Column::Kind::kText:
      return "text";
    case Column::Kind::kReal:
      return c.decimals < 0 ? "real" : "fixed" + std::to_string(c.decimals);
  }
  return "real";
}

std::string format_cell(const Column& c, std::size_t row) {
  if (c.kind == Column::Kind::kText) return csv::quote(c.text[row]);
  const auto& v = c.numbers[row];
  if (!v) return {};
  switch (c.kind) {
    case Column::Kind::kDate:
      return format_iso_date(Date{std::chrono::days{static_cast<long>(*v)}});
    case Column::Kind::kInteger:
      return std::to_string(static_cast<long long>(*v));
    case Column::Kind::kReal:
      return c.decimals < 0 ? format_real(*v) : format_fixed(*v, c.decimals);
    case Column::Kind::kText:
      break;
  }
  return {};
}

Column column_from_tag(std::string name, std::string_view tag, std::size_t line, const std::string& file) {
  Column c;
  c.name = std::move(name);
  if (tag == "date") {
    c.kind = Column::Kind::kDate;
  } else if (tag == "int") {
    c.kind = Column::Kind::kInteger;
  } else if (tag == "text") {
    c.kind = Column::Kind::kText;
  } else if (tag == "real") {
    c.kind = Column::Kind::kReal;
  } else if (tag.substr(0, 5) == "fixed") {
    c.kind = Column::Kind::kReal;
    int d = -1;
    const auto digits = tag.substr(5);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), d);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || d < 0) {
      throw MalformedRow(file, line, "bad column type '" + std::string(tag) + "'");
    }
    c.decimals = d;
  } else {
    throw MalformedRow(file, line, "bad column type '" + std::string(tag) + "'");
  }
  return c;
}

}  // namespace

Column Column::dates(std::string name, const std::vector<Date>& values) {
  Column c{std::move(name), Kind::kDate, -1, {}, {}};
  for (Date d : values) c.numbers.emplace_back(static_cast<double>(d.time_since_epoch().count()));
  return c;
}

Column Column::integers(std::string name, std::vector<std::optional<double>> values) {
  return Column{std::move(name), Kind::kInteger, -1, std::move(values), {}};
}

Column Column::reals(std::string name, std::vector<std::optional<double>> values, int decimals) {
  return Column{std::move(name), Kind::kReal, decimals, std::move(values), {}};
}

Column Column::texts(std::string name, std::vector<std::string> values) {
  return Column{std::move(name), Kind::kText, -1, {}, std::move(values)};
}

const Column& Table::column(std::string_view name) const {
  for (const auto& c : columns) {
    if (c.name == name) return c;
  }
  throw InvalidArgument("table has no column '" + std::string(name) + "'");
}

std::optional<std::string> Table::meta(std::string_view key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_fixed(double v, int decimals) {
  char buf[128];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  if (ec != std::errc{}) return format_real(v);
  return std::string(buf, ptr);
}

std::string to_csv(const Table& table) {
  for (const auto& c : table.columns) {
    if (c.size() != table.rows()) throw InvalidArgument("table columns differ in length");
  }
  std::string out;
  for (const auto& [k, v] : table.metadata) out += "# " + k + ": " + v + "\n";
  out += "# " + std::string(kColumnsKey) + ": ";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out += (i ? "," : "") + table.columns[i].name + ":" + kind_tag(table.columns[i]);
  }
  out += "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + csv::quote(table.columns[i].name);
  out += "\n";
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + format_cell(table.columns[i], r);
    out += "\n";
  }
  return out;
}

Table parse_table_csv(std::string_view text, const std::string& name) {
  Table table;
  std::size_t line_no = 0;
  bool have_types = false, have_header = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (!have_header && line.substr(0, 2) == "# ") {
      const auto colon = line.find(": ", 2);
      if (colon == std::string_view::npos) throw MalformedRow(name, line_no, "metadata line without ': '");
      const std::string key(line.substr(2, colon - 2));
      const std::string value(line.substr(colon + 2));
      if (key != kColumnsKey) {
        table.metadata.emplace_back(key, value);
        continue;
      }
      const auto specs = csv::split_record(value);
      if (!specs) throw MalformedRow(name, line_no, "bad column declaration");
      for (const auto& spec : *specs) {
        const auto sep = spec.rfind(':');
        if (sep == std::string::npos) throw MalformedRow(name, line_no, "column declaration needs name:type");
        table.columns.push_back(column_from_tag(spec.substr(0, sep), std::string_view(spec).substr(sep + 1), line_no, name));
      }
      have_types = true;
      continue;
    }
    if (line.empty()) continue;

    auto fields = csv::split_record(line);
    if (!fields) throw MalformedRow(name, line_no, "unterminated quoted field");
    if (!have_header) {
      if (!have_types) {
        for (const auto& f : *fields) table.columns.push_back(Column::reals(f, {}));
        if (!table.columns.empty() && table.columns.front().name == "date") table.columns.front().kind = Column::Kind::kDate;
      }
      if (fields->size() != table.columns.size()) throw MalformedRow(name, line_no, "header does not match column declaration");
      for (std::size_t i = 0; i < fields->size(); ++i) {
        if ((*fields)[i] != table.columns[i].name) throw MalformedRow(name, line_no, "header does not match column declaration");
      }
      have_header = true;
      continue;
    }

    if (fields->size() != table.columns.size()) {
      throw MalformedRow(name, line_no,
                         "expected " + std::to_string(table.columns.size()) + " fields, got " + std::to_string(fields->size()));
    }
    for (std::size_t i = 0; i < fields->size(); ++i) {
      Column& c = table.columns[i];
      const std::string& cell = (*fields)[i];
      if (c.kind == Column::Kind::kText) {
        c.text.push_back(cell);
        continue;
      }
      if (cell.empty()) {
        c.numbers.emplace_back(std::nullopt);
        continue;
      }
      if (c.kind == Column::Kind::kDate) {
        const auto d = try_parse_iso_date(cell);
        if (!d) throw MalformedRow(name, line_no, "bad date '" + cell + "'");
        c.numbers.emplace_back(static_cast<double>(d->time_since_epoch().count()));
        continue;
      }
      bool ok = true;
      const auto v = csv::parse_number(cell, ok);
      if (!ok || !v || !std::isfinite(*v)) throw MalformedRow(name, line_no, "bad number '" + cell + "'");
      c.numbers.emplace_back(*v);
    }
  }
  if (!have_header) throw MalformedRow(name, line_no, "missing header row");
  return table;
}

Table read_table_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_table_csv(ss.str(), path.string());
}

std::string to_json(const Table& table) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : table.metadata) meta[k] = v;
  doc["metadata"] = meta;
  for (const auto& c : table.columns) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < c.size(); ++r) {
      if (c.kind == Column::Kind::kText) {
        arr.push_back(c.text[r]);
        continue;
      }
      const auto& v = c.numbers[r];
      if (!v) {
        arr.push_back(nullptr);
      } else if (c.kind == Column::Kind::kDate) {
        arr.push_back(format_cell(c, r));
      } else if (c.kind == Column::Kind::kInteger) {
        arr.push_back(static_cast<long long>(*v));
      } else if (c.decimals >= 0) {
        const double scale = std::pow(10.0, c.decimals);
        arr.push_back(std::round(*v * scale) / scale);
      } else {
        arr.push_back(*v);
      }
    }
    doc[c.name] = std::move(arr);
  }
  return doc.dump(1) + "\n";
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Table series_table(const DatedSeries& series, const std::string& name) {
  std::vector<Date> dates;
  for (std::size_t i = 0; i < series.size(); ++i) dates.push_back(series.date_at(i));
  Table t;
  t.columns.push_back(Column::dates("date", dates));
  t.columns.push_back(Column::reals(name, series.values()));
  return t;
}

DatedSeries table_series(const Table& table, std::string_view name) {
  if (table.columns.empty() || table.columns.front().kind != Column::Kind::kDate) {
    throw InvalidArgument("table has no leading date column");
  }
  const Column& dates = table.columns.front();
  const Column& values = table.column(name);
  if (dates.numbers.empty()) return {};
  std::vector<DatedSeries::Value> out;
  const Date start{std::chrono::days{static_cast<long>(*dates.numbers.front())}};
  for (std::size_t r = 0; r < dates.numbers.size(); ++r) {
    if (!dates.numbers[r] || *dates.numbers[r] != *dates.numbers.front() + static_cast<double>(r)) {
      throw DateGap("table dates are not consecutive");
    }
    out.push_back(values.numbers[r]);
  }
  return DatedSeries(start, std::move(out));
}

}  // namespace rtkit
