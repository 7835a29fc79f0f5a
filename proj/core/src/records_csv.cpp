#include "effcost/records_csv.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "effcost/errors.hpp"

namespace effcost {
namespace {

std::vector<std::string> split_row(std::string_view line, std::size_t offset) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell += ch;
    }
  }
  if (quoted) throw ParseError(fmt::format("unterminated quote at byte {}", offset), offset);
  cells.push_back(std::move(cell));
  return cells;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

double parse_number(const std::string& cell, std::string_view column, std::size_t offset) {
  double v = 0.0;
  const char* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw ParseError(fmt::format("column '{}': '{}' is not a finite number (line at byte {})",
                                 column, cell, offset),
                     offset);
  }
  return v;
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

RecordsTable parse_records_csv(std::string_view text) {
  RecordsTable table;
  std::vector<std::string> header;
  int name_col = -1, family_col = -1, quality_col = -1;
  std::vector<int> indicator_cols;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    const std::size_t offset = pos;
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::string trimmed = trim(std::string(line));
    if (trimmed.empty() || trimmed.front() == '#') continue;

    auto cells = split_row(line, offset);
    for (auto& c : cells) c = trim(std::move(c));

    if (header.empty()) {
      header = cells;
      std::set<std::string> seen;
      for (std::size_t i = 0; i < header.size(); ++i) {
        const auto& h = header[i];
        if (h.empty()) throw ParseError(fmt::format("empty header cell {}", i), offset);
        if (!seen.insert(h).second) throw ParseError(fmt::format("duplicate column '{}'", h), offset);
        if (h == "name") name_col = static_cast<int>(i);
        else if (h == "family") family_col = static_cast<int>(i);
        else if (h == "quality") quality_col = static_cast<int>(i);
        else {
          indicator_cols.push_back(static_cast<int>(i));
          table.indicator_columns.push_back(h);
        }
      }
      if (name_col < 0) throw ParseError("records header lacks a 'name' column", offset);
      if (quality_col < 0) throw ParseError("records header lacks a 'quality' column", offset);
      continue;
    }

    if (cells.size() != header.size()) {
      throw ParseError(fmt::format("row at byte {} has {} cells, header has {}", offset,
                                   cells.size(), header.size()),
                       offset);
    }
    ModelRecord rec;
    rec.name = cells[static_cast<std::size_t>(name_col)];
    if (rec.name.empty()) throw ParseError(fmt::format("row at byte {} has an empty name", offset), offset);
    if (family_col >= 0 && !cells[static_cast<std::size_t>(family_col)].empty()) {
      rec.family = cells[static_cast<std::size_t>(family_col)];
    }
    const auto& q = cells[static_cast<std::size_t>(quality_col)];
    if (q.empty()) throw ParseError(fmt::format("row '{}' has no quality value", rec.name), offset);
    rec.quality = parse_number(q, "quality", offset);
    for (int c : indicator_cols) {
      const auto& cell = cells[static_cast<std::size_t>(c)];
      if (cell.empty()) continue;
      rec.indicators[header[static_cast<std::size_t>(c)]] =
          parse_number(cell, header[static_cast<std::size_t>(c)], offset);
    }
    table.records.push_back(std::move(rec));
  }
  if (header.empty()) throw ParseError("records file has no header", 0);
  return table;
}

std::string format_sig6(double value) {
  if (value == 0.0 || !std::isfinite(value)) return value == 0.0 ? "0" : fmt::format("{}", value);
  const int exponent = static_cast<int>(std::floor(std::log10(std::abs(value))));
  const int decimals = std::max(0, 5 - exponent);
  double rounded = value;
  if (exponent > 5) {
    const double scale = std::pow(10.0, exponent - 5);
    rounded = std::round(value / scale) * scale;
  }
  std::string s = fmt::format("{:.{}f}", rounded, decimals);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

std::string write_records_csv(const RecordsTable& table) {
  std::string out = "name,family,quality";
  for (const auto& c : table.indicator_columns) out += "," + quote_if_needed(c);
  out += "\n";
  for (const auto& r : table.records) {
    out += quote_if_needed(r.name) + "," + quote_if_needed(r.family.value_or("")) + "," +
           format_sig6(r.quality);
    for (const auto& c : table.indicator_columns) {
      out += ",";
      const auto it = r.indicators.find(c);
      if (it != r.indicators.end()) out += format_sig6(it->second);
    }
    out += "\n";
  }
  return out;
}

}  // namespace effcost
