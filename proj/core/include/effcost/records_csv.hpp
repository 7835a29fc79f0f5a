#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "effcost/analysis.hpp"

namespace effcost {

// Records file: header `name,family,quality,<indicator columns...>`
// (family optional). Empty cells mean the indicator is missing. Lines
// starting with '#' are comments. Fields may be double-quoted.
struct RecordsTable {
  std::vector<std::string> indicator_columns;  // in header order
  std::vector<ModelRecord> records;
};

// Throws ParseError (with byte offset of the offending line) on a missing
// header column, an unparsable or non-finite number, or a ragged row.
[[nodiscard]] RecordsTable parse_records_csv(std::string_view text);

[[nodiscard]] std::string write_records_csv(const RecordsTable& table);

// Fixed notation, at most six significant digits, no exponent.
[[nodiscard]] std::string format_sig6(double value);

}  // namespace effcost
