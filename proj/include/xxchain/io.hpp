#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "xxchain/protocols.hpp"

namespace xxchain::io {

/// 12 significant digits, '.' decimal point regardless of locale.
std::string format_number(double value);

using CsvCell = std::variant<double, std::string>;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<CsvCell>> rows;
};

/// Header line, then one line per row; every line ends in '\n'.
void emit_csv(std::ostream& out, const CsvTable& table);

/// Writes to `path`, or to `fallback` when the path is empty or "-".
/// Throws Error(IoError) if the file cannot be written.
void write_output(const std::string& path, std::ostream& fallback, const std::string& content);

nlohmann::ordered_json to_json(const TransferReport& report);
nlohmann::ordered_json to_json(const ScalingReport& report);

/// Rounds to 12 significant digits so JSON numbers match the CSV precision.
double round_significant(double value);

}  // namespace xxchain::io
