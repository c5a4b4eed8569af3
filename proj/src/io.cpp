#include "xxchain/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "xxchain/error.hpp"

namespace xxchain::io {

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0 as well
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
  if (ec != std::errc{}) throw Error(ErrorCode::IoError, "number formatting failed");
  return {buf, ptr};
}

double round_significant(double value) {
  if (!std::isfinite(value)) return value;
  const auto text = format_number(value);
  double out = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), out);
  return out;
}

void emit_csv(std::ostream& out, const CsvTable& table) {
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    out << (c ? "," : "") << table.header[c];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << (c ? "," : "");
      if (const auto* number = std::get_if<double>(&row[c])) {
        out << format_number(*number);
      } else {
        out << std::get<std::string>(row[c]);
      }
    }
    out << '\n';
  }
}

void write_output(const std::string& path, std::ostream& fallback, const std::string& content) {
  if (path.empty() || path == "-") {
    fallback << content;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  file << content;
  if (!file) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

nlohmann::ordered_json to_json(const TransferReport& report) {
  nlohmann::ordered_json j;
  j["n_sites"] = report.n_sites;
  j["alpha_opt"] = round_significant(report.alpha_opt);
  j["t_tr"] = round_significant(report.t_tr);
  j["f_max"] = round_significant(report.f_max);
  j["c_max"] = round_significant(report.c_max);
  j["window"] = {round_significant(report.window.lo), round_significant(report.window.hi)};
  auto& rows = j["per_alpha"] = nlohmann::ordered_json::array();
  for (const auto& scan : report.per_alpha) {
    nlohmann::ordered_json row;
    row["alpha"] = round_significant(scan.alpha);
    row["t_refocus"] = scan.t_refocus ? nlohmann::ordered_json(round_significant(*scan.t_refocus)) : nullptr;
    row["f_window_max"] = round_significant(scan.f_window_max);
    row["t_at_max"] = round_significant(scan.t_at_max);
    rows.push_back(std::move(row));
  }
  return j;
}

nlohmann::ordered_json to_json(const ScalingReport& report) {
  nlohmann::ordered_json j;
  auto& reports = j["reports"] = nlohmann::ordered_json::array();
  for (const auto& r : report.reports) reports.push_back(to_json(r));
  if (report.t_tr_fit) {
    j["t_tr_slope"] = round_significant(report.t_tr_fit->slope);
    j["t_tr_intercept"] = round_significant(report.t_tr_fit->intercept);
    j["t_tr_correlation"] = round_significant(report.t_tr_fit->correlation);
  } else {
    j["t_tr_slope"] = nullptr;
    j["t_tr_intercept"] = nullptr;
    j["t_tr_correlation"] = nullptr;
  }
  return j;
}

}  // namespace xxchain::io
