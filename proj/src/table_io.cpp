#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "thetaquench/config.hpp"
#include "thetaquench/errors.hpp"
#include "thetaquench/table_io.hpp"

namespace tq {
namespace {

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
  return s;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

const TableSchema& phase_schema() {
  static const TableSchema s{"phase", {"k_over_m", "t_m", "re_g", "im_g", "phase", "singular"}};
  return s;
}
const TableSchema& series_schema() {
  static const TableSchema s{
      "series", {"t_m", "re_L", "im_L", "rate_over_m", "rate_g_over_m", "rate_K_over_m", "nu"}};
  return s;
}
const TableSchema& scan_schema() {
  static const TableSchema s{"scan", {"e_over_m", "t_m", "nu", "rate_over_m"}};
  return s;
}
const TableSchema& vortex_schema() {
  static const TableSchema s{"vortices", {"k_over_m", "t_m", "charge"}};
  return s;
}
const TableSchema& correlator_schema() {
  static const TableSchema s{"correlators", {"k_over_m", "t_m", "F_s", "F_0", "F_1", "F_5"}};
  return s;
}
const TableSchema& kink_schema() {
  static const TableSchema s{"kinks", {"n", "t_c_m", "slope_left", "slope_right", "slope_jump"}};
  return s;
}
const TableSchema& scan_summary_schema() {
  static const TableSchema s{"scan_summary",
                             {"e_over_m", "first_nu_t_m", "first_max_rate_t_m", "first_max_rate_g_t_m",
                              "first_max_rate_K_t_m", "failed"}};
  return s;
}

void Table::add(std::vector<double> row) {
  if (row.size() != columns.size())
    throw ValidationError("Table::add: row has " + std::to_string(row.size()) + " cells, expected " +
                          std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

void write_table(const std::filesystem::path& path, const Table& table) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw NumericalError("cannot write '" + path.string() + "'");
  out << join(table.columns) << '\n';
  std::string line;
  for (const auto& row : table.rows) {
    line.clear();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) line += ',';
      line += format_double(row[i]);
    }
    line += '\n';
    out << line;
  }
  out.flush();
  if (!out) throw NumericalError("write to '" + path.string() + "' failed");
}

Table read_table(const std::filesystem::path& path, const TableSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read table '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path.string() + ": empty file, expected a header");
  Table t;
  t.columns = split(line);
  if (t.columns != schema.columns)
    throw ValidationError(path.string() + ": header '" + line + "' does not match the " + schema.name +
                          " schema '" + join(schema.columns) + "'");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto cells = split(line);
    if (cells.size() != t.columns.size())
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(t.columns.size()) + " cells");
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (c.empty() || *end != '\0')
        throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + c + "'");
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace tq
