#pragma once

// Comma-separated numeric tables with a one-line header naming the columns.
// Values are written with 17 significant digits so reading a file back gives
// the same doubles; flags and integers are written as whole numbers.

#include <filesystem>
#include <string>
#include <vector>

namespace tq {

struct TableSchema {
  std::string name;
  std::vector<std::string> columns;
};

// The file contracts consumed by the plotting scripts.
const TableSchema& phase_schema();        // k_over_m,t_m,re_g,im_g,phase,singular
const TableSchema& series_schema();       // t_m,re_L,im_L,rate_over_m,rate_g_over_m,rate_K_over_m,nu
const TableSchema& scan_schema();         // e_over_m,t_m,nu,rate_over_m
const TableSchema& vortex_schema();       // k_over_m,t_m,charge
const TableSchema& correlator_schema();   // k_over_m,t_m,F_s,F_0,F_1,F_5
const TableSchema& kink_schema();         // n,t_c_m,slope_left,slope_right,slope_jump
const TableSchema& scan_summary_schema(); // e_over_m,first_nu_t_m,first_max_rate_t_m,first_max_rate_g_t_m,first_max_rate_K_t_m,failed

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  explicit Table(const TableSchema& s) : columns(s.columns) {}
  Table() = default;
  void add(std::vector<double> row);
};

void write_table(const std::filesystem::path& path, const Table& table);

/// Reads a table and checks its header against `schema`.
Table read_table(const std::filesystem::path& path, const TableSchema& schema);

}  // namespace tq
