#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gmh/bench/experiment.hpp"

namespace gmh::bench {

enum class TableMetric { EssPerSecond, Ess };

/// Kernels as rows, sweep values as columns, cells averaged over
/// replications (Table 2 layout).
struct Table {
  std::vector<std::string> row_labels;
  std::vector<std::string> column_labels;
  std::vector<std::vector<double>> cells;
};

Table emit_table(const std::vector<SweepResult>& sweeps, TableMetric metric);
std::string format_table(const Table& t);
void write_table_csv(const Table& t, const std::filesystem::path& path);

}  // namespace gmh::bench
