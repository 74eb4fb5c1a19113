#include "gmh/bench/table.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gmh::bench {

Table emit_table(const std::vector<SweepResult>& sweeps, TableMetric metric) {
  Table t;
  for (const auto& s : sweeps) {
    std::ostringstream os;
    if (s.value) {
      os << "xi=" << *s.value;
    } else {
      os << (metric == TableMetric::Ess ? "ess" : "ess_per_sec");
    }
    t.column_labels.push_back(os.str());
    for (const auto& r : s.rows) {
      if (std::find(t.row_labels.begin(), t.row_labels.end(), r.kernel) == t.row_labels.end()) {
        t.row_labels.push_back(r.kernel);
      }
    }
  }
  t.cells.assign(t.row_labels.size(), std::vector<double>(sweeps.size(), 0.0));
  for (std::size_t c = 0; c < sweeps.size(); ++c) {
    for (std::size_t row = 0; row < t.row_labels.size(); ++row) {
      double sum = 0.0;
      int count = 0;
      for (const auto& r : sweeps[c].rows) {
        if (r.kernel != t.row_labels[row]) continue;
        sum += metric == TableMetric::Ess ? r.ess : r.ess_per_sec;
        ++count;
      }
      t.cells[row][c] = count > 0 ? sum / count : 0.0;
    }
  }
  return t;
}

std::string format_table(const Table& t) {
  std::size_t w0 = 6;
  for (const auto& l : t.row_labels) w0 = std::max(w0, l.size());
  std::size_t w = 10;
  for (const auto& l : t.column_labels) w = std::max(w, l.size());
  std::ostringstream os;
  os << std::string(w0, ' ');
  for (const auto& l : t.column_labels) os << "  " << std::string(w - l.size(), ' ') << l;
  os << '\n';
  for (std::size_t r = 0; r < t.row_labels.size(); ++r) {
    os << t.row_labels[r] << std::string(w0 - t.row_labels[r].size(), ' ');
    for (double v : t.cells[r]) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%*.2f", static_cast<int>(w), v);
      os << "  " << buf;
    }
    os << '\n';
  }
  return os.str();
}

void write_table_csv(const Table& t, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "kernel";
  for (const auto& c : t.column_labels) out << ',' << csv_field(c);
  out << '\n';
  for (std::size_t r = 0; r < t.row_labels.size(); ++r) {
    out << csv_field(t.row_labels[r]);
    for (double v : t.cells[r]) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.10g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace gmh::bench
