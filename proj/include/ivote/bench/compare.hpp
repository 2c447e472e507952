#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ivote/bench/experiment.hpp"

namespace ivote {

inline std::uint64_t total_ops(const OperationCounts& c) {
  return c.box_intersection_calls + c.surface_evaluations + c.cells_touched;
}

struct OpsSample {
  double sweep_value = 0.0;
  std::string algo;
  OperationCounts ops;
};

inline OpsSample to_sample(const RunOutcome& r) {
  return {r.sweep_value, r.algo, r.result.ops};
}

// Reads rows written by write_csv back into op samples (used by the compare
// step so sweeps and analysis can run as separate invocations).
inline std::vector<OpsSample> read_csv_samples(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != csv_header())
    throw std::runtime_error("not a sweep CSV (unexpected header)");
  std::vector<OpsSample> out;
  std::size_t ln = 1;
  while (std::getline(in, line)) {
    ++ln;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::string col;
    std::istringstream ss(line);
    while (std::getline(ss, col, ',')) cols.push_back(col);
    if (cols.size() != 10)
      throw std::runtime_error("sweep CSV line " + std::to_string(ln) + ": expected 10 columns");
    OpsSample s;
    s.sweep_value = std::stod(cols[0]);
    s.algo = cols[1];
    s.ops.box_intersection_calls = std::stoull(cols[5]);
    s.ops.surface_evaluations = std::stoull(cols[6]);
    s.ops.cells_touched = std::stoull(cols[7]);
    out.push_back(std::move(s));
  }
  return out;
}

// Counted-operation totals per algorithm at one sweep value, kept in
// first-appearance order, plus the cheapest algorithm.
struct CompareRow {
  double sweep_value = 0.0;
  std::vector<std::pair<std::string, std::uint64_t>> totals;
  std::string cheapest;
};

inline std::vector<CompareRow> compare_rows(const std::vector<OpsSample>& samples) {
  std::vector<CompareRow> out;
  for (const OpsSample& s : samples) {
    CompareRow* row = nullptr;
    for (CompareRow& c : out)
      if (c.sweep_value == s.sweep_value) {
        row = &c;
        break;
      }
    if (!row) {
      out.push_back({s.sweep_value, {}, {}});
      row = &out.back();
    }
    row->totals.emplace_back(s.algo, total_ops(s.ops));
  }
  for (CompareRow& row : out) {
    if (row.totals.empty()) continue;
    const auto best = std::min_element(
        row.totals.begin(), row.totals.end(),
        [](const auto& a, const auto& b) { return a.second < b.second; });
    row.cheapest = best->first;
  }
  return out;
}

// Smallest sweep value from which algo stays strictly cheapest through the
// end of the sweep; NaN when there is no such point.
inline double crossover_value(const std::vector<CompareRow>& rows, const std::string& algo) {
  double cross = std::nan("");
  for (const CompareRow& row : rows) {
    if (row.cheapest == algo) {
      if (std::isnan(cross)) cross = row.sweep_value;
    } else {
      cross = std::nan("");
    }
  }
  return cross;
}

inline void write_compare_table(std::ostream& os, const std::vector<CompareRow>& rows,
                                const std::string& focus = "gv") {
  os << "sweep_value";
  if (!rows.empty())
    for (const auto& [algo, ops] : rows.front().totals) os << '\t' << algo;
  os << "\tcheapest\n";
  for (const CompareRow& row : rows) {
    os << row.sweep_value;
    for (const auto& [algo, ops] : row.totals) os << '\t' << ops;
    os << '\t' << row.cheapest << '\n';
  }
  const double cross = crossover_value(rows, focus);
  if (std::isnan(cross))
    os << "# " << focus << " never becomes cheapest\n";
  else
    os << "# " << focus << " cheapest from sweep_value=" << cross << " on\n";
}

}  // namespace ivote
