#include "meshfree/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace meshfree {

std::string format_real(Real value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_trajectory_csv(const std::string& path, const RealizationResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);

  const Index d = result.truth.states.rows();
  const int steps = static_cast<int>(result.estimates.cols());

  out << "step";
  for (Index m = 1; m <= d; ++m) out << ",truth_" << m;
  for (Index m = 1; m <= d; ++m) out << ",estimate_" << m;
  out << ",err_k,resampled\n";

  for (int k = 1; k <= steps; ++k) {
    out << k;
    for (Index m = 0; m < d; ++m) out << ',' << format_real(result.truth.states(m, k));
    for (Index m = 0; m < d; ++m) out << ',' << format_real(result.estimates(m, k - 1));
    out << ',' << format_real(result.errors[k - 1]) << ','
        << static_cast<int>(result.resampled[k - 1]) << '\n';
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream stream(line);
  std::string cell;
  while (std::getline(stream, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

TrajectoryTable read_trajectory_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty trajectory csv: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);

  TrajectoryTable table;
  int d = 0;
  for (const std::string& name : header)
    if (name.rfind("truth_", 0) == 0) ++d;
  table.state_dim = d;
  const size_t expected = 1 + 2 * static_cast<size_t>(d) + 2;
  if (header.size() != expected || header.front() != "step")
    throw std::runtime_error("unexpected trajectory header in: " + path);

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != expected)
      throw std::runtime_error("ragged trajectory row in: " + path);
    table.steps.push_back(cells[0]);
    table.truth.emplace_back(cells.begin() + 1, cells.begin() + 1 + d);
    table.estimate.emplace_back(cells.begin() + 1 + d, cells.begin() + 1 + 2 * d);
    table.err.push_back(cells[1 + 2 * d]);
    table.resampled.push_back(cells[2 + 2 * d]);
  }
  return table;
}

void write_plotdata(const std::string& states_path, const std::string& err_path,
                    const std::vector<std::pair<std::string, TrajectoryTable>>& inputs) {
  if (inputs.empty()) throw std::runtime_error("write_plotdata: no inputs");
  const TrajectoryTable& first = inputs.front().second;
  for (const auto& [label, table] : inputs) {
    if (table.state_dim != first.state_dim || table.steps != first.steps ||
        table.truth != first.truth)
      throw std::runtime_error("write_plotdata: inputs disagree on truth (" + label + ")");
  }

  std::ofstream states(states_path, std::ios::binary);
  if (!states) throw std::runtime_error("cannot open for writing: " + states_path);
  states << "step,dimension,series,value\n";
  for (size_t row = 0; row < first.steps.size(); ++row)
    for (int m = 0; m < first.state_dim; ++m)
      states << first.steps[row] << ',' << m + 1 << ",truth," << first.truth[row][m] << '\n';
  for (const auto& [label, table] : inputs)
    for (size_t row = 0; row < table.steps.size(); ++row)
      for (int m = 0; m < table.state_dim; ++m)
        states << table.steps[row] << ',' << m + 1 << ',' << label << ','
               << table.estimate[row][m] << '\n';

  std::ofstream err(err_path, std::ios::binary);
  if (!err) throw std::runtime_error("cannot open for writing: " + err_path);
  err << "step,series,err_k\n";
  for (const auto& [label, table] : inputs)
    for (size_t row = 0; row < table.steps.size(); ++row)
      err << table.steps[row] << ',' << label << ',' << table.err[row] << '\n';
}

}  // namespace meshfree
