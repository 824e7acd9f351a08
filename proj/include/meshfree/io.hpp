#pragma once

#include <string>
#include <vector>

#include "meshfree/runner.hpp"
#include "meshfree/types.hpp"

namespace meshfree {

// Doubles are printed with 17 significant digits (round-trip exact).
std::string format_real(Real value);

// Trajectory CSV: header row then one row per step
//   step,truth_1..d,estimate_1..d,err_k,resampled
void write_trajectory_csv(const std::string& path, const RealizationResult& result);

// Parsed trajectory with cells kept as raw text so downstream emitters can
// pass values through byte-for-byte.
struct TrajectoryTable {
  int state_dim = 0;
  std::vector<std::string> steps;
  std::vector<std::vector<std::string>> truth;     // [row][dim]
  std::vector<std::vector<std::string>> estimate;  // [row][dim]
  std::vector<std::string> err;
  std::vector<std::string> resampled;
};

TrajectoryTable read_trajectory_csv(const std::string& path);

// Long-format state series (step,dimension,series,value) and the err_k
// comparison (step,series,err_k) for one or more labeled trajectories. All
// inputs must agree on the truth columns bitwise.
void write_plotdata(const std::string& states_path, const std::string& err_path,
                    const std::vector<std::pair<std::string, TrajectoryTable>>& inputs);

}  // namespace meshfree
