#pragma once

#include <cstdint>

#include "meshfree/types.hpp"

namespace meshfree {

// Counter-based random source (Philox2x64-10). A draw is a pure function of
// (seed, stream, index), so any draw can be reproduced without replaying the
// sequence and disjoint streams can be consumed concurrently.
struct RandomSource {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t cursor = 0;  // index of the next draw

  RandomSource() = default;
  RandomSource(std::uint64_t seed_, std::uint64_t stream_) : seed(seed_), stream(stream_) {}

  // Uniform on (0,1), never exactly 0 or 1.
  double uniform() { return uniform_at(seed, stream, cursor++); }
  // Standard normal draw.
  double normal() { return normal_at(seed, stream, cursor++); }

  RandomSource substream(std::uint64_t id) const { return {seed, id}; }

  static double uniform_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);
  static double normal_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);
};

// Stream-id layout used by the filters. Streams are disjoint as long as
// step < 2^12 and node index < 2^32, both checked by the callers.
namespace streams {
constexpr std::uint64_t kTruth = 1;
constexpr std::uint64_t kInit = 2;

enum class Purpose : std::uint64_t {
  Propagate = 0,
  Predict = 1,
  PredictShared = 2,
  Resample = 3,
  PfPropagate = 4,
  PfResample = 5,
  Rescue = 6,
  PfRescue = 7,
};

constexpr std::uint64_t per_node(Purpose p, std::uint64_t step, std::uint64_t node) {
  return ((static_cast<std::uint64_t>(p) + 1) << 44) + (step << 32) + node;
}
}  // namespace streams

}  // namespace meshfree
