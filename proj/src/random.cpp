#include "meshfree/random.hpp"

#include <cmath>

namespace meshfree {
namespace {

// Philox2x64-10 round constants (Salmon et al., "Parallel random numbers:
// as easy as 1, 2, 3").
constexpr std::uint64_t kPhiloxM = 0xD2B74407B1CE6E93ull;
constexpr std::uint64_t kPhiloxW = 0x9E3779B97F4A7C15ull;

inline void philox_round(std::uint64_t& c0, std::uint64_t& c1, std::uint64_t key) {
  const unsigned __int128 prod = static_cast<unsigned __int128>(kPhiloxM) * c0;
  const std::uint64_t lo = static_cast<std::uint64_t>(prod);
  const std::uint64_t hi = static_cast<std::uint64_t>(prod >> 64);
  c0 = hi ^ key ^ c1;
  c1 = lo;
}

// 128 uniform bits for counter (index, stream) under key seed.
inline void philox2x64(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                       std::uint64_t& out0, std::uint64_t& out1) {
  std::uint64_t c0 = index;
  std::uint64_t c1 = stream;
  std::uint64_t key = seed;
  for (int r = 0; r < 10; ++r) {
    philox_round(c0, c1, key);
    key += kPhiloxW;
  }
  out0 = c0;
  out1 = c1;
}

// Map 64 bits to (0,1): 53-bit mantissa with the low bit forced, so the
// result is never 0 (safe under log) and never 1.
inline double bits_to_unit(std::uint64_t bits) {
  return static_cast<double>((bits >> 11) | 1ull) * 0x1.0p-53;
}

}  // namespace

double RandomSource::uniform_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t w0, w1;
  philox2x64(seed, stream, index, w0, w1);
  return bits_to_unit(w0);
}

double RandomSource::normal_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t w0, w1;
  philox2x64(seed, stream, index, w0, w1);
  const double u1 = bits_to_unit(w0);
  const double u2 = bits_to_unit(w1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace meshfree
