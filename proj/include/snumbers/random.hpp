#pragma once

#include <cstdint>
#include <random>

namespace snumbers {

/// Generator for one trial of a seeded experiment. Depends only on
/// (seed, trial), so trials can run in any order.
inline std::mt19937_64 trial_engine(std::uint64_t seed, int trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  return std::mt19937_64(seq);
}

}  // namespace snumbers
