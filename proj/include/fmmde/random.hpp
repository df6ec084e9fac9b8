#pragma once

#include <cstdint>
#include <random>

namespace fmmde {

using Rng = std::mt19937_64;

/// Seed for an independent stream identified by (master, index). Pure
/// function, so parallel replications do not depend on scheduling order.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index);

inline Rng make_stream(std::uint64_t master, std::uint64_t index) { return Rng(stream_seed(master, index)); }

/// Uniform on [0, 1) with 53 random bits; identical on every platform.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace fmmde
