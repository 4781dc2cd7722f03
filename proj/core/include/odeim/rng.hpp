#pragma once

#include <cstdint>
#include <random>

namespace odeim {

using Rng = std::mt19937_64;

// splitmix64 step; used only to derive stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic seed for work item (a, b, c) under a master seed. Every
// experiment cell draws from its own stream derived this way, so parallel
// sweeps produce bitwise-identical results to serial ones.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = master;
    s ^= splitmix64(s) + a;
    s ^= splitmix64(s) + b;
    s ^= splitmix64(s) + c;
    return splitmix64(s);
}

}  // namespace odeim
