#pragma once

#include <cstdint>
#include <random>

namespace quadq {

// splitmix64 finalizer; good avalanche, cheap, and constexpr.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ (splitmix64(b) + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

constexpr std::uint64_t derive_seed(std::uint64_t seed) { return splitmix64(seed); }

// Counter-based stream derivation: the engine for a work item is a pure
// function of (seed, stream ids), so results never depend on which thread
// or in which order the item runs.
template <class... Ids>
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t head, Ids... tail) {
    return derive_seed(mix_seed(seed, head), tail...);
}

template <class... Ids>
std::mt19937_64 make_engine(std::uint64_t seed, Ids... ids) {
    return std::mt19937_64(derive_seed(seed, static_cast<std::uint64_t>(ids)...));
}

} // namespace quadq
