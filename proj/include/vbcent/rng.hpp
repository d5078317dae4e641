#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace vbcent::rng {

// splitmix64 finalizer; good avalanche, cheap.
inline std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t combine(std::uint64_t a, std::uint64_t b) {
    return mix(a ^ (mix(b) + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

// FNV-1a over the stream name.
inline std::uint64_t hash_name(std::string_view name) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : name) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Every random draw in the toolkit flows from a single root seed through
// named streams: stream_seed(root, "exp-noise/er50/s5/ns10/3/gen") and so on.
// Adding a new consumer with a new name never perturbs existing streams.
inline std::uint64_t stream_seed(std::uint64_t root, std::string_view name) {
    return combine(root, hash_name(name));
}

inline std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
    return combine(seed, index);
}

inline std::mt19937_64 engine(std::uint64_t seed) {
    return std::mt19937_64(mix(seed));
}

} // namespace vbcent::rng
