#pragma once

#include <cstdint>
#include <string_view>

namespace websample {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a64(std::string_view text, std::uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

/// Per-stage seed: hash(global_seed, stage, index). Adding a stage never
/// perturbs the seeds of existing ones.
inline constexpr std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view stage, std::uint64_t index = 0) {
    return splitmix64(splitmix64(global_seed ^ fnv1a64(stage)) + index);
}

} // namespace websample
