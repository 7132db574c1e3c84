#pragma once

#include <cstdint>
#include <string_view>

namespace resfin {

// FNV-1a, 64-bit. Stable across platforms; used to stamp contexts and run
// manifests so certificates can detect what they were computed against.
inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ull) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace resfin
