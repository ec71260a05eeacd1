#pragma once

#include <cstdint>

namespace obst {

/// SplitMix64 finalizer. Used to fan a master seed out into independent
/// per-stream seeds: seed(stream, i) = mix(mix(master ^ stream) + i).
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index = 0) {
    return mix64(mix64(master ^ mix64(stream)) + index);
}

/// Stream tags keep the consumers of one master seed apart.
namespace seed_stream {
inline constexpr std::uint64_t kHostTrees = 1;
inline constexpr std::uint64_t kOverlayRng = 2;
inline constexpr std::uint64_t kGuest = 3;
inline constexpr std::uint64_t kSequence = 4;
inline constexpr std::uint64_t kChurn = 5;
inline constexpr std::uint64_t kFailures = 6;
inline constexpr std::uint64_t kReplica = 7;
}  // namespace seed_stream

}  // namespace obst
