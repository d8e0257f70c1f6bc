#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace conflictforge {

// SHA-256 of arbitrary bytes, lowercase hex. Used for cache keys, prompt
// digests and golden-file pinning, so it must match the standard test vectors.
std::string sha256_hex(std::string_view data);

// splitmix64 step; also serves as a seed scrambler for per-sample seeds.
std::uint64_t splitmix64(std::uint64_t& state);

// Stable combination of a master seed and an index.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// Small deterministic RNG. Not std::mt19937 on purpose: output must be
// identical across platforms and standard library versions, because dataset
// bytes are golden-file pinned.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() { return splitmix64(state_); }

    // Unbiased-enough bounded draw via 128-bit multiply-shift.
    std::uint64_t bounded(std::uint64_t n);

    // k distinct values from [0, n), in draw order.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

private:
    std::uint64_t state_;
};

}  // namespace conflictforge
