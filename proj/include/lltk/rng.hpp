#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

namespace lltk {

// Counter-based splittable generator in the SplittableRandom style: the
// state walks an odd per-stream increment and each output is a finalizer
// mix of the state. Identical (seed, stream) gives an identical sequence on
// every platform; distinct streams are statistically independent.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();

    // 53-bit uniform in [0, 1).
    double uniform01();

    // Standard normal via the polar (Marsaglia) method; second value cached.
    double normal();

    // Unbiased integer in [0, n), n >= 1.
    std::uint64_t below(std::uint64_t n);

    // Fisher-Yates shuffle of indices 0..n-1.
    std::vector<std::size_t> permutation(std::size_t n);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

private:
    std::uint64_t seed_ = 0;
    std::uint64_t stream_ = 0;
    std::uint64_t state_ = 0;
    std::uint64_t gamma_ = 0;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

}  // namespace lltk
