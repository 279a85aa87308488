#pragma once

#include <cstdint>
#include <random>

namespace kcm {

std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic random stream addressed by a 64-bit seed.
///
/// Child streams are derived from the seed alone, never from draw position,
/// so `stream.child(t)` yields the same substream no matter how many values
/// the parent has already produced. This is what makes bootstrap draws and
/// Monte-Carlo trials independent of scheduling.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed);

    RngStream child(std::uint64_t tag) const;
    RngStream child(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t seed() const { return seed_; }

    double normal();
    double uniform01();
    /// Uniform integer in [lo, hi], inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
    /// +1 or -1 with equal probability.
    double rademacher();

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace kcm
