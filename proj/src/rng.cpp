#include "kcm/rng.hpp"

namespace kcm {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed)
    : seed_(seed), engine_(splitmix64(seed)) {}

RngStream RngStream::child(std::uint64_t tag) const {
    return RngStream(splitmix64(seed_ ^ splitmix64(tag ^ 0xA24BAED4963EE407ull)));
}

RngStream RngStream::child(std::uint64_t a, std::uint64_t b) const {
    return child(a).child(b);
}

double RngStream::normal() { return normal_(engine_); }

double RngStream::uniform01() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

std::int64_t RngStream::uniform_int(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
}

double RngStream::rademacher() {
    return (engine_() & 1ull) ? 1.0 : -1.0;
}

}  // namespace kcm
