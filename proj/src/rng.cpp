#include "bell/rng.hpp"

#include <cmath>
#include <numbers>

namespace bell {

namespace {

// splitmix64 finalizer; full-period bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

RngStream RngStream::substream(std::uint64_t id) const {
    return RngStream(seed_, mix64(stream_ ^ mix64(id + 0x51ed2701a3c5e791ULL)));
}

std::uint64_t RngStream::next_u64() {
    return mix64(mix64(mix64(seed_) ^ stream_) ^ counter_++);
}

double RngStream::uniform() {
    // 53 mantissa bits, offset by half an ulp so the value is in (0,1).
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::gaussian() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(phi);
    has_cached_ = true;
    return r * std::cos(phi);
}

Eigen::MatrixXd gaussian_matrix(int rows, int cols, RngStream stream) {
    Eigen::MatrixXd g(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            g(i, j) = stream.gaussian();
    return g;
}

}  // namespace bell
