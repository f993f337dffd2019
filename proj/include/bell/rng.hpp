#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace bell {

/// Counter-based random stream. The sequence is a pure function of
/// (seed, stream, counter), so identical (seed, stream) pairs reproduce the
/// same samples on every platform and parallel workers can draw from
/// disjoint streams without sharing state.
class RngStream {
public:
    RngStream() = default;
    RngStream(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    /// Derived stream with an independent sample sequence.
    RngStream substream(std::uint64_t id) const;

    std::uint64_t next_u64();

    /// Uniform in the open interval (0, 1).
    double uniform();

    /// Standard normal via Box-Muller on uniform(); one value per call,
    /// the paired value is cached.
    double gaussian();

private:
    std::uint64_t seed_ = 0;
    std::uint64_t stream_ = 0;
    std::uint64_t counter_ = 0;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

/// rows x cols matrix of i.i.d. standard normals drawn from `stream`.
Eigen::MatrixXd gaussian_matrix(int rows, int cols, RngStream stream);

}  // namespace bell
