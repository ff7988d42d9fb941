#pragma once

#include <cstdint>
#include <random>

namespace collapse {

// Deterministic random stream: the (seed, stream_id) pair fully determines
// the draw sequence, so a trial's stream can be rebuilt on any thread, in any
// order, and replay bit-identically.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    // Independent child stream; children of distinct (stream_id, substream)
    // pairs do not collide in practice (64-bit mixed ids).
    RngStream stream(std::uint64_t substream) const;

    double gaussian(double mean, double stddev);
    double uniform();  // [0, 1)

private:
    std::uint64_t seed_ = 0;
    std::uint64_t stream_id_ = 0;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace collapse
