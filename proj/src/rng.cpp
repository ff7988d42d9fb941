#include "collapse/rng.hpp"

namespace collapse {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
    engine_.seed(splitmix64(splitmix64(seed) ^ stream_id));
}

RngStream RngStream::stream(std::uint64_t substream) const {
    return RngStream(seed_, splitmix64(stream_id_ ^ splitmix64(substream + 1)));
}

double RngStream::gaussian(double mean, double stddev) {
    return mean + stddev * normal_(engine_);
}

double RngStream::uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

}  // namespace collapse
