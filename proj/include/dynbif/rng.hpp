#pragma once

// Counter-based splitmix64 stream: value k of stream (seed, run) is a pure
// function of its indices, so sweep entries draw reproducibly in any order.

#include <cstdint>

namespace dynbif {

constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t run) : key_(splitmix64(seed ^ splitmix64(run))) {}
    std::uint64_t next() { return splitmix64(key_ + counter_++ * 0xd1b54a32d192ed03ULL); }
    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace dynbif
