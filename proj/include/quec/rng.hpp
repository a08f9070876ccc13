#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace quec {

// Seeded generator used by every stochastic routine.
// Engine is std::mt19937_64; seeds for (master, stream) pairs are derived
// through SplitMix64 so workers get independent, reproducible streams.
// Uniform and normal variates are produced here rather than through the
// std distributions, whose output is implementation-defined.
class Rng {
public:
    static constexpr const char* kName = "mt19937_64+splitmix64/v1";

    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64() { return eng_(); }
    double uniform();                     // [0, 1)
    double normal();                      // standard normal, Box-Muller
    std::size_t below(std::size_t n);     // uniform integer in [0, n)
    std::size_t categorical(const std::vector<double>& probs);

    // Child stream; independent of how many draws the parent has made.
    Rng split(std::uint64_t stream) const { return Rng(seed_, stream_ * 1000003ULL + stream + 1); }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 eng_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace quec
