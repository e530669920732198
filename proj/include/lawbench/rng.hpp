#pragma once

#include <array>
#include <cstdint>

namespace lawbench {

/// 64-bit seed wrapper. Identical seed plus identical call sequence yields a
/// bit-identical stream.
struct RngSeed {
    std::uint64_t value = 0;
};

/// SplitMix64 finalizer, used for seeding and for deriving child seeds.
std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                       std::uint64_t c = 0, std::uint64_t d = 0, std::uint64_t e = 0);

/// xoshiro256++ (Blackman & Vigna), state filled by SplitMix64 from the seed.
/// Normal variates use the Marsaglia polar method so streams depend only on
/// this class and libm's log/sqrt, never on the standard library's
/// distribution implementations.
class Rng {
public:
    explicit Rng(RngSeed seed);
    explicit Rng(std::uint64_t seed) : Rng(RngSeed{seed}) {}

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    double normal();

private:
    std::array<std::uint64_t, 4> s_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace lawbench
