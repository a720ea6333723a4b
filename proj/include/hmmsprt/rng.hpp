#pragma once

#include <cstdint>

namespace hmmsprt {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// xoshiro256**; platform-independent and fully determined by the seed.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64(sm);
    }

    // Stream for replica i, derived from a master seed. Streams are
    // independent for distinct i.
    static Rng stream(std::uint64_t master_seed, std::uint64_t i) {
        std::uint64_t sm = master_seed;
        std::uint64_t a = splitmix64(sm);
        sm = a ^ (0x9e3779b97f4a7c15ull * (i + 1));
        return Rng(splitmix64(sm));
    }

    std::uint64_t next() {
        auto rotl = [](std::uint64_t x, int k) {
            return (x << k) | (x >> (64 - k));
        };
        std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  private:
    std::uint64_t s_[4];
};

}  // namespace hmmsprt
