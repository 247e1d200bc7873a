#pragma once

#include <cmath>
#include <cstdint>

namespace cim {

// splitmix64, used both as a stand-alone mixer and to expand seeds.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// xoshiro256** with per-stream seeding. Campaigns derive one independent
// stream per trial from (campaign_seed, stream_id), so results do not depend
// on scheduling order.
class Rng {
public:
    Rng() : Rng(0, 0) {}

    Rng(uint64_t seed, uint64_t stream_id) {
        uint64_t sm = seed ^ (0xd1b54a32d192ed03ull * (stream_id + 1));
        for (auto& word : s_) word = splitmix64(sm);
        has_cached_ = false;
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in (0, 1]; never returns 0 so log() is safe.
    double next_uniform() {
        return (next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }

    // Standard normal via Box-Muller; pairs are cached so draw counts are
    // deterministic per stream.
    double next_normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u1 = next_uniform();
        double u2 = next_uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(theta);
        has_cached_ = true;
        return r * std::cos(theta);
    }

private:
    static uint64_t rotl(uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    uint64_t s_[4];
    double cached_ = 0.0;
    bool has_cached_ = false;
};

} // namespace cim
