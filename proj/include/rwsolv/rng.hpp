#pragma once

#include <cstdint>

namespace rwsolv {

/// SplitMix64 step (Steele, Lea, Flood mixing constants).
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-seeded per-walk generator. A walk's stream depends only on
/// (master seed, stream tag, node, walk index), so builds are reproducible
/// regardless of how walks are scheduled.
class WalkRng {
public:
    WalkRng(std::uint64_t master, std::uint64_t stream, std::uint64_t node,
            std::uint64_t walk_index) {
        state_ = master;
        state_ = splitmix64(state_) ^ (stream * 0x9e3779b97f4a7c15ULL);
        state_ = splitmix64(state_) ^ (node * 0xbf58476d1ce4e5b9ULL);
        state_ = splitmix64(state_) ^ (walk_index * 0x94d049bb133111ebULL);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

}  // namespace rwsolv
