#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace cval {

// Deterministic per-task RNG streams.  A stream is identified by the master
// seed plus a path of integer ids (replicate, repetition, ...).  The same
// (seed, path) always yields the same generator state, independent of the
// order in which streams are created or consumed.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class RngSeed {
public:
    explicit RngSeed(std::uint64_t master) : state_(splitmix64(master ^ 0x5cf9e7a3d2b18c4fULL)) {}

    // Derive a child seed for a sub-task.
    RngSeed child(std::uint64_t stream_id) const {
        RngSeed s(*this);
        s.state_ = splitmix64(s.state_ ^ splitmix64(stream_id + 0x1f83d9abfb41bd6bULL));
        return s;
    }

    RngSeed child(std::initializer_list<std::uint64_t> path) const {
        RngSeed s(*this);
        for (auto id : path) s = s.child(id);
        return s;
    }

    std::uint64_t value() const { return state_; }

    std::mt19937_64 engine() const { return std::mt19937_64(state_); }

private:
    std::uint64_t state_;
};

}  // namespace cval
