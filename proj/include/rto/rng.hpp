#pragma once

// Keyed random streams. Every stream is identified by a tuple
// (master seed, run index, purpose, entity ids...) and seeded by hashing that
// tuple, so the draws a process sees never depend on the order in which
// other processes consumed theirs.

#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <string_view>

namespace rto {

constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view text) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Anything that yields uniforms on (0, 1]. Samplers are written against this
/// so tests can substitute forced draws.
template <typename T>
concept UniformSource = requires(T& t) {
    { t.uniform() } -> std::convertible_to<double>;
};

/// Box-Muller transform; consumes two uniforms per variate.
template <UniformSource Rng>
double standard_normal(Rng& rng) {
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// xoshiro256** generator seeded from a hashed stream key.
class Stream {
public:
    Stream(std::uint64_t master_seed, std::uint64_t run_index, std::string_view purpose,
           std::initializer_list<std::uint64_t> entity = {}) noexcept;

    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on (0, 1], never exactly zero so logarithms stay finite.
    double uniform() noexcept {
        return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    }

    double normal() noexcept { return standard_normal(*this); }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

/// Derives streams for one replication.
class RngPlan {
public:
    RngPlan(std::uint64_t master_seed, std::uint64_t run_index) noexcept
        : master_seed_(master_seed), run_index_(run_index) {}

    Stream stream(std::string_view purpose, std::initializer_list<std::uint64_t> entity = {}) const noexcept {
        return Stream(master_seed_, run_index_, purpose, entity);
    }

    std::uint64_t master_seed() const noexcept { return master_seed_; }
    std::uint64_t run_index() const noexcept { return run_index_; }

private:
    std::uint64_t master_seed_;
    std::uint64_t run_index_;
};

}  // namespace rto
