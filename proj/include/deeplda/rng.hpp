#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace deeplda {

/// Seeded xoshiro256** generator.
///
/// The 256-bit state is expanded from the 64-bit seed with splitmix64, so
/// every seed (including 0) yields a valid, platform-independent stream.
/// Not thread-safe: confine an instance to one thread.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() noexcept;

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() noexcept;

    /// Uniform double in [lo, hi). Throws ArgumentError unless lo < hi.
    double next_uniform(double lo, double hi);

    /// Uniform integer in [0, bound). Throws ArgumentError for bound == 0.
    std::uint64_t next_below(std::uint64_t bound);

    /// Standard normal draw (Box-Muller, one value per call).
    double next_normal() noexcept;

    /// Fisher-Yates shuffle driven by next_below.
    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    /// Identity permutation of [0, n) shuffled.
    std::vector<std::size_t> permutation(std::size_t n);

private:
    std::uint64_t seed_;
    std::array<std::uint64_t, 4> s_{};
};

}  // namespace deeplda
