#pragma once

#include <cstdint>
#include <vector>

namespace ltp {

// Finalizer of the splitmix64 generator. Used both as the output function
// of Rng and as the documented mix for deriving sub-seeds: results are
// identical across platforms and standard libraries, unlike the std::
// distribution helpers.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Sub-seed for a parallel work item (tree index, fold index, ...).
// Deterministic and collision-resistant; the same value is obtained no
// matter how many workers run or in which order they are scheduled.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ (0x2545f4914f6cdd1dULL * (index + 1)));
}

// Minimal counter-based PRNG (splitmix64 stream). Bit-exact everywhere.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() { return splitmix64(state_++); }

    // Unbiased integer in [0, n) via Lemire's multiply-shift with rejection.
    std::uint64_t next_below(std::uint64_t n) {
        std::uint64_t x = next();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                x = next();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Uniform double in [0, 1).
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::uint64_t state_;
};

}  // namespace ltp
