#ifndef OSEBA_RANDOM_HPP_
#define OSEBA_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace oseba {

// Seeded generator with a portable output sequence.
//
// std::mt19937_64's raw output is fixed by the standard, but the standard
// distributions are not, so the mappings to doubles and bounded integers are
// spelled out here. Same seed, same numbers, on every platform.
class DeterministicRng {
public:
    explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 bits of resolution.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    // Uniform integer in [0, bound), bound > 0. Rejection sampling, no modulo bias.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % bound;
    }

private:
    std::mt19937_64 engine_;
};

// Fisher-Yates, walking from the back: for i = n-1 .. 1 swap v[i] with
// v[j], j uniform in [0, i].
template <class T>
void deterministic_shuffle(std::vector<T>& v, DeterministicRng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.next_below(i));
        using std::swap;
        swap(v[i - 1], v[j]);
    }
}

}  // namespace oseba

#endif  // OSEBA_RANDOM_HPP_
