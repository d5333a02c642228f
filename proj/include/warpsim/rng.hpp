#pragma once

#include <cstdint>
#include <string_view>

namespace warpsim {

// splitmix64; platform-independent and cheap. Each consumer gets its own
// stream derived from (seed, label) so trace generation and randomized
// policies never share state.
class Rng {
public:
    Rng() = default;
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound). bound must be nonzero.
    std::uint64_t next_below(std::uint64_t bound) {
        // Rejection sampling keeps the distribution exact for any bound.
        std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t v = next();
            if (v >= threshold) return v % bound;
        }
    }

    double next_unit() {
        return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0);
    }

    bool next_bernoulli(double p) { return next_unit() < p; }

private:
    std::uint64_t state_ = 0;
};

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL);
std::uint64_t hash_mix(std::uint64_t a, std::uint64_t b);

// Independent stream for a named consumer.
Rng make_stream(std::uint64_t seed, std::string_view label);

}  // namespace warpsim
