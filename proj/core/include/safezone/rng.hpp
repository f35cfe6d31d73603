#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace safezone {

// SplitMix64 finalizer, used to whiten seeds before they reach a generator.
uint64_t mix64(uint64_t x);

// Stable seed derivation. Child streams are addressed by a label plus an
// optional index, so the draws of one component never depend on how many
// draws a sibling made or on thread scheduling.
uint64_t derive_seed(uint64_t root, std::string_view label, uint64_t index = 0);

// Deterministic random stream. Wraps std::mt19937_64 (whose output sequence
// is fixed by the standard) and produces unit doubles from the top 53 bits,
// so a given seed yields identical draws on every conforming platform.
class RngStream {
public:
    explicit RngStream(uint64_t seed) : seed_(seed), gen_(mix64(seed)) {}

    uint64_t seed() const { return seed_; }

    uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double next_unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Consumes exactly one draw regardless of p.
    bool bernoulli(double p) { return next_unit() < p; }

    // Uniform in [0, bound); bound must be positive.
    int next_below(int bound) { return static_cast<int>(next_unit() * bound); }

    RngStream child(std::string_view label, uint64_t index = 0) const {
        return RngStream(derive_seed(seed_, label, index));
    }

private:
    uint64_t seed_;
    std::mt19937_64 gen_;
};

} // namespace safezone
