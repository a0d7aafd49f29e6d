#ifndef F2LA_PRNG_HPP
#define F2LA_PRNG_HPP

#include <cstdint>

namespace f2la {

/// Deterministic 64-bit generator used for all random matrix sampling.
///
/// The state transition is the xorshift64* recurrence
///
///     x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27;  output = x * 0x2545F4914F6CDD1D
///
/// which involves only shifts, xors and one integer multiply, so a given
/// seed produces the same stream on every platform and in every language
/// that reimplements it. A zero seed is remapped to a fixed nonzero
/// constant (the all-zero state is a fixed point of the recurrence).
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept
        : state_(seed != 0 ? seed : 0x9E3779B97F4A7C15ull) {}

    std::uint64_t next() noexcept {
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545F4914F6CDD1Dull;
    }

    /// Uniform draw in [0, n). n must be nonzero.
    std::uint64_t next_below(std::uint64_t n) noexcept { return next() % n; }

    /// One biased coin flip: true with probability `density`.
    /// density <= 0 never fires, density >= 1 always fires.
    bool next_bernoulli(double density) noexcept {
        if (density <= 0.0) { next(); return false; }
        if (density >= 1.0) { next(); return true; }
        // threshold = density * 2^64, compared against a full-width draw
        const double scaled = density * 18446744073709551616.0;
        return next() < static_cast<std::uint64_t>(scaled);
    }

private:
    std::uint64_t state_;
};

} // namespace f2la

#endif
