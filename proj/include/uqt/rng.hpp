#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace uqt {

/// PCG32 (O'Neill, XSH-RR variant). Chosen over std::mt19937 because its
/// output sequence is fully pinned by this header, so identical seeds give
/// bitwise-identical streams on every platform and standard library.
class Pcg32 {
public:
    explicit Pcg32(std::uint64_t seed, std::uint64_t stream = kDefaultStream) {
        state_ = 0u;
        inc_ = (stream << 1u) | 1u;
        next_u32();
        state_ += seed;
        next_u32();
    }

    std::uint32_t next_u32() {
        const std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        const auto rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
    }

    /// Uniform double in [0, 1), 32-bit resolution.
    double uniform() {
        return static_cast<double>(next_u32()) * 0x1p-32;
    }

    /// Standard normal via Box-Muller, cosine branch only. One uniform pair
    /// is consumed per call and the sine counterpart is discarded, which
    /// keeps the draw order trivial to document: every normal costs exactly
    /// two uniforms.
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    static constexpr std::uint64_t kDefaultStream = 0xda3e39cb94b95bdbULL;

private:
    std::uint64_t state_;
    std::uint64_t inc_;
};

}  // namespace uqt
