#pragma once

#include <cstdint>

namespace mvenet {

/// xorshift64* generator seeded through one SplitMix64 step. The exact
/// recurrences are written out in docs/folds.md; outputs are identical on
/// every platform.
class Xorshift64Star {
public:
    explicit Xorshift64Star(std::uint64_t seed) noexcept;

    std::uint64_t next() noexcept;
    /// Uniform integer in [0, bound) by rejection; bound must be positive.
    std::uint64_t bounded(std::uint64_t bound) noexcept;

private:
    std::uint64_t state_;
};

}  // namespace mvenet
