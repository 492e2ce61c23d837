#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace mggpo {

/// Deterministic random stream. Draws are defined in terms of raw 64-bit engine
/// output so sequences do not depend on the standard library's distributions.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

    /// Derive an independent substream. The child seed is
    /// splitmix64(seed ^ fnv1a(purpose)), so new purposes never shift the
    /// draws of existing ones.
    [[nodiscard]] static RngStream split(std::uint64_t master_seed, std::string_view purpose);
    [[nodiscard]] RngStream split(std::string_view purpose) const { return split(seed_, purpose); }

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). Uses rejection to avoid modulo bias.
    std::uint64_t below(std::uint64_t n);

    bool coin() { return (engine_() >> 63) != 0; }

    /// Textual engine state; restore() reproduces the exact continuation.
    [[nodiscard]] std::string state() const;
    void restore(const std::string& state);

    friend bool operator==(const RngStream& a, const RngStream& b) {
        return a.seed_ == b.seed_ && a.engine_ == b.engine_;
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x) noexcept;

} // namespace mggpo
