#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace overlap_lab {

/// Philox4x32-10 block: 4 x 32-bit counter, 2 x 32-bit key.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key) noexcept;

/// Counter-based random stream. The key is the seed; the upper half of the
/// 128-bit counter is the stream id, so distinct stream ids never overlap.
/// Satisfies UniformRandomBitGenerator.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept : seed_(seed), stream_id_(stream_id) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
    /// Uniform on (0, 1].
    double uniform_open0() noexcept { return 1.0 - uniform(); }
    /// Standard normal (Marsaglia polar method).
    double normal() noexcept;

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t stream_id() const noexcept { return stream_id_; }
    [[nodiscard]] std::uint64_t block_counter() const noexcept { return block_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    unsigned buffered_ = 0;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

} // namespace overlap_lab
