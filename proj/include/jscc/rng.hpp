#pragma once

#include <cstdint>
#include <random>

namespace jscc {

/// SplitMix64 finalizer; used to derive stream ids from structured keys.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_stream(std::uint64_t a, std::uint64_t b) noexcept
{
    return mix64(mix64(a) ^ (b + 0x632be59bd9b4e019ULL));
}

/// A reproducible random stream identified by (seed, stream_id). Identical
/// pairs give identical sequences; distinct stream ids seed the Mersenne
/// Twister through disjoint seed_seq inputs.
class RngStream {
public:
    using engine_type = std::mt19937_64;

    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id))
    {
    }

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t stream_id() const noexcept { return stream_id_; }

    engine_type& engine() noexcept { return engine_; }

    /// Standard normal draw.
    double normal() { return normal_(engine_); }

    /// Uniform draw on [0, 1).
    double uniform() { return uniform_(engine_); }

    bool coin() { return (engine_() >> 63) != 0; }

private:
    static engine_type make_engine(std::uint64_t seed, std::uint64_t stream_id)
    {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream_id),
                          static_cast<std::uint32_t>(stream_id >> 32)};
        return engine_type(seq);
    }

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    engine_type engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

} // namespace jscc
