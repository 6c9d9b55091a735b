#pragma once

// Counter-based random streams (Philox4x32-10).
//
// A draw is a pure function of (seed, run, purpose, counter), so ensembles
// reproduce bit-for-bit whatever the worker count or scheduling.

#include <array>
#include <cstdint>
#include <limits>

namespace becphase {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

enum class StreamPurpose : std::uint32_t {
    Detection = 0,
    MixtureDraw = 1,
    Generic = 2,
};

class CounterRng {
  public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t run, StreamPurpose purpose = StreamPurpose::Generic);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    /// Sequential interface (UniformRandomBitGenerator).
    result_type operator()();
    /// Sequential uniform on [0, 1) with 53 random bits.
    double uniform();

    /// Keyed access: the uniform for a given step, independent of how many
    /// sequential draws were made.
    double uniform_at(std::uint64_t step) const;

    std::uint64_t seed() const { return seed_; }
    std::uint64_t run() const { return run_; }

  private:
    PhiloxCounter counter_for(std::uint64_t index) const;

    std::uint64_t seed_;
    std::uint64_t run_;
    StreamPurpose purpose_;
    PhiloxKey key_;
    std::uint64_t next_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int buffered_ = 0;
};

}  // namespace becphase
