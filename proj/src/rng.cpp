#include "becphase/rng.hpp"

namespace becphase {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline double to_unit(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

inline std::uint64_t join(std::uint32_t hi, std::uint32_t lo) { return (static_cast<std::uint64_t>(hi) << 32) | lo; }

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t run, StreamPurpose purpose)
    : seed_(seed),
      run_(run),
      purpose_(purpose),
      key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

PhiloxCounter CounterRng::counter_for(std::uint64_t index) const {
    // 32-bit index: a run would need more than 4e9 draws to wrap
    return {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(run_),
            static_cast<std::uint32_t>(run_ >> 32), static_cast<std::uint32_t>(purpose_)};
}

CounterRng::result_type CounterRng::operator()() {
    if (buffered_ == 0) {
        const auto out = philox4x32_10(counter_for(next_++), key_);
        buffer_ = {join(out[0], out[1]), join(out[2], out[3])};
        buffered_ = 2;
    }
    return buffer_[static_cast<std::size_t>(2 - buffered_--)];
}

double CounterRng::uniform() { return to_unit((*this)()); }

double CounterRng::uniform_at(std::uint64_t step) const {
    const auto out = philox4x32_10(counter_for(step), key_);
    return to_unit(join(out[0], out[1]));
}

}  // namespace becphase
