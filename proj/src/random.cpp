#include "qgate/random.hpp"

#include <cmath>

namespace qgate {

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RandomSource RandomSource::derive(std::uint64_t index) const noexcept {
    return {seed, mix64(stream ^ mix64(index + 0x632be59bd9b4e019ULL))};
}

RandomStream::RandomStream(RandomSource source) noexcept
    : key_(mix64(mix64(source.seed) ^ (source.stream * 0xd1342543de82ef95ULL + 1))) {}

RandomStream::result_type RandomStream::operator()() noexcept {
    // Two rounds of the SplitMix64 finalizer over key + counter * gamma.
    const std::uint64_t x = key_ + (++counter_) * 0x9e3779b97f4a7c15ULL;
    return mix64(mix64(x) ^ key_);
}

double RandomStream::uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
}

cplx RandomStream::complex_normal() noexcept {
    constexpr double kScale = 0.70710678118654752440;
    const double re = normal();
    const double im = normal();
    return {re * kScale, im * kScale};
}

}  // namespace qgate
