#include "fbm/rng.hpp"

#include <cmath>

#include <boost/math/special_functions/erf.hpp>

#include "fbm/errors.hpp"

namespace fbm {

namespace {

std::seed_seq make_seed_seq(std::uint64_t seed, std::uint64_t stream) {
    return std::seed_seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                         static_cast<std::uint32_t>(seed >> 32),
                         static_cast<std::uint32_t>(stream & 0xffffffffu),
                         static_cast<std::uint32_t>(stream >> 32)};
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
    auto seq = make_seed_seq(seed, stream);
    return std::mt19937_64(seq);
}

}  // namespace

NormalStream::NormalStream(std::uint64_t seed, std::uint64_t stream)
    : engine_(make_engine(seed, stream)) {}

double NormalStream::uniform() {
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double NormalStream::normal() { return standard_normal_quantile(uniform()); }

void NormalStream::fill(std::span<double> out) {
    for (double& v : out) v = normal();
}

double standard_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw ValidationError("normal quantile needs p in (0, 1)");
    }
    return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace fbm
