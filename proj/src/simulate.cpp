#include "fbm/simulate.hpp"

#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "fbm/rng.hpp"

namespace fbm {

namespace {

constexpr double kOrbitTolerance = 1e-12;

std::vector<double> energy_normalized(std::span<const double> v) {
    const double energy =
        std::inner_product(v.begin(), v.end(), v.begin(), 0.0) / static_cast<double>(v.size());
    if (!(energy > 0.0)) throw DegenerateInputError("cannot energy-normalize a zero sequence");
    const double scale = 1.0 / std::sqrt(energy);
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * scale;
    return out;
}

}  // namespace

FbmGenerator::FbmGenerator(std::size_t n, HurstExponent hurst, Volatility sigma)
    : n_(n), hurst_(hurst), sigma_(sigma) {
    if (n == 0) throw ValidationError("grid size must be positive");
    if (n > kMaxSimulationSize) {
        throw ValidationError("grid size " + std::to_string(n) + " exceeds the exact-simulation limit " +
                              std::to_string(kMaxSimulationSize));
    }
    const auto s = increment_correlation_matrix(n, hurst);
    const double scale =
        sigma.value() / std::pow(static_cast<double>(n), hurst.value());
    factor_ = scale * s.factor();
}

IncrementSeries FbmGenerator::increments_from_normals(std::span<const double> normals) const {
    if (normals.size() != n_) {
        throw ValidationError("expected " + std::to_string(n_) + " normals, got " +
                              std::to_string(normals.size()));
    }
    const Eigen::Map<const Eigen::VectorXd> eps(normals.data(), static_cast<Eigen::Index>(n_));
    const Eigen::VectorXd y = factor_.triangularView<Eigen::Lower>() * eps;
    return IncrementSeries(std::vector<double>(y.data(), y.data() + y.size()));
}

Series FbmGenerator::path_from_normals(std::span<const double> normals) const {
    return increments_from_normals(normals).integrate(0.0);
}

IncrementSeries FbmGenerator::increments(std::uint64_t seed) const {
    std::vector<double> eps(n_);
    NormalStream(seed).fill(eps);
    return increments_from_normals(eps);
}

Series FbmGenerator::path(std::uint64_t seed) const { return increments(seed).integrate(0.0); }

Series generate_fbm(const SimulationSpec& spec) {
    return FbmGenerator(spec.n, spec.hurst, spec.sigma).path(spec.seed);
}

Series generate_logistic(std::size_t n, double initial) {
    if (n < 2) throw ValidationError("logistic sequence needs n >= 2");
    if (!(initial > 0.0 && initial < 1.0)) {
        throw ValidationError("logistic initial value must lie in (0, 1)");
    }
    // 0.25 -> 0.75 (fixed), 0.5 -> 1 -> 0 (fixed).
    constexpr std::array<double, 3> degenerate_start{0.25, 0.5, 0.75};
    for (double d : degenerate_start) {
        if (std::abs(initial - d) <= kOrbitTolerance) {
            throw DegenerateOrbitError("logistic initial value " + std::to_string(initial) +
                                       " leads to a fixed point");
        }
    }
    std::vector<double> u(n);
    u[0] = initial;
    for (std::size_t k = 1; k < n; ++k) {
        const double next = 4.0 * u[k - 1] * (1.0 - u[k - 1]);
        if (next <= kOrbitTolerance || std::abs(next - 0.75) <= kOrbitTolerance ||
            next >= 1.0 - kOrbitTolerance) {
            throw DegenerateOrbitError("logistic orbit reached a fixed point at step " +
                                       std::to_string(k + 1));
        }
        u[k] = next;
    }
    return Series(std::move(u));
}

MixtureResult generate_mixture(const MixtureSpec& spec) {
    if (!(spec.stochastic_share >= 0.0) || !std::isfinite(spec.stochastic_share)) {
        throw ValidationError("stochastic share must be finite and >= 0");
    }
    const std::size_t n = spec.stochastic.n;
    const auto chaotic = generate_logistic(n, spec.chaotic_initial);
    const auto path = generate_fbm(spec.stochastic);

    auto u = energy_normalized(chaotic.values());
    auto v = energy_normalized(path.values().subspan(1));

    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) x[k] = u[k] + spec.stochastic_share * v[k];
    return MixtureResult{Series(std::move(x)), std::move(u), std::move(v)};
}

}  // namespace fbm
