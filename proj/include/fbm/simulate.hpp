#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "fbm/core_model.hpp"

namespace fbm {

/// Largest grid handled by exact simulation (dense n x n factor).
inline constexpr std::size_t kMaxSimulationSize = 5000;

struct SimulationSpec {
    std::size_t n = 0;
    HurstExponent hurst{0.5};
    Volatility sigma{1.0};
    std::uint64_t seed = 0;
};

/// Exact fBm sampler for one (n, H, sigma). The Cholesky factor of the
/// increment covariance V = sigma^2 / n^{2H} * S is computed once, so many
/// seeds can be drawn without refactoring.
class FbmGenerator {
public:
    FbmGenerator(std::size_t n, HurstExponent hurst, Volatility sigma);

    std::size_t size() const noexcept { return n_; }
    HurstExponent hurst() const noexcept { return hurst_; }
    Volatility sigma() const noexcept { return sigma_; }

    /// Increments y = L eps with eps from NormalStream(seed).
    IncrementSeries increments(std::uint64_t seed) const;
    /// x_0 = 0, x_k = sigma B_H(k / n).
    Series path(std::uint64_t seed) const;

    /// Same maps for caller-supplied standard normals (length n).
    IncrementSeries increments_from_normals(std::span<const double> normals) const;
    Series path_from_normals(std::span<const double> normals) const;

private:
    std::size_t n_;
    HurstExponent hurst_;
    Volatility sigma_;
    Eigen::MatrixXd factor_;
};

Series generate_fbm(const SimulationSpec& spec);

/// u_1 = initial, u_{k+1} = 4 u_k (1 - u_k); returns u_1..u_n (n >= 2).
Series generate_logistic(std::size_t n, double initial);

struct MixtureSpec {
    /// Stochastic share a >= 0.
    double stochastic_share = 1.0;
    /// Logistic initial value u_1 in (0, 1).
    double chaotic_initial = 0.2;
    SimulationSpec stochastic;
};

struct MixtureResult {
    Series mixture;
    /// Energy-normalized components: (1/n) sum u^2 = (1/n) sum v^2 = 1.
    std::vector<double> chaotic;
    std::vector<double> stochastic;
};

/// x_k = u_k + a v_k, k = 1..n, both components energy-normalized.
MixtureResult generate_mixture(const MixtureSpec& spec);

}  // namespace fbm
