#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fbm/core_model.hpp"

namespace fbm {

/// sqrt(2/pi): E|N(0,1)|.
inline constexpr double kMeanAbsNormal = 0.79788456080286535588;
/// The rounded constant printed alongside Q(H); selectable for compatibility.
inline constexpr double kCompatNormalizingConstant = 0.8;

struct MomentStatistics {
    double r1 = 0.0;  ///< (1/n) sum |y_k|
    double r2 = 0.0;  ///< (1/n) sum y_k^2
    std::size_t n = 0;
};

MomentStatistics moment_statistics(const IncrementSeries& y);

/// R_jn = (1/n) sum |y_k|^j.
double abs_moment(const IncrementSeries& y, unsigned j);

/// E R_jn = sigma^j / n^{jH} * 2^{j/2} Gamma((j+1)/2) / sqrt(pi).
double expected_moment(std::size_t n, unsigned j, HurstExponent hurst, Volatility sigma);

/// sigma estimate with known H: n^H sqrt(pi/2) R_1n.
Volatility sigma_hat_1(double r1n, std::size_t n, HurstExponent hurst);

/// H estimate with known sigma: ln(sqrt(2/pi) sigma / R_1n) / ln n.
/// Throws EstimationError when the result falls outside (0, 1).
HurstExponent hurst_hat_known_sigma(double r1n, std::size_t n, Volatility sigma);

/// sqrt(n^{2H-1} (S_H^{-1} y, y)); its square is unbiased for sigma^2.
Volatility sigma_hat_2(const IncrementSeries& y, HurstExponent hurst);

/// Q(H) = (c / R_1n) sqrt((S_H^{-1} y, y) / n).
double q_statistic(const IncrementSeries& y, HurstExponent trial,
                   double normalizing_constant = kMeanAbsNormal);

/// How the minimizer of |Q(H) - 1| is picked from the grid profile.
///
/// Q(1/2) = sqrt((2/pi) / d(y)) is close to 1 for every Gaussian series, so
/// |Q - 1| has a root near 1/2 whatever the true H. `nontrivial_crossing`
/// locates the crossings of Q = 1 on the grid and, when there are several,
/// keeps the one farthest from 1/2. `global_argmin` is the plain minimizer.
enum class RootSelection { nontrivial_crossing, global_argmin };

struct EstimatorOptions {
    double normalizing_constant = kMeanAbsNormal;
    RootSelection selection = RootSelection::nontrivial_crossing;
};

struct ProfilePoint {
    double hurst = 0.0;
    double q = 0.0;
};

struct HurstEstimate {
    HurstExponent hurst{0.5};
    Volatility sigma{1.0};
    double q_at_min = 0.0;
    double grid_step = 0.0;
    std::vector<ProfilePoint> profile;
    /// Grid points skipped because the matrix could not be factored.
    std::vector<std::string> diagnostics;
};

/// Grid {step, 2 step, ...} restricted to [0.01, 0.99].
std::vector<double> hurst_grid(double grid_step);

/// H-hat = argmin |Q(H) - 1| over hurst_grid(grid_step), sigma-hat from
/// sigma_hat_2 at H-hat. grid_step must lie in (0, 0.1].
HurstEstimate estimate_hurst(const IncrementSeries& y, double grid_step = 0.01,
                             const EstimatorOptions& options = {});

/// Same search over an explicit ascending grid.
HurstEstimate estimate_hurst_on_grid(const IncrementSeries& y, std::span<const double> grid,
                                     const EstimatorOptions& options = {});

/// d(y) = R_1n^2 / R_2n; 2/pi for Gaussian data.
double kurtosis_ratio(const IncrementSeries& y);

}  // namespace fbm
