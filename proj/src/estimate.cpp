#include "fbm/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace fbm {

namespace {

double mean_abs(std::span<const double> y) {
    double acc = 0.0;
    for (double v : y) acc += std::abs(v);
    return acc / static_cast<double>(y.size());
}

double positive_r1(const IncrementSeries& y) {
    const double r1 = mean_abs(y.values());
    if (!(r1 > 0.0)) throw DegenerateInputError("all increments are zero");
    return r1;
}

}  // namespace

MomentStatistics moment_statistics(const IncrementSeries& y) {
    MomentStatistics m;
    m.n = y.size();
    for (double v : y.values()) {
        m.r1 += std::abs(v);
        m.r2 += v * v;
    }
    m.r1 /= static_cast<double>(m.n);
    m.r2 /= static_cast<double>(m.n);
    return m;
}

double abs_moment(const IncrementSeries& y, unsigned j) {
    if (j == 0) throw ValidationError("moment order must be positive");
    double acc = 0.0;
    for (double v : y.values()) acc += std::pow(std::abs(v), static_cast<double>(j));
    return acc / static_cast<double>(y.size());
}

double expected_moment(std::size_t n, unsigned j, HurstExponent hurst, Volatility sigma) {
    if (n == 0 || j == 0) throw ValidationError("n and j must be positive");
    const double jd = static_cast<double>(j);
    const double scale =
        std::pow(sigma.value(), jd) / std::pow(static_cast<double>(n), jd * hurst.value());
    return scale * std::pow(2.0, jd / 2.0) * std::tgamma((jd + 1.0) / 2.0) /
           std::sqrt(std::numbers::pi);
}

Volatility sigma_hat_1(double r1n, std::size_t n, HurstExponent hurst) {
    if (!(r1n > 0.0)) throw DegenerateInputError("R_1n must be positive");
    if (n == 0) throw ValidationError("n must be positive");
    return Volatility(std::pow(static_cast<double>(n), hurst.value()) *
                      std::sqrt(std::numbers::pi / 2.0) * r1n);
}

HurstExponent hurst_hat_known_sigma(double r1n, std::size_t n, Volatility sigma) {
    if (!(r1n > 0.0)) throw DegenerateInputError("R_1n must be positive");
    if (n < 2) throw ValidationError("n must be at least 2");
    const double h = std::log(kMeanAbsNormal * sigma.value() / r1n) /
                     std::log(static_cast<double>(n));
    if (!(h > 0.0 && h < 1.0)) {
        throw EstimationError("known-sigma Hurst estimate " + std::to_string(h) +
                              " falls outside (0, 1)");
    }
    return HurstExponent(h);
}

Volatility sigma_hat_2(const IncrementSeries& y, HurstExponent hurst) {
    const double n = static_cast<double>(y.size());
    const double qf = increment_quadratic_form(y.values(), hurst);
    if (!(qf > 0.0)) throw DegenerateInputError("all increments are zero");
    return Volatility(std::sqrt(std::pow(n, hurst.twice() - 1.0) * qf));
}

double q_statistic(const IncrementSeries& y, HurstExponent trial, double normalizing_constant) {
    const double r1 = positive_r1(y);
    const double n = static_cast<double>(y.size());
    const double qf = increment_quadratic_form(y.values(), trial);
    return normalizing_constant / r1 * std::sqrt(qf / n);
}

std::vector<double> hurst_grid(double grid_step) {
    if (!(grid_step > 0.0 && grid_step <= 0.1)) {
        throw ValidationError("grid step must lie in (0, 0.1], got " + std::to_string(grid_step));
    }
    std::vector<double> grid;
    for (int i = 1;; ++i) {
        // Round to kill accumulation noise (0.1 * 3 = 0.30000000000000004).
        const double h = std::round(i * grid_step * 1e12) / 1e12;
        if (h >= 1.0) break;
        if (h >= 0.01 - 1e-12 && h <= 0.99 + 1e-12) grid.push_back(h);
    }
    return grid;
}

HurstEstimate estimate_hurst_on_grid(const IncrementSeries& y, std::span<const double> grid,
                                     const EstimatorOptions& options) {
    positive_r1(y);
    if (grid.empty()) throw ValidationError("empty Hurst grid");

    HurstEstimate est;
    est.grid_step = grid.size() > 1 ? grid[1] - grid[0] : 0.0;
    for (double h : grid) {
        try {
            est.profile.push_back({h, q_statistic(y, HurstExponent(h), options.normalizing_constant)});
        } catch (const FactorizationError& e) {
            est.diagnostics.push_back("H=" + std::to_string(h) + " skipped: " + e.message());
        }
    }
    if (est.profile.empty()) {
        throw EstimationError("Q(H) could not be evaluated at any grid point");
    }

    const auto& p = est.profile;
    auto gap = [&](std::size_t i) { return std::abs(p[i].q - 1.0); };

    // Plain argmin; strict comparison keeps the smaller H on ties.
    std::size_t best = 0;
    for (std::size_t i = 1; i < p.size(); ++i) {
        if (gap(i) < gap(best)) best = i;
    }

    if (options.selection == RootSelection::nontrivial_crossing) {
        std::vector<std::size_t> crossings;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
            if ((p[i].q - 1.0) * (p[i + 1].q - 1.0) <= 0.0) {
                const std::size_t c = gap(i + 1) < gap(i) ? i + 1 : i;
                if (crossings.empty() || crossings.back() != c) crossings.push_back(c);
            }
        }
        if (crossings.size() >= 2) {
            std::size_t pick = crossings.front();
            for (std::size_t c : crossings) {
                if (std::abs(p[c].hurst - 0.5) > std::abs(p[pick].hurst - 0.5)) pick = c;
            }
            best = pick;
        }
    }

    est.hurst = HurstExponent(p[best].hurst);
    est.q_at_min = p[best].q;
    est.sigma = sigma_hat_2(y, est.hurst);
    return est;
}

HurstEstimate estimate_hurst(const IncrementSeries& y, double grid_step,
                             const EstimatorOptions& options) {
    const auto grid = hurst_grid(grid_step);
    auto est = estimate_hurst_on_grid(y, grid, options);
    est.grid_step = grid_step;
    return est;
}

double kurtosis_ratio(const IncrementSeries& y) {
    const auto m = moment_statistics(y);
    if (!(m.r2 > 0.0)) throw DegenerateInputError("all increments are zero");
    return m.r1 * m.r1 / m.r2;
}

}  // namespace fbm
