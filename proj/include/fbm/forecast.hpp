#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fbm/core_model.hpp"

namespace fbm {

struct ForecastResult {
    std::vector<double> predictions;
    /// delta^2 = D - (A^{-1} B, B) for the first step, in the units of S.
    double one_step_mse = 0.0;
    /// True when delta^2 came out negative by rounding and was clamped to 0.
    bool mse_clamped = false;
    std::size_t learning_size = 0;
    std::size_t horizon = 0;
    double jitter_used = 0.0;
    double condition_estimate = 1.0;
    double relative_residual = 0.0;
    std::vector<std::string> warnings;
};

/// Conditional mean of the last r coordinates of a zero-mean Gaussian vector
/// with covariance S given the first m. The learning block A is factored once,
/// so one forecaster serves any number of observation vectors.
class ConditionalForecaster {
public:
    ConditionalForecaster(const CorrelationMatrix& covariance, std::size_t horizon);

    std::size_t learning_size() const noexcept { return m_; }
    std::size_t horizon() const noexcept { return r_; }
    double one_step_mse() const noexcept { return one_step_mse_; }

    /// C A^{-1} xi; xi has length m.
    ForecastResult predict(std::span<const double> observed) const;

private:
    std::size_t m_;
    std::size_t r_;
    std::optional<CorrelationMatrix> learning_;
    Eigen::MatrixXd cross_;  // C, r x m
    double one_step_mse_ = 0.0;
    bool mse_clamped_ = false;
    std::vector<std::string> warnings_;
};

/// One-shot form of ConditionalForecaster. S has dimension observed.size() + r.
ForecastResult conditional_forecast(std::span<const double> observed,
                                    const CorrelationMatrix& covariance, std::size_t horizon);

/// Forecast x_{m+1..m+r} of an fBm path from x_1..x_m (x_0 = 0 is the origin
/// and is not part of the conditioning set).
ForecastResult forecast_fbm_values(const Series& path, HurstExponent hurst, std::size_t m,
                                   std::size_t r);

/// Forecast y_{m+1..m+r} from y_1..y_m.
ForecastResult forecast_fbm_increments(const IncrementSeries& y, HurstExponent hurst,
                                       std::size_t m, std::size_t r);

/// |predicted - actual| / |actual|; DegenerateInputError when actual == 0.
double relative_error(double predicted, double actual);

struct ForecastError {
    double value = 0.0;
    /// True when |actual| <= zero_tolerance and the absolute error is reported.
    bool absolute = false;
};

ForecastError forecast_error(double predicted, double actual, double zero_tolerance = 1e-12);

}  // namespace fbm
