#pragma once

// End-to-end approximation of a positive time series by a transformed fBm:
// log + windowed linear detrend, stationarity screening, signed power
// transform towards Gaussian increments, Hurst estimation, adequacy test,
// and forecasting back on the original scale.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fbm/adequacy.hpp"
#include "fbm/core_model.hpp"
#include "fbm/estimate.hpp"
#include "fbm/forecast.hpp"

namespace fbm {

/// `continuous`: least-squares linear spline with knots at window
/// boundaries. `independent`: a separate least-squares line per window
/// (the fitted trend jumps at window boundaries).
enum class TrendMode { continuous, independent };

std::string to_string(TrendMode mode);

struct TrendSegment {
    std::size_t begin = 0;  ///< first index covered
    std::size_t end = 0;    ///< one past the last index covered
    double intercept = 0.0;
    double slope = 0.0;

    double at(double k) const { return intercept + slope * k; }
};

struct TrendFit {
    std::size_t window_size = 0;
    TrendMode mode = TrendMode::continuous;
    std::vector<TrendSegment> segments;
    /// M_k for k = 0..N.
    std::vector<double> values;

    /// M_k; beyond the fitted range the last segment's line is extended.
    double at(std::size_t k) const;
};

struct DetrendResult {
    Series residual;  ///< x_k = log s_k - M_k
    TrendFit trend;
};

DetrendResult log_detrend(const Series& s, std::size_t window_size,
                          TrendMode mode = TrendMode::continuous);

/// sum y_j y_{j+1} / sum y_j^2.
double lag1_correlation(const IncrementSeries& y);

struct StationarityReport {
    std::vector<double> p_hat_per_window;
    double max_spread = 0.0;
    std::size_t windows = 0;
    double tolerance = 0.1;
    bool passed = false;
};

/// Splits y into equal windows (the last absorbs the remainder), each of at
/// least 30 points.
StationarityReport stationarity_check(const IncrementSeries& y, std::size_t windows = 3,
                                      double tolerance = 0.1);

/// Gamma^2((lambda+1)/2) / (sqrt(pi) Gamma(lambda + 1/2)): the value of
/// R_1^2 / R_2 for increments sgn(g)|g|^lambda with Gaussian g.
double kurtosis_ratio_for_lambda(double lambda);

inline constexpr double kLambdaMin = 0.05;
inline constexpr double kLambdaMax = 20.0;

/// Root of kurtosis_ratio_for_lambda(lambda) = d on [kLambdaMin, kLambdaMax].
double solve_lambda(double d);

/// sgn(y) |y|^{1/lambda}.
IncrementSeries power_transform(const IncrementSeries& y, double lambda);
/// sgn(y) |y|^{lambda}.
IncrementSeries inverse_power_transform(const IncrementSeries& y, double lambda);
std::vector<double> signed_power(std::span<const double> v, double exponent);

struct PipelineConfig {
    bool detrend = true;
    std::size_t window_size = 100;
    TrendMode trend_mode = TrendMode::continuous;
    std::size_t stationarity_windows = 3;
    double stationarity_tolerance = 0.1;
    /// Transform only when |d(y) - 2/pi| exceeds this margin.
    double gaussian_margin = 0.05;
    double grid_step = 0.01;
    std::size_t min_length = 200;
    /// Skip estimation and use this exponent.
    std::optional<HurstExponent> known_hurst;
    EstimatorOptions estimator;
    AdequacyOptions adequacy;
};

struct PipelineModel {
    PipelineConfig config;
    TrendFit trend;
    std::vector<double> residual;  ///< x_k, k = 0..N
    double kurtosis = 0.0;         ///< d(y) before the power transform
    double lambda = 1.0;
    bool transformed = false;
    HurstExponent hurst{0.5};
    Volatility sigma{1.0};
    std::optional<HurstEstimate> estimate;
    StationarityReport stationarity;
    AdequacyReport adequacy;
    std::vector<double> lag1_per_window;
};

/// Stage failures are rethrown with Error::stage() set; failed stationarity
/// or adequacy checks are recorded in the model instead.
PipelineModel fit(const Series& s, const PipelineConfig& config = {});

struct PipelineForecast {
    std::vector<double> values;        ///< s-hat_{m+1..m+r}
    std::vector<double> log_residual;  ///< x-hat_{m+1..m+r}
    ForecastResult transformed;        ///< forecast of the u-series
};

/// Forecast s_{m+1..m+r} from s_0..s_m using the fitted transforms.
PipelineForecast predict(const PipelineModel& model, const Series& s, std::size_t m,
                         std::size_t r);

}  // namespace fbm
