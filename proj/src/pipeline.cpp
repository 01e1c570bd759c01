#include "fbm/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/QR>
#include <boost/math/tools/roots.hpp>

namespace fbm {

namespace {

constexpr std::size_t kMinStationarityWindow = 30;

template <class F>
auto in_stage(const char* stage, F&& body) {
    try {
        return body();
    } catch (Error& e) {
        e.set_stage(stage);
        throw;
    }
}

std::vector<std::size_t> window_starts(std::size_t count, std::size_t window_size) {
    const std::size_t windows = count / window_size;
    std::vector<std::size_t> starts(windows);
    for (std::size_t i = 0; i < windows; ++i) starts[i] = i * window_size;
    return starts;
}

TrendSegment ols_line(std::span<const double> values, std::size_t begin, std::size_t end) {
    const double n = static_cast<double>(end - begin);
    double sk = 0.0, sy = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
        sk += static_cast<double>(k);
        sy += values[k];
    }
    const double mk = sk / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
        const double dk = static_cast<double>(k) - mk;
        sxx += dk * dk;
        sxy += dk * (values[k] - my);
    }
    const double slope = sxy / sxx;
    return {begin, end, my - slope * mk, slope};
}

std::vector<TrendSegment> continuous_fit(std::span<const double> values,
                                         const std::vector<std::size_t>& starts) {
    const std::size_t count = values.size();
    std::vector<double> knots(starts.begin(), starts.end());
    knots.push_back(static_cast<double>(count - 1));
    const auto nk = static_cast<Eigen::Index>(knots.size());

    // Hat-function basis of the linear spline.
    Eigen::MatrixXd design = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(count), nk);
    std::size_t seg = 0;
    for (std::size_t k = 0; k < count; ++k) {
        const double t = static_cast<double>(k);
        while (seg + 2 < knots.size() && t >= knots[seg + 1]) ++seg;
        const double w = (t - knots[seg]) / (knots[seg + 1] - knots[seg]);
        design(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(seg)) = 1.0 - w;
        design(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(seg + 1)) = w;
    }
    const Eigen::Map<const Eigen::VectorXd> rhs(values.data(), static_cast<Eigen::Index>(count));
    const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(rhs);

    std::vector<TrendSegment> segments;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double slope = (coef[static_cast<Eigen::Index>(i + 1)] - coef[static_cast<Eigen::Index>(i)]) /
                             (knots[i + 1] - knots[i]);
        const double intercept = coef[static_cast<Eigen::Index>(i)] - slope * knots[i];
        const std::size_t end = i + 2 == knots.size() ? count : starts[i + 1];
        segments.push_back({starts[i], end, intercept, slope});
    }
    return segments;
}

}  // namespace

std::string to_string(TrendMode mode) {
    return mode == TrendMode::continuous ? "continuous" : "independent";
}

double TrendFit::at(std::size_t k) const {
    if (k < values.size()) return values[k];
    if (segments.empty()) return 0.0;
    return segments.back().at(static_cast<double>(k));
}

DetrendResult log_detrend(const Series& s, std::size_t window_size, TrendMode mode) {
    for (double v : s.values()) {
        if (!(v > 0.0)) throw NonPositiveDataError("log detrending needs strictly positive data");
    }
    if (window_size < 3) {
        throw WindowTooSmallError("window size must be at least 3, got " +
                                  std::to_string(window_size));
    }
    const std::size_t count = s.size();
    if (count / window_size < 2) {
        throw WindowTooSmallError("series of " + std::to_string(count) +
                                  " points gives fewer than 2 windows of " +
                                  std::to_string(window_size));
    }

    std::vector<double> logs(count);
    std::transform(s.values().begin(), s.values().end(), logs.begin(),
                   [](double v) { return std::log(v); });

    const auto starts = window_starts(count, window_size);
    TrendFit trend;
    trend.window_size = window_size;
    trend.mode = mode;
    if (mode == TrendMode::independent) {
        for (std::size_t i = 0; i < starts.size(); ++i) {
            const std::size_t end = i + 1 == starts.size() ? count : starts[i + 1];
            trend.segments.push_back(ols_line(logs, starts[i], end));
        }
    } else {
        trend.segments = continuous_fit(logs, starts);
    }

    trend.values.resize(count);
    std::vector<double> x(count);
    for (const auto& seg : trend.segments) {
        for (std::size_t k = seg.begin; k < seg.end; ++k) {
            trend.values[k] = seg.at(static_cast<double>(k));
            x[k] = logs[k] - trend.values[k];
        }
    }
    return DetrendResult{Series(std::move(x)), std::move(trend)};
}

double lag1_correlation(const IncrementSeries& y) {
    if (y.size() < 3) throw ValidationError("lag-1 correlation needs at least 3 values");
    double cross = 0.0, energy = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) {
        energy += y[j] * y[j];
        if (j + 1 < y.size()) cross += y[j] * y[j + 1];
    }
    if (!(energy > 0.0)) throw DegenerateInputError("lag-1 correlation of an all-zero sequence");
    return cross / energy;
}

StationarityReport stationarity_check(const IncrementSeries& y, std::size_t windows,
                                      double tolerance) {
    if (windows < 2) throw ValidationError("stationarity check needs at least 2 windows");
    const std::size_t width = y.size() / windows;
    if (width < kMinStationarityWindow) {
        throw ValidationError("stationarity windows of " + std::to_string(width) +
                              " points are shorter than " +
                              std::to_string(kMinStationarityWindow));
    }
    StationarityReport report;
    report.windows = windows;
    report.tolerance = tolerance;
    const auto values = y.values();
    for (std::size_t w = 0; w < windows; ++w) {
        const std::size_t begin = w * width;
        const std::size_t end = w + 1 == windows ? y.size() : begin + width;
        const IncrementSeries part(std::vector<double>(values.begin() + static_cast<std::ptrdiff_t>(begin),
                                                       values.begin() + static_cast<std::ptrdiff_t>(end)));
        report.p_hat_per_window.push_back(lag1_correlation(part));
    }
    const auto [lo, hi] =
        std::minmax_element(report.p_hat_per_window.begin(), report.p_hat_per_window.end());
    report.max_spread = *hi - *lo;
    report.passed = report.max_spread <= tolerance;
    return report;
}

double kurtosis_ratio_for_lambda(double lambda) {
    if (!(lambda > 0.0)) throw ValidationError("lambda must be positive");
    return std::exp(2.0 * std::lgamma((lambda + 1.0) / 2.0) - std::lgamma(lambda + 0.5)) /
           std::sqrt(std::numbers::pi);
}

double solve_lambda(double d) {
    const double hi_d = kurtosis_ratio_for_lambda(kLambdaMin);
    const double lo_d = kurtosis_ratio_for_lambda(kLambdaMax);
    if (!(d >= lo_d && d <= hi_d)) {
        throw OutOfRangeError("kurtosis ratio " + std::to_string(d) +
                              " outside the attainable interval [" + std::to_string(lo_d) +
                              ", " + std::to_string(hi_d) + "]");
    }
    auto f = [d](double lambda) { return kurtosis_ratio_for_lambda(lambda) - d; };
    if (f(kLambdaMin) == 0.0) return kLambdaMin;
    if (f(kLambdaMax) == 0.0) return kLambdaMax;
    std::uintmax_t max_iter = 200;
    const auto bracket = boost::math::tools::toms748_solve(
        f, kLambdaMin, kLambdaMax, boost::math::tools::eps_tolerance<double>(52), max_iter);
    const double lambda = 0.5 * (bracket.first + bracket.second);
    if (std::abs(f(lambda)) > 1e-9) {
        throw OutOfRangeError("lambda root finding did not converge for d = " + std::to_string(d));
    }
    return lambda;
}

std::vector<double> signed_power(std::span<const double> v, double exponent) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = std::copysign(std::pow(std::abs(v[i]), exponent), v[i]);
        if (v[i] == 0.0) out[i] = 0.0;
    }
    return out;
}

IncrementSeries power_transform(const IncrementSeries& y, double lambda) {
    if (!(lambda > 0.0)) throw ValidationError("lambda must be positive");
    return IncrementSeries(signed_power(y.values(), 1.0 / lambda));
}

IncrementSeries inverse_power_transform(const IncrementSeries& y, double lambda) {
    if (!(lambda > 0.0)) throw ValidationError("lambda must be positive");
    return IncrementSeries(signed_power(y.values(), lambda));
}

PipelineModel fit(const Series& s, const PipelineConfig& config) {
    if (s.size() < config.min_length) {
        throw ValidationError("pipeline needs at least " + std::to_string(config.min_length) +
                              " observations, got " + std::to_string(s.size()));
    }
    PipelineModel model;
    model.config = config;

    const Series x = in_stage("detrend", [&] {
        if (config.detrend) {
            auto d = log_detrend(s, config.window_size, config.trend_mode);
            model.trend = std::move(d.trend);
            return std::move(d.residual);
        }
        for (double v : s.values()) {
            if (!(v > 0.0)) throw NonPositiveDataError("log transform needs strictly positive data");
        }
        std::vector<double> logs(s.size());
        std::transform(s.values().begin(), s.values().end(), logs.begin(),
                       [](double v) { return std::log(v); });
        model.trend.values.assign(s.size(), 0.0);
        model.trend.segments.push_back({0, s.size(), 0.0, 0.0});
        return Series(std::move(logs));
    });
    model.residual.assign(x.values().begin(), x.values().end());

    const IncrementSeries y = in_stage("increments", [&] {
        auto inc = x.increments();
        const auto v = inc.values();
        // Detrending a constant log-series leaves rounding noise, not signal.
        double level = 1.0;
        for (double a : s.values()) level = std::max(level, std::abs(std::log(a)));
        const double tiny = 1e-12 * level;
        if (std::all_of(v.begin(), v.end(), [tiny](double a) { return std::abs(a) <= tiny; })) {
            throw DegenerateInputError("all increments are zero (constant series)");
        }
        return inc;
    });

    model.stationarity = in_stage("stationarity", [&] {
        return stationarity_check(y, config.stationarity_windows, config.stationarity_tolerance);
    });
    model.lag1_per_window = model.stationarity.p_hat_per_window;

    const IncrementSeries transformed = in_stage("transform", [&] {
        model.kurtosis = kurtosis_ratio(y);
        if (std::abs(model.kurtosis - 2.0 / std::numbers::pi) > config.gaussian_margin) {
            model.lambda = solve_lambda(model.kurtosis);
            model.transformed = true;
            return power_transform(y, model.lambda);
        }
        return y;
    });

    in_stage("estimate", [&] {
        if (config.known_hurst) {
            model.hurst = *config.known_hurst;
            model.sigma = sigma_hat_2(transformed, model.hurst);
        } else {
            model.estimate = estimate_hurst(transformed, config.grid_step, config.estimator);
            model.hurst = model.estimate->hurst;
            model.sigma = model.estimate->sigma;
        }
        return 0;
    });

    model.adequacy = in_stage("adequacy", [&] {
        return test_hypothesis(transformed, model.hurst, config.adequacy);
    });
    return model;
}

PipelineForecast predict(const PipelineModel& model, const Series& s, std::size_t m,
                         std::size_t r) {
    return in_stage("forecast", [&] {
        if (m < 2) throw ValidationError("learning size must be at least 2");
        if (r == 0) throw ValidationError("horizon must be positive");
        if (m >= s.size()) {
            throw ValidationError("learning size " + std::to_string(m) + " needs s_0..s_m but the series has " +
                                  std::to_string(s.size()) + " points");
        }
        std::vector<double> x(m + 1);
        for (std::size_t k = 0; k <= m; ++k) {
            if (!(s[k] > 0.0)) throw NonPositiveDataError("forecast input must be strictly positive");
            x[k] = std::log(s[k]) - model.trend.at(k);
        }
        std::vector<double> y(m);
        for (std::size_t k = 1; k <= m; ++k) y[k - 1] = x[k] - x[k - 1];
        const auto y_tilde = model.transformed ? signed_power(y, 1.0 / model.lambda) : y;

        std::vector<double> u(m);
        double acc = 0.0;
        for (std::size_t k = 0; k < m; ++k) u[k] = (acc += y_tilde[k]);

        const auto cov = value_correlation_matrix(m + r, model.hurst);
        PipelineForecast out;
        out.transformed = conditional_forecast(u, cov, r);

        std::vector<double> v(r);
        double previous = u.back();
        for (std::size_t j = 0; j < r; ++j) {
            v[j] = out.transformed.predictions[j] - previous;
            previous = out.transformed.predictions[j];
        }
        const auto w = model.transformed ? signed_power(v, model.lambda) : v;

        double level = x[m];
        for (std::size_t j = 0; j < r; ++j) {
            level += w[j];
            out.log_residual.push_back(level);
            out.values.push_back(std::exp(level + model.trend.at(m + j + 1)));
        }
        return out;
    });
}

}  // namespace fbm
