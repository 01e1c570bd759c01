#include "fbm/forecast.hpp"

#include <cmath>
#include <sstream>

namespace fbm {

namespace {

// Persistent-regime forecasts with long learning samples run into the
// determinant collapse of the value covariance (det ~ 1e-190 at H=0.9, m=500).
constexpr double kPersistentWarningHurst = 0.85;
constexpr std::size_t kPersistentWarningLearning = 500;

}  // namespace

ConditionalForecaster::ConditionalForecaster(const CorrelationMatrix& covariance,
                                             std::size_t horizon)
    : r_(horizon) {
    const std::size_t dim = covariance.dim();
    if (horizon == 0) throw ValidationError("forecast horizon must be positive");
    if (dim < horizon + 2) {
        throw ValidationError("covariance dimension " + std::to_string(dim) +
                              " leaves fewer than 2 learning points for horizon " +
                              std::to_string(horizon));
    }
    m_ = dim - horizon;
    const auto m = static_cast<Eigen::Index>(m_);
    const auto r = static_cast<Eigen::Index>(r_);
    const Eigen::MatrixXd& s = covariance.entries();

    learning_.emplace(CorrelationMatrix::from_entries(s.topLeftCorner(m, m), covariance.options()));
    cross_ = s.bottomLeftCorner(r, m);

    // delta^2 = D - (A^{-1} B, B) for the first forecast coordinate.
    const Eigen::VectorXd b = s.col(m).head(m);
    const double d = s(m, m);
    const double explained = learning_->solve_lower(b).squaredNorm();
    one_step_mse_ = d - explained;
    if (one_step_mse_ < 0.0) {
        std::ostringstream msg;
        msg << "one-step mean-square error " << one_step_mse_ << " clamped to 0";
        warnings_.push_back(msg.str());
        one_step_mse_ = 0.0;
        mse_clamped_ = true;
    }

    if (const auto& w = learning_->conditioning_warning()) warnings_.push_back(w->message);
    if (const auto h = covariance.hurst();
        h && covariance.kind() == MatrixKind::value && h->value() > kPersistentWarningHurst &&
        m_ > kPersistentWarningLearning) {
        std::ostringstream msg;
        msg << "forecast at H=" << h->value() << " with learning size " << m_
            << ": the value covariance is nearly singular (log10 det "
            << learning_->log10_determinant() << "); results may carry rounding error";
        warnings_.push_back(msg.str());
    }
}

ForecastResult ConditionalForecaster::predict(std::span<const double> observed) const {
    if (observed.size() != m_) {
        throw ValidationError("expected " + std::to_string(m_) + " observations, got " +
                              std::to_string(observed.size()));
    }
    const auto solved = spd_solve(*learning_, observed);
    const Eigen::Map<const Eigen::VectorXd> weights(solved.solution.data(),
                                                    static_cast<Eigen::Index>(m_));
    const Eigen::VectorXd pred = cross_ * weights;

    ForecastResult out;
    out.predictions.assign(pred.data(), pred.data() + pred.size());
    out.one_step_mse = one_step_mse_;
    out.mse_clamped = mse_clamped_;
    out.learning_size = m_;
    out.horizon = r_;
    out.jitter_used = learning_->jitter_used();
    out.condition_estimate = learning_->condition_estimate();
    out.relative_residual = solved.relative_residual;
    out.warnings = warnings_;
    if (solved.warning && !learning_->conditioning_warning()) {
        out.warnings.push_back(solved.warning->message);
    }
    return out;
}

ForecastResult conditional_forecast(std::span<const double> observed,
                                    const CorrelationMatrix& covariance, std::size_t horizon) {
    if (observed.size() + horizon != covariance.dim()) {
        throw ValidationError("covariance dimension must equal learning size + horizon");
    }
    return ConditionalForecaster(covariance, horizon).predict(observed);
}

ForecastResult forecast_fbm_values(const Series& path, HurstExponent hurst, std::size_t m,
                                   std::size_t r) {
    if (m < 2) throw ValidationError("learning size must be at least 2");
    if (m > path.steps()) {
        throw ValidationError("learning size " + std::to_string(m) + " exceeds the " +
                              std::to_string(path.steps()) + " observations after x_0");
    }
    const auto s = value_correlation_matrix(m + r, hurst);
    return conditional_forecast(path.values().subspan(1, m), s, r);
}

ForecastResult forecast_fbm_increments(const IncrementSeries& y, HurstExponent hurst,
                                       std::size_t m, std::size_t r) {
    if (m < 2) throw ValidationError("learning size must be at least 2");
    if (m > y.size()) {
        throw ValidationError("learning size " + std::to_string(m) + " exceeds " +
                              std::to_string(y.size()) + " increments");
    }
    const auto s = increment_correlation_matrix(m + r, hurst);
    return conditional_forecast(y.values().subspan(0, m), s, r);
}

double relative_error(double predicted, double actual) {
    if (actual == 0.0) throw DegenerateInputError("relative error undefined for a zero actual value");
    return std::abs(predicted - actual) / std::abs(actual);
}

ForecastError forecast_error(double predicted, double actual, double zero_tolerance) {
    if (std::abs(actual) <= zero_tolerance) return {std::abs(predicted - actual), true};
    return {relative_error(predicted, actual), false};
}

}  // namespace fbm
