#include "fbm/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Cholesky>

namespace fbm {

namespace {

bool all_finite(std::span<const double> values) {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

std::string format_warning(double condition, double log10_det, double residual) {
    std::ostringstream out;
    out << "ill-conditioned correlation matrix: condition estimate " << condition
        << ", log10 det " << log10_det;
    if (residual > 0.0) out << ", relative residual " << residual;
    return out.str();
}

}  // namespace

HurstExponent::HurstExponent(double value) : value_(value) {
    if (!(value > 0.0 && value < 1.0)) {
        throw ValidationError("Hurst exponent must lie in (0, 1), got " + std::to_string(value));
    }
}

Volatility::Volatility(double value) : value_(value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw ValidationError("volatility must be positive and finite, got " +
                              std::to_string(value));
    }
}

Series::Series(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) throw ValidationError("a series needs at least two values");
    if (!all_finite(values_)) throw ValidationError("series contains non-finite values");
}

IncrementSeries Series::increments() const {
    std::vector<double> y(values_.size() - 1);
    for (std::size_t k = 1; k < values_.size(); ++k) y[k - 1] = values_[k] - values_[k - 1];
    return IncrementSeries(std::move(y));
}

IncrementSeries::IncrementSeries(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw ValidationError("increment series is empty");
    if (!all_finite(values_)) throw ValidationError("increment series contains non-finite values");
}

Series IncrementSeries::integrate(double x0) const {
    std::vector<double> x(values_.size() + 1);
    x[0] = x0;
    for (std::size_t k = 0; k < values_.size(); ++k) x[k + 1] = x[k] + values_[k];
    return Series(std::move(x));
}

double fbm_covariance(double t, double s, HurstExponent hurst) {
    if (!(t >= 0.0) || !(s >= 0.0) || !std::isfinite(t) || !std::isfinite(s)) {
        throw ValidationError("fbm_covariance needs finite non-negative times");
    }
    const double a = hurst.twice();
    return 0.5 * (std::pow(t, a) + std::pow(s, a) - std::pow(std::abs(t - s), a));
}

double increment_autocorrelation(std::size_t lag, HurstExponent hurst) {
    const double a = hurst.twice();
    if (lag == 0) return 1.0;
    if (lag == 1) return 0.5 * (std::pow(2.0, a) + 0.0 - 2.0);
    // Second difference of k^{2H}, written to avoid cancellation at large lags.
    const double k = static_cast<double>(lag);
    const double up = std::expm1(a * std::log1p(1.0 / k));
    const double down = std::expm1(a * std::log1p(-1.0 / k));
    return 0.5 * std::pow(k, a) * (up + down);
}

double neighbor_correlation(HurstExponent hurst) { return increment_autocorrelation(1, hurst); }

std::string to_string(MatrixKind kind) {
    switch (kind) {
        case MatrixKind::increment: return "increment";
        case MatrixKind::value: return "value";
        case MatrixKind::general: return "general";
    }
    return "unknown";
}

CorrelationMatrix::CorrelationMatrix(Eigen::MatrixXd entries, MatrixKind kind,
                                     std::optional<HurstExponent> hurst,
                                     const FactorizationOptions& options)
    : entries_(std::move(entries)), kind_(kind), hurst_(hurst), options_(options) {
    if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
        throw ValidationError("correlation matrix must be square and non-empty");
    }
    if (!entries_.allFinite()) throw ValidationError("correlation matrix has non-finite entries");
    factorize();
    estimate_condition();
}

CorrelationMatrix CorrelationMatrix::from_entries(Eigen::MatrixXd entries,
                                                  const FactorizationOptions& options) {
    if (entries.rows() != entries.cols()) throw ValidationError("matrix must be square");
    const double scale = entries.cwiseAbs().maxCoeff();
    if ((entries - entries.transpose()).cwiseAbs().maxCoeff() >
        1e-12 * std::max(scale, 1.0)) {
        throw ValidationError("matrix is not symmetric");
    }
    return CorrelationMatrix(std::move(entries), MatrixKind::general, std::nullopt, options);
}

void CorrelationMatrix::factorize() {
    const double max_diag = entries_.diagonal().maxCoeff();
    const auto n = entries_.rows();
    double jitter = 0.0;
    double relative = options_.initial_jitter;
    while (true) {
        Eigen::MatrixXd work = entries_;
        if (jitter > 0.0) work.diagonal().array() += jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(work);
        if (llt.info() == Eigen::Success) {
            factor_ = llt.matrixL();
            jitter_used_ = jitter;
            break;
        }
        if (relative > options_.max_jitter * (1.0 + 1e-9)) {
            throw FactorizationError("matrix of dimension " + std::to_string(n) +
                                     " is not positive definite after jitter escalation to " +
                                     std::to_string(options_.max_jitter) + " x max diagonal");
        }
        jitter = relative * max_diag;
        relative *= options_.jitter_growth;
    }
    log10_det_ = 2.0 * factor_.diagonal().array().log10().sum();
}

void CorrelationMatrix::estimate_condition() {
    const auto n = entries_.rows();
    if (n == 1) {
        condition_estimate_ = 1.0;
    } else {
        // Power iteration for the largest eigenvalue, inverse iteration through
        // the factor for the smallest. Deterministic start vector.
        Eigen::VectorXd start(n);
        for (Eigen::Index i = 0; i < n; ++i) start[i] = 1.0 + 0.5 * std::sin(1.0 + 0.7 * i);
        start.normalize();

        Eigen::MatrixXd jittered = entries_;
        jittered.diagonal().array() += jitter_used_;

        Eigen::VectorXd v = start;
        double lambda_max = 0.0;
        for (int it = 0; it < options_.condition_iterations; ++it) {
            Eigen::VectorXd w = jittered.selfadjointView<Eigen::Lower>() * v;
            lambda_max = v.dot(w);
            const double norm = w.norm();
            if (norm == 0.0) break;
            v = w / norm;
        }
        v = start;
        double inv_lambda_min = 0.0;
        for (int it = 0; it < options_.condition_iterations; ++it) {
            Eigen::VectorXd w = solve(v);
            inv_lambda_min = v.dot(w);
            const double norm = w.norm();
            if (norm == 0.0 || !std::isfinite(norm)) break;
            v = w / norm;
        }
        condition_estimate_ = lambda_max * inv_lambda_min;
        if (!std::isfinite(condition_estimate_)) {
            condition_estimate_ = std::numeric_limits<double>::infinity();
        }
    }

    if (condition_estimate_ > options_.condition_threshold ||
        log10_det_ < options_.log10_det_threshold) {
        warning_ = ConditioningWarning{condition_estimate_, log10_det_, 0.0,
                                       format_warning(condition_estimate_, log10_det_, 0.0)};
    }
}

double CorrelationMatrix::entry(std::size_t j, std::size_t k) const {
    if (j == 0 || k == 0 || j > dim() || k > dim()) {
        throw ValidationError("matrix index out of range (indices are 1-based)");
    }
    return entries_(static_cast<Eigen::Index>(j - 1), static_cast<Eigen::Index>(k - 1));
}

Eigen::VectorXd CorrelationMatrix::solve(const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd z = factor_.triangularView<Eigen::Lower>().solve(rhs);
    return factor_.transpose().triangularView<Eigen::Upper>().solve(z);
}

Eigen::VectorXd CorrelationMatrix::solve_lower(const Eigen::VectorXd& rhs) const {
    return factor_.triangularView<Eigen::Lower>().solve(rhs);
}

CorrelationMatrix increment_correlation_matrix(std::size_t n, HurstExponent hurst,
                                               const FactorizationOptions& options) {
    if (n == 0) throw ValidationError("matrix dimension must be positive");
    const auto rho = increment_autocorrelations(n, hurst);
    Eigen::MatrixXd s(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) s(j, k) = rho[j > k ? j - k : k - j];
    }
    return CorrelationMatrix(std::move(s), MatrixKind::increment, hurst, options);
}

CorrelationMatrix value_correlation_matrix(std::size_t n, HurstExponent hurst,
                                           const FactorizationOptions& options) {
    if (n == 0) throw ValidationError("matrix dimension must be positive");
    const double a = hurst.twice();
    std::vector<double> powers(n + 1);
    for (std::size_t i = 0; i <= n; ++i) powers[i] = std::pow(static_cast<double>(i), a);
    Eigen::MatrixXd s(n, n);
    for (std::size_t j = 1; j <= n; ++j) {
        for (std::size_t k = j; k <= n; ++k) {
            const double v = 0.5 * (powers[j] + powers[k] - powers[k - j]);
            s(j - 1, k - 1) = v;
            s(k - 1, j - 1) = v;
        }
    }
    return CorrelationMatrix(std::move(s), MatrixKind::value, hurst, options);
}

SolveResult spd_solve(const CorrelationMatrix& matrix, std::span<const double> rhs) {
    if (rhs.size() != matrix.dim()) {
        throw ValidationError("right-hand side length " + std::to_string(rhs.size()) +
                              " does not match matrix dimension " +
                              std::to_string(matrix.dim()));
    }
    const Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
    const Eigen::VectorXd z = matrix.solve(b);

    SolveResult result;
    result.solution.assign(z.data(), z.data() + z.size());
    const double b_norm = b.norm();
    const Eigen::VectorXd r = matrix.entries().selfadjointView<Eigen::Lower>() * z - b;
    result.relative_residual = b_norm > 0.0 ? r.norm() / b_norm : r.norm();

    const double tol = matrix.options().residual_tolerance;
    if (matrix.conditioning_warning() || result.relative_residual > tol ||
        !std::isfinite(result.relative_residual)) {
        ConditioningWarning w;
        w.condition_estimate = matrix.condition_estimate();
        w.log10_determinant = matrix.log10_determinant();
        w.relative_residual = result.relative_residual;
        w.message = format_warning(w.condition_estimate, w.log10_determinant, w.relative_residual);
        result.warning = std::move(w);
    }
    return result;
}

double quadratic_form(const CorrelationMatrix& matrix, std::span<const double> y) {
    if (y.size() != matrix.dim()) {
        throw ValidationError("vector length does not match matrix dimension");
    }
    const Eigen::Map<const Eigen::VectorXd> v(y.data(), static_cast<Eigen::Index>(y.size()));
    return matrix.solve_lower(v).squaredNorm();
}

namespace {

// One Durbin-Levinson pass. Returns false when an innovation variance is not
// positive (matrix not numerically positive definite).
bool levinson_pass(std::span<const double> r, std::span<const double> y, double diag_shift,
                   ToeplitzQuadraticForm& out) {
    const std::size_t n = y.size();
    std::vector<double> phi(n, 0.0);
    std::vector<double> prev(n, 0.0);
    double variance = r[0] + diag_shift;
    if (!(variance > 0.0)) return false;

    double qf = y[0] * y[0] / variance;
    double log10_det = std::log10(variance);

    for (std::size_t k = 1; k < n; ++k) {
        // Reflection coefficient for order k.
        double acc = r[k];
        for (std::size_t j = 1; j < k; ++j) acc -= phi[j - 1] * r[k - j];
        const double kappa = acc / variance;
        prev.assign(phi.begin(), phi.begin() + static_cast<std::ptrdiff_t>(k - 1));
        for (std::size_t j = 1; j < k; ++j) phi[j - 1] = prev[j - 1] - kappa * prev[k - j - 1];
        phi[k - 1] = kappa;
        variance *= (1.0 - kappa) * (1.0 + kappa);
        if (!(variance > 0.0) || !std::isfinite(variance)) return false;

        double prediction = 0.0;
        for (std::size_t j = 1; j <= k; ++j) prediction += phi[j - 1] * y[k - j];
        const double innovation = y[k] - prediction;
        qf += innovation * innovation / variance;
        log10_det += std::log10(variance);
    }
    out.value = qf;
    out.log10_determinant = log10_det;
    out.jitter_used = diag_shift;
    return true;
}

}  // namespace

ToeplitzQuadraticForm toeplitz_quadratic_form(std::span<const double> autocorrelation,
                                              std::span<const double> y,
                                              const FactorizationOptions& options) {
    if (y.empty()) throw ValidationError("empty vector in quadratic form");
    if (autocorrelation.size() < y.size()) {
        throw ValidationError("autocorrelation sequence shorter than the vector");
    }
    ToeplitzQuadraticForm out;
    if (levinson_pass(autocorrelation, y, 0.0, out)) return out;
    for (double relative = options.initial_jitter;
         relative <= options.max_jitter * (1.0 + 1e-9); relative *= options.jitter_growth) {
        if (levinson_pass(autocorrelation, y, relative * autocorrelation[0], out)) return out;
    }
    throw FactorizationError("Toeplitz matrix of dimension " + std::to_string(y.size()) +
                             " is not positive definite after jitter escalation");
}

std::vector<double> increment_autocorrelations(std::size_t n, HurstExponent hurst) {
    std::vector<double> rho(n);
    for (std::size_t k = 0; k < n; ++k) rho[k] = increment_autocorrelation(k, hurst);
    return rho;
}

double increment_quadratic_form(std::span<const double> y, HurstExponent hurst,
                                const FactorizationOptions& options) {
    const auto rho = increment_autocorrelations(y.size(), hurst);
    return toeplitz_quadratic_form(rho, y, options).value;
}

}  // namespace fbm
