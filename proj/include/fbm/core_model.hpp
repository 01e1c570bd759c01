#pragma once

// Parameter types, fBm covariance constructions and the SPD kernel shared by
// the estimation, forecasting and simulation code.
//
// Index convention: every matrix accessor that takes (j, k) is 1-based, the
// way the covariance formulas are written. Storage is 0-based Eigen; the
// mapping entry(j, k) == entries()(j - 1, k - 1) is the only place the two
// meet.

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fbm/errors.hpp"

namespace fbm {

class HurstExponent {
public:
    /// Throws ValidationError unless 0 < value < 1.
    explicit HurstExponent(double value);

    double value() const noexcept { return value_; }
    double twice() const noexcept { return 2.0 * value_; }

    auto operator<=>(const HurstExponent&) const = default;

private:
    double value_;
};

class Volatility {
public:
    /// Throws ValidationError unless value > 0 and finite.
    explicit Volatility(double value);

    double value() const noexcept { return value_; }

    auto operator<=>(const Volatility&) const = default;

private:
    double value_;
};

class IncrementSeries;

/// Observations x_0..x_n on the uniform grid k/n.
class Series {
public:
    /// At least two finite values.
    explicit Series(std::vector<double> values);

    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    /// Number of grid steps n (= size() - 1).
    std::size_t steps() const noexcept { return values_.size() - 1; }
    double operator[](std::size_t k) const { return values_[k]; }

    /// y_k = x_k - x_{k-1}, k = 1..n.
    IncrementSeries increments() const;

private:
    std::vector<double> values_;
};

/// Differences y_1..y_n.
class IncrementSeries {
public:
    /// Non-empty, all values finite.
    explicit IncrementSeries(std::vector<double> values);

    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t k) const { return values_[k]; }

    /// Cumulative sums anchored at x0; inverse of Series::increments().
    Series integrate(double x0 = 0.0) const;

private:
    std::vector<double> values_;
};

/// R(t, s) = (t^{2H} + s^{2H} - |t - s|^{2H}) / 2.
double fbm_covariance(double t, double s, HurstExponent hurst);

/// Correlation of two unit-spaced increments `lag` steps apart.
double increment_autocorrelation(std::size_t lag, HurstExponent hurst);

/// rho_1 = 2^{2H-1} - 1.
double neighbor_correlation(HurstExponent hurst);

struct ConditioningWarning {
    double condition_estimate = 0.0;
    double log10_determinant = 0.0;
    double relative_residual = 0.0;
    std::string message;
};

struct FactorizationOptions {
    /// First jitter, relative to the largest diagonal entry.
    double initial_jitter = 1e-12;
    double max_jitter = 1e-6;
    double jitter_growth = 10.0;
    double condition_threshold = 1e12;
    /// Determinants below 10^threshold are flagged as numerically hazardous.
    double log10_det_threshold = -150.0;
    double residual_tolerance = 1e-8;
    int condition_iterations = 30;
};

enum class MatrixKind { increment, value, general };

std::string to_string(MatrixKind kind);

/// Symmetric positive-definite matrix with its Cholesky factor computed at
/// construction. Immutable afterwards, so it can be shared across threads.
class CorrelationMatrix {
public:
    /// Factor a caller-supplied symmetric matrix.
    static CorrelationMatrix from_entries(Eigen::MatrixXd entries,
                                          const FactorizationOptions& options = {});

    std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
    MatrixKind kind() const noexcept { return kind_; }
    std::optional<HurstExponent> hurst() const noexcept { return hurst_; }

    /// 1-based element access.
    double entry(std::size_t j, std::size_t k) const;

    const Eigen::MatrixXd& entries() const noexcept { return entries_; }
    /// Lower-triangular L with entries() + jitter_used() * I = L L^T.
    const Eigen::MatrixXd& factor() const noexcept { return factor_; }

    double jitter_used() const noexcept { return jitter_used_; }
    double condition_estimate() const noexcept { return condition_estimate_; }
    double log10_determinant() const noexcept { return log10_det_; }
    const FactorizationOptions& options() const noexcept { return options_; }

    /// Set when the matrix itself is flagged (condition or determinant).
    const std::optional<ConditioningWarning>& conditioning_warning() const noexcept {
        return warning_;
    }

    /// Raw triangular solves against the cached factor, no diagnostics.
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
    /// L^{-1} rhs.
    Eigen::VectorXd solve_lower(const Eigen::VectorXd& rhs) const;

private:
    friend CorrelationMatrix increment_correlation_matrix(std::size_t, HurstExponent,
                                                          const FactorizationOptions&);
    friend CorrelationMatrix value_correlation_matrix(std::size_t, HurstExponent,
                                                      const FactorizationOptions&);

    CorrelationMatrix(Eigen::MatrixXd entries, MatrixKind kind,
                      std::optional<HurstExponent> hurst, const FactorizationOptions& options);

    void factorize();
    void estimate_condition();

    Eigen::MatrixXd entries_;
    Eigen::MatrixXd factor_;
    MatrixKind kind_;
    std::optional<HurstExponent> hurst_;
    FactorizationOptions options_;
    double jitter_used_ = 0.0;
    double condition_estimate_ = 1.0;
    double log10_det_ = 0.0;
    std::optional<ConditioningWarning> warning_;
};

/// Toeplitz correlation matrix of n unit-spaced fBm increments.
CorrelationMatrix increment_correlation_matrix(std::size_t n, HurstExponent hurst,
                                               const FactorizationOptions& options = {});

/// Covariance of fBm values at integer times 1..n: (j^{2H} + k^{2H} - |k-j|^{2H}) / 2.
CorrelationMatrix value_correlation_matrix(std::size_t n, HurstExponent hurst,
                                           const FactorizationOptions& options = {});

struct SolveResult {
    std::vector<double> solution;
    double relative_residual = 0.0;
    std::optional<ConditioningWarning> warning;
};

/// Solve S z = b through the cached factor. A warning is attached when the
/// matrix is flagged or the relative residual exceeds the tolerance.
SolveResult spd_solve(const CorrelationMatrix& matrix, std::span<const double> rhs);

/// (S^{-1} y, y) as ||L^{-1} y||^2; never negative.
double quadratic_form(const CorrelationMatrix& matrix, std::span<const double> y);

struct ToeplitzQuadraticForm {
    double value = 0.0;
    double log10_determinant = 0.0;
    double jitter_used = 0.0;
};

/// (S^{-1} y, y) for the symmetric Toeplitz S with first row `autocorrelation`,
/// by the Durbin-Levinson innovations recursion. O(n^2) time, O(n) memory.
/// autocorrelation.size() must be >= y.size().
ToeplitzQuadraticForm toeplitz_quadratic_form(std::span<const double> autocorrelation,
                                              std::span<const double> y,
                                              const FactorizationOptions& options = {});

/// Autocorrelations of unit-spaced increments at lags 0..n-1.
std::vector<double> increment_autocorrelations(std::size_t n, HurstExponent hurst);

/// (S_H^{-1} y, y) for the increment matrix of dimension y.size().
double increment_quadratic_form(std::span<const double> y, HurstExponent hurst,
                                const FactorizationOptions& options = {});

}  // namespace fbm
