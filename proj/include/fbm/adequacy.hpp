#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fbm/core_model.hpp"
#include "fbm/estimate.hpp"

namespace fbm {

enum class Regime { antipersistent, persistent };
enum class Decision { accept, reject };

/// v_k = sum_{j<k} z_j (exclusive, v_1 = 0) or sum_{j<=k} z_j (inclusive).
enum class RunningSum { exclusive, inclusive };

/// `table` rounds the normal quantile to two decimals before use, as printed
/// statistical tables do (z_0.95 = 1.65, giving 4.95 / sqrt(2H+2) and 4.08);
/// `exact` uses the quantile at full precision.
enum class QuantileConvention { table, exact };

std::string to_string(Regime regime);
std::string to_string(Decision decision);

struct ControlStatistics {
    double a_n = 0.0;  ///< (1/n) sum v_k z_k^3
    double b_n = 0.0;  ///< n^{-(1+H)} sum v_k^2 z_k^3
    double d_n = 0.0;  ///< n^{-2H} sum v_k z_k^3
};

struct Thresholds {
    double beta0 = 1.5;
    double beta1 = 0.0;
    double beta2 = 0.0;
};

struct AdequacyOptions {
    double alpha = 0.1;
    double beta0 = 1.5;
    double normalizing_constant = kMeanAbsNormal;
    QuantileConvention quantiles = QuantileConvention::table;
    RunningSum running_sum = RunningSum::exclusive;
};

struct AdequacyReport {
    HurstExponent hurst{0.5};
    Regime regime = Regime::persistent;
    /// All three statistics; the regime decides which ones the decision reads.
    ControlStatistics statistics;
    std::optional<double> a_n;
    std::optional<double> b_n;
    std::optional<double> d_n;
    /// |A_n + 1.5|
    double delta = 0.0;
    Thresholds thresholds;
    Decision decision = Decision::reject;
    std::vector<std::string> notes;
};

/// z_k = (c / R_1n) y_k. Independent of H.
std::vector<double> normalize_increments(const IncrementSeries& y,
                                         double normalizing_constant = kMeanAbsNormal);

/// Requires z.size() >= 10.
ControlStatistics control_statistics(std::span<const double> z, HurstExponent hurst,
                                     RunningSum running_sum = RunningSum::exclusive);

/// beta_1: two-sided (1 - alpha) quantile of 3 eta, eta ~ N(0, 1/(2H+2)).
/// beta_2: (1 - alpha) quantile of (3/2) chi^2(1).
Thresholds thresholds(HurstExponent hurst, double alpha,
                      QuantileConvention convention = QuantileConvention::table,
                      double beta0 = 1.5);

/// H < 1/2: accept iff |A_n + 1.5| < beta_0 and |B_n| < beta_1.
/// H >= 1/2: accept iff 0 < D_n < beta_2 (H = 1/2 noted in the report).
AdequacyReport test_hypothesis(const IncrementSeries& y, HurstExponent hurst,
                               const AdequacyOptions& options = {});

}  // namespace fbm
