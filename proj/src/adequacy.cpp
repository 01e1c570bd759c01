#include "fbm/adequacy.hpp"

#include <cmath>

#include "fbm/rng.hpp"

namespace fbm {

std::string to_string(Regime regime) {
    return regime == Regime::antipersistent ? "antipersistent" : "persistent";
}

std::string to_string(Decision decision) {
    return decision == Decision::accept ? "accept" : "reject";
}

std::vector<double> normalize_increments(const IncrementSeries& y, double normalizing_constant) {
    const auto m = moment_statistics(y);
    if (!(m.r1 > 0.0)) throw DegenerateInputError("all increments are zero");
    const double scale = normalizing_constant / m.r1;
    std::vector<double> z(y.size());
    for (std::size_t k = 0; k < z.size(); ++k) z[k] = scale * y[k];
    return z;
}

ControlStatistics control_statistics(std::span<const double> z, HurstExponent hurst,
                                     RunningSum running_sum) {
    if (z.size() < 10) throw ValidationError("control statistics need at least 10 increments");
    const double n = static_cast<double>(z.size());
    double v = 0.0;
    double first = 0.0;
    double second = 0.0;
    for (double zk : z) {
        if (running_sum == RunningSum::inclusive) v += zk;
        const double cube = zk * zk * zk;
        first += v * cube;
        second += v * v * cube;
        if (running_sum == RunningSum::exclusive) v += zk;
    }
    ControlStatistics s;
    s.a_n = first / n;
    s.b_n = second / std::pow(n, 1.0 + hurst.value());
    s.d_n = first / std::pow(n, hurst.twice());
    return s;
}

Thresholds thresholds(HurstExponent hurst, double alpha, QuantileConvention convention,
                      double beta0) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
    double z = standard_normal_quantile(1.0 - alpha / 2.0);
    // Printed tables carry z to three places (1.645) and round that to two (1.65).
    if (convention == QuantileConvention::table) z = std::round(std::round(z * 1000.0) / 10.0) / 100.0;
    Thresholds t;
    t.beta0 = beta0;
    t.beta1 = 3.0 * z / std::sqrt(hurst.twice() + 2.0);
    // P((3/2) chi^2_1 < x) = 2 Phi(sqrt(2x/3)) - 1, so the quantile is 1.5 z^2.
    t.beta2 = 1.5 * z * z;
    return t;
}

AdequacyReport test_hypothesis(const IncrementSeries& y, HurstExponent hurst,
                               const AdequacyOptions& options) {
    const auto z = normalize_increments(y, options.normalizing_constant);

    AdequacyReport report;
    report.hurst = hurst;
    report.statistics = control_statistics(z, hurst, options.running_sum);
    report.thresholds = thresholds(hurst, options.alpha, options.quantiles, options.beta0);
    report.delta = std::abs(report.statistics.a_n + 1.5);

    const auto& s = report.statistics;
    const auto& t = report.thresholds;
    if (hurst.value() < 0.5) {
        report.regime = Regime::antipersistent;
        report.a_n = s.a_n;
        report.b_n = s.b_n;
        const bool ok = report.delta < t.beta0 && std::abs(s.b_n) < t.beta1;
        report.decision = ok ? Decision::accept : Decision::reject;
    } else {
        if (hurst.value() == 0.5) {
            report.notes.push_back("H = 0.5 evaluated with the persistent-regime criterion");
        }
        report.regime = Regime::persistent;
        report.d_n = s.d_n;
        const bool ok = s.d_n > 0.0 && s.d_n < t.beta2;
        report.decision = ok ? Decision::accept : Decision::reject;
    }
    return report;
}

}  // namespace fbm
