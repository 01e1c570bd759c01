// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance                 run every criterion
//   acceptance --criterion N   run criterion N only (exit 1 if it fails)

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fbm/adequacy.hpp"
#include "fbm/estimate.hpp"
#include "fbm/forecast.hpp"
#include "fbm/pipeline.hpp"
#include "fbm/rng.hpp"
#include "fbm/simulate.hpp"
#include "oracle.hpp"

using namespace fbm;

namespace {

// Tolerances, seed counts and sizes, fixed here and nowhere else.
namespace pin {
// 1: estimator diagonal pattern
constexpr double c1_hit_rate = 0.80;
constexpr double c1_q_lo = 0.9, c1_q_hi = 1.1;
constexpr int c1_seeds = 20;
// 2: estimator accuracy
constexpr double c2_median_error = 0.05;
constexpr int c2_seeds = 20;
constexpr std::size_t c2_n = 1000;
constexpr double c2_step = 0.01;
// 3: sigma-hat unbiasedness
constexpr double c3_rel = 0.05;
constexpr int c3_seeds = 200;
constexpr std::size_t c3_n = 500;
// 4: forecast regimes
constexpr double c4_persistent_max = 0.05;
constexpr double c4_antipersistent_min = 0.2;
constexpr double c4_mse_rel = 0.10;
constexpr int c4_seeds = 20;
constexpr int c4_mse_paths = 2000;
constexpr std::size_t c4_mse_m = 50;
// 5: adequacy on true fBm
constexpr double c5_inside_rate = 0.85;
constexpr double c5_beta2 = 4.08;
constexpr int c5_seeds = 100;
constexpr double c5_an_tol = 0.3;
// 6: logistic rejection
constexpr std::size_t c6_n = 1049;
constexpr double c6_u1 = 0.2;
constexpr double c6_h_lo = 0.1, c6_h_hi = 0.2;
// 7: thresholds
constexpr double c7_beta1_tol = 0.01;
constexpr double c7_beta2_tol = 0.03;
constexpr double c7_mc_rel = 0.02;
constexpr int c7_draws = 1000000;
// 8: lambda solver
constexpr double c8_exact_tol = 1e-9;
constexpr double c8_tol = 0.02;
// 9: oracle equivalence
constexpr double c9_rel = 1e-8;
constexpr std::size_t c9_max_dim = 12;
// 10: conditioning diagnostics
constexpr std::size_t c10_dim = 500;
constexpr double c10_h = 0.9;
// 11: pipeline self-consistency
constexpr double c11_h_tol = 0.1;
constexpr double c11_accept_rate = 0.80;
constexpr double c11_median_error = 0.05;
constexpr int c11_seeds = 20;
constexpr std::size_t c11_m = 600, c11_r = 4, c11_n = 700;
}  // namespace pin

struct Outcome {
    bool ok = true;
    std::vector<std::string> lines;

    void check(bool cond, const std::string& what) {
        ok = ok && cond;
        lines.push_back(std::string(cond ? "ok   " : "FAIL ") + what);
    }
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double quantile(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

Outcome criterion1() {
    Outcome out;
    const std::vector<double> rows{0.1, 0.3, 0.7, 0.9};
    const std::vector<double> cols{0.1, 0.2, 0.3, 0.4, 0.6, 0.7, 0.8, 0.9};
    for (std::size_t n : {200u, 1000u}) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const FbmGenerator gen(n, HurstExponent(rows[i]), Volatility(1.0));
            int hits = 0;
            std::vector<double> diag;
            for (int s = 0; s < pin::c1_seeds; ++s) {
                const auto y = gen.increments(static_cast<std::uint64_t>(s));
                std::size_t best = 0;
                double best_dev = INFINITY;
                for (std::size_t j = 0; j < cols.size(); ++j) {
                    const double q = q_statistic(y, HurstExponent(cols[j]));
                    if (cols[j] == rows[i]) diag.push_back(q);
                    if (std::abs(q - 1.0) < best_dev) {
                        best_dev = std::abs(q - 1.0);
                        best = j;
                    }
                }
                hits += cols[best] == rows[i];
            }
            const double rate = static_cast<double>(hits) / pin::c1_seeds;
            const double mq = median(diag);
            out.check(rate >= pin::c1_hit_rate && mq >= pin::c1_q_lo && mq <= pin::c1_q_hi,
                      fmt("n=%zu H=%.1f: argmin on diagonal %.0f%% (need >= %.0f%%), median q %.4f (need [%.1f, %.1f])",
                          n, rows[i], 100 * rate, 100 * pin::c1_hit_rate, mq, pin::c1_q_lo, pin::c1_q_hi));
        }
    }
    return out;
}

Outcome criterion2() {
    Outcome out;
    for (double h : {0.1, 0.3, 0.7}) {
        const FbmGenerator gen(pin::c2_n, HurstExponent(h), Volatility(1.0));
        std::vector<double> err;
        for (int s = 0; s < pin::c2_seeds; ++s) {
            err.push_back(std::abs(estimate_hurst(gen.increments(static_cast<std::uint64_t>(s)), pin::c2_step)
                                       .hurst.value() - h));
        }
        const double me = median(err);
        out.check(me <= pin::c2_median_error,
                  fmt("H=%.1f: median |H_hat - H| = %.4f (need <= %.2f)", h, me, pin::c2_median_error));
    }
    return out;
}

Outcome criterion3() {
    Outcome out;
    for (double sigma : {1.0, 2.0}) {
        for (double h : {0.3, 0.7}) {
            const FbmGenerator gen(pin::c3_n, HurstExponent(h), Volatility(sigma));
            double mean = 0.0;
            for (int s = 0; s < pin::c3_seeds; ++s) {
                const double v = sigma_hat_2(gen.increments(static_cast<std::uint64_t>(s)), HurstExponent(h)).value();
                mean += v * v / pin::c3_seeds;
            }
            const double rel = std::abs(mean / (sigma * sigma) - 1.0);
            out.check(rel <= pin::c3_rel, fmt("sigma^2=%.0f H=%.1f: mean sigma_hat^2 = %.4f, off by %.2f%% (need <= %.0f%%)",
                                              sigma * sigma, h, mean, 100 * rel, 100 * pin::c3_rel));
        }
    }
    return out;
}

Outcome criterion4() {
    Outcome out;
    const std::size_t r = 8;
    auto per_step = [&](double h, std::size_t m) {
        const HurstExponent hurst(h);
        const FbmGenerator gen(m + r, hurst, Volatility(1.0));
        const ConditionalForecaster fc(value_correlation_matrix(m + r, hurst), r);
        std::vector<std::vector<double>> steps(r);
        for (int s = 0; s < pin::c4_seeds; ++s) {
            const auto path = gen.path(static_cast<std::uint64_t>(s));
            const auto f = fc.predict(path.values().subspan(1, m));
            for (std::size_t j = 0; j < r; ++j) {
                steps[j].push_back(forecast_error(f.predictions[j], path[m + 1 + j]).value);
            }
        }
        return steps;
    };
    for (auto [h, m] : {std::pair{0.9, std::size_t{500}}, std::pair{0.7, std::size_t{1000}}}) {
        const auto steps = per_step(h, m);
        double worst = 0.0;
        for (const auto& s : steps) worst = std::max(worst, median(s));
        out.check(worst <= pin::c4_persistent_max,
                  fmt("H=%.1f m=%zu: largest per-step median relative error %.4f (need <= %.2f)", h, m, worst,
                      pin::c4_persistent_max));
    }
    {
        const auto steps = per_step(0.3, 100);
        std::vector<double> all;
        for (const auto& s : steps) all.insert(all.end(), s.begin(), s.end());
        const double me = median(all);
        out.check(me >= pin::c4_antipersistent_min,
                  fmt("H=0.3 m=100: median relative error %.4f (need >= %.1f)", me, pin::c4_antipersistent_min));
    }
    for (double h : {0.3, 0.7}) {
        const std::size_t m = pin::c4_mse_m;
        const HurstExponent hurst(h);
        const FbmGenerator gen(m + 1, hurst, Volatility(1.0));
        const ConditionalForecaster fc(value_correlation_matrix(m + 1, hurst), 1);
        const double scale = std::pow(static_cast<double>(m + 1), -2.0 * h);
        double mse = 0.0;
        for (int s = 0; s < pin::c4_mse_paths; ++s) {
            const auto path = gen.path(static_cast<std::uint64_t>(s));
            const double e = fc.predict(path.values().subspan(1, m)).predictions[0] - path[m + 1];
            mse += e * e / pin::c4_mse_paths;
        }
        const double delta2 = fc.predict(std::vector<double>(m, 0.0)).one_step_mse * scale;
        const double rel = std::abs(mse / delta2 - 1.0);
        out.check(rel <= pin::c4_mse_rel, fmt("H=%.1f m=%zu: delta^2 %.4e vs Monte Carlo MSE %.4e, off by %.1f%% (need <= %.0f%%)",
                                              h, m, delta2, mse, 100 * rel, 100 * pin::c4_mse_rel));
    }
    return out;
}

Outcome criterion5() {
    Outcome out;
    for (double h : {0.6, 0.7, 0.8, 0.9}) {
        const FbmGenerator gen(1000, HurstExponent(h), Volatility(1.0));
        int inside = 0;
        for (int s = 0; s < pin::c5_seeds; ++s) {
            const auto z = normalize_increments(gen.increments(static_cast<std::uint64_t>(s)));
            const double d = control_statistics(z, HurstExponent(h)).d_n;
            inside += d > 0.0 && d < pin::c5_beta2;
        }
        const double rate = static_cast<double>(inside) / pin::c5_seeds;
        out.check(rate >= pin::c5_inside_rate, fmt("H=%.1f n=1000: D_n in (0, %.2f) for %.0f%% of seeds (need >= %.0f%%)",
                                                   h, pin::c5_beta2, 100 * rate, 100 * pin::c5_inside_rate));
    }
    for (double h : {0.1, 0.2}) {
        const FbmGenerator gen(2000, HurstExponent(h), Volatility(1.0));
        double mean = 0.0;
        for (int s = 0; s < pin::c5_seeds; ++s) {
            const auto z = normalize_increments(gen.increments(static_cast<std::uint64_t>(s)));
            mean += control_statistics(z, HurstExponent(h)).a_n / pin::c5_seeds;
        }
        out.check(std::abs(mean + 1.5) <= pin::c5_an_tol,
                  fmt("H=%.1f n=2000: mean A_n = %.4f (need within %.1f of -1.5)", h, mean, pin::c5_an_tol));
    }
    return out;
}

Outcome criterion6() {
    Outcome out;
    const auto y = generate_logistic(pin::c6_n, pin::c6_u1).increments();
    const auto est = estimate_hurst(y, 0.01);
    const double h = est.hurst.value();
    out.check(h >= pin::c6_h_lo && h <= pin::c6_h_hi,
              fmt("H_hat = %.2f (need [%.1f, %.1f])", h, pin::c6_h_lo, pin::c6_h_hi));
    const auto rep = test_hypothesis(y, est.hurst);
    out.check(rep.decision == Decision::reject, "decision at H_hat: " + to_string(rep.decision) + " (need reject)");
    out.check(rep.statistics.a_n > 0.0, fmt("A_n = %.4f (need > 0)", rep.statistics.a_n));
    return out;
}

Outcome criterion7() {
    Outcome out;
    const double b03 = thresholds(HurstExponent(0.3), 0.1).beta1;
    const double b01 = thresholds(HurstExponent(0.1), 0.1).beta1;
    const double b2 = thresholds(HurstExponent(0.7), 0.1).beta2;
    out.check(std::abs(b03 - 3.07) <= pin::c7_beta1_tol, fmt("beta_1(0.3) = %.4f (need 3.07 +- %.2f)", b03, pin::c7_beta1_tol));
    out.check(std::abs(b01 - 3.34) <= pin::c7_beta1_tol, fmt("beta_1(0.1) = %.4f (need 3.34 +- %.2f)", b01, pin::c7_beta1_tol));
    out.check(std::abs(b2 - 4.08) <= pin::c7_beta2_tol, fmt("beta_2 = %.4f (need 4.08 +- %.2f)", b2, pin::c7_beta2_tol));

    NormalStream stream(2024);
    std::vector<double> g(pin::c7_draws);
    stream.fill(g);
    std::vector<double> chi(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) chi[i] = 1.5 * g[i] * g[i];
    const double q2 = quantile(chi, 0.9);
    out.check(std::abs(q2 / b2 - 1.0) <= pin::c7_mc_rel,
              fmt("Monte Carlo 0.9-quantile of (3/2)B(1)^2 = %.4f vs beta_2 %.4f (need within %.0f%%)", q2, b2,
                  100 * pin::c7_mc_rel));
    for (double h : {0.1, 0.3}) {
        const double sd = 3.0 / std::sqrt(2.0 * h + 2.0);
        std::vector<double> abs3(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) abs3[i] = std::abs(sd * g[i]);
        const double q1 = quantile(abs3, 0.9);
        const double b1 = thresholds(HurstExponent(h), 0.1).beta1;
        out.check(std::abs(q1 / b1 - 1.0) <= pin::c7_mc_rel,
                  fmt("H=%.1f: Monte Carlo two-sided 0.9-quantile of 3 eta = %.4f vs beta_1 %.4f (need within %.0f%%)", h,
                      q1, b1, 100 * pin::c7_mc_rel));
    }
    return out;
}

Outcome criterion8() {
    Outcome out;
    const double l1 = solve_lambda(2.0 / std::numbers::pi);
    const double l2 = solve_lambda(0.74);
    const double l3 = solve_lambda(0.50);
    out.check(std::abs(l1 - 1.0) <= pin::c8_exact_tol, fmt("d = 2/pi: lambda = %.12f (need 1 +- 1e-9)", l1));
    out.check(std::abs(l2 - 0.75) <= pin::c8_tol, fmt("d = 0.74: lambda = %.4f (need 0.75 +- %.2f)", l2, pin::c8_tol));
    out.check(std::abs(l3 - 1.37) <= pin::c8_tol, fmt("d = 0.50: lambda = %.4f (need 1.37 +- %.2f)", l3, pin::c8_tol));
    return out;
}

Outcome criterion9() {
    Outcome out;
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    double worst_fc = 0.0, worst_qf = 0.0;
    for (double h : {0.2, 0.5, 0.8}) {
        for (std::size_t dim = 2; dim <= pin::c9_max_dim; ++dim) {
            for (const auto& s : {increment_correlation_matrix(dim, HurstExponent(h)),
                                  value_correlation_matrix(dim, HurstExponent(h))}) {
                oracle::Matrix dense(dim, std::vector<double>(dim));
                for (std::size_t j = 0; j < dim; ++j) {
                    for (std::size_t k = 0; k < dim; ++k) dense[j][k] = s.entry(j + 1, k + 1);
                }
                std::vector<double> y(dim);
                for (auto& v : y) v = g(rng);
                const double ref = oracle::quadratic(oracle::invert(dense), y);
                worst_qf = std::max(worst_qf, std::abs(quadratic_form(s, y) - ref) / std::abs(ref));
                if (s.kind() == MatrixKind::increment) {
                    const double fast = increment_quadratic_form(y, HurstExponent(h));
                    worst_qf = std::max(worst_qf, std::abs(fast - ref) / std::abs(ref));
                }
                for (std::size_t r = 1; r + 2 <= dim; ++r) {
                    const std::vector<double> xi(y.begin(), y.end() - static_cast<std::ptrdiff_t>(r));
                    const auto want = oracle::conditional_mean(dense, xi);
                    const auto got = conditional_forecast(xi, s, r).predictions;
                    for (std::size_t q = 0; q < r; ++q) {
                        worst_fc = std::max(worst_fc, std::abs(got[q] - want[q]) / std::max(std::abs(want[q]), 1e-300));
                    }
                }
            }
        }
    }
    out.check(worst_qf <= pin::c9_rel, fmt("quadratic forms: worst relative deviation %.2e (need <= 1e-8)", worst_qf));
    out.check(worst_fc <= pin::c9_rel, fmt("conditional forecasts: worst relative deviation %.2e (need <= 1e-8)", worst_fc));
    return out;
}

Outcome criterion10() {
    Outcome out;
    const auto s = value_correlation_matrix(pin::c10_dim, HurstExponent(pin::c10_h));
    const auto& w = s.conditioning_warning();
    out.check(w.has_value(), fmt("dim %zu H=%.1f: ConditioningWarning %s (log10 det %.1f, condition %.2e)", pin::c10_dim,
                                 pin::c10_h, w ? "raised" : "missing", s.log10_determinant(), s.condition_estimate()));
    NormalStream stream(10);
    std::vector<double> b(pin::c10_dim);
    stream.fill(b);
    const auto z = spd_solve(s, b);
    const bool finite = std::all_of(z.solution.begin(), z.solution.end(), [](double v) { return std::isfinite(v); });
    out.check(finite && z.warning.has_value(), fmt("solve outputs finite: %s, warning attached: %s (residual %.2e)",
                                                   finite ? "yes" : "no", z.warning ? "yes" : "no", z.relative_residual));
    const auto path = generate_fbm({pin::c10_dim + 8, HurstExponent(pin::c10_h), Volatility(1.0), 1});
    const auto f = forecast_fbm_values(path, HurstExponent(pin::c10_h), pin::c10_dim, 8);
    const bool fin = std::all_of(f.predictions.begin(), f.predictions.end(), [](double v) { return std::isfinite(v); });
    out.check(fin && !f.warnings.empty(), fmt("forecast at m=%zu: finite %s, %zu warning(s)", pin::c10_dim,
                                               fin ? "yes" : "no", f.warnings.size()));
    return out;
}

Outcome criterion11() {
    Outcome out;
    std::vector<double> herr, errs;
    int accepted = 0;
    for (int s = 0; s < pin::c11_seeds; ++s) {
        const auto x = generate_fbm({pin::c11_n, HurstExponent(0.7), Volatility(0.5), 1000 + static_cast<std::uint64_t>(s)});
        std::vector<double> v(x.size());
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::exp(0.2 + 0.001 * static_cast<double>(k) + x[k]);
        const Series learn(std::vector<double>(v.begin(), v.begin() + pin::c11_m + 1));
        const auto model = fit(learn);
        herr.push_back(std::abs(model.hurst.value() - 0.7));
        accepted += model.adequacy.decision == Decision::accept;
        const auto f = predict(model, learn, pin::c11_m, pin::c11_r);
        for (std::size_t j = 0; j < pin::c11_r; ++j) errs.push_back(relative_error(f.values[j], v[pin::c11_m + 1 + j]));
    }
    const double med_h = median(herr);
    out.check(med_h <= pin::c11_h_tol, fmt("median |H_hat - 0.7| = %.4f, worst seed %.4f (need median <= %.1f)", med_h,
                                           *std::max_element(herr.begin(), herr.end()), pin::c11_h_tol));
    const double rate = static_cast<double>(accepted) / pin::c11_seeds;
    out.check(rate >= pin::c11_accept_rate,
              fmt("adequacy accepted in %.0f%% of seeds (need >= %.0f%%)", 100 * rate, 100 * pin::c11_accept_rate));
    const double me = median(errs);
    out.check(me <= pin::c11_median_error, fmt("m=%zu r=%zu: median relative error %.4f (need <= %.2f)", pin::c11_m,
                                               pin::c11_r, me, pin::c11_median_error));
    return out;
}

struct Criterion {
    const char* title;
    std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all{
        {"estimator diagonal pattern", criterion1},
        {"estimator accuracy", criterion2},
        {"sigma-hat unbiasedness", criterion3},
        {"forecast quality regimes", criterion4},
        {"adequacy statistics on true fBm", criterion5},
        {"logistic sequence rejection", criterion6},
        {"threshold closed forms", criterion7},
        {"lambda solver", criterion8},
        {"oracle equivalence", criterion9},
        {"conditioning diagnostics", criterion10},
        {"pipeline self-consistency", criterion11},
    };
    return all;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
            return 2;
        }
    }
    const auto& all = criteria();
    if (only < 0 || only > static_cast<int>(all.size())) {
        std::fprintf(stderr, "criterion must be 1..%zu\n", all.size());
        return 2;
    }

    int failed = 0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (only && static_cast<int>(i + 1) != only) continue;
        Outcome res;
        try {
            res = all[i].run();
        } catch (const std::exception& e) {
            res.check(false, std::string("threw: ") + e.what());
        }
        for (const auto& line : res.lines) std::printf("    %s\n", line.c_str());
        std::printf("%s criterion %zu: %s\n", res.ok ? "PASS" : "FAIL", i + 1, all[i].title);
        std::fflush(stdout);
        failed += !res.ok;
    }
    return failed ? 1 : 0;
}
