#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "fbm/adequacy.hpp"
#include "fbm/estimate.hpp"
#include "fbm/forecast.hpp"
#include "fbm/pipeline.hpp"
#include "fbm/simulate.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

std::vector<double> to_vector(std::span<const double> v) { return {v.begin(), v.end()}; }

py::dict estimate(const std::vector<double>& y, double grid_step, bool compat_08) {
    fbm::EstimatorOptions opts;
    if (compat_08) opts.normalizing_constant = 0.8;
    const auto est = fbm::estimate_hurst(fbm::IncrementSeries(y), grid_step, opts);
    std::vector<double> hs, qs;
    for (const auto& p : est.profile) {
        hs.push_back(p.hurst);
        qs.push_back(p.q);
    }
    return py::dict("hurst"_a = est.hurst.value(), "sigma"_a = est.sigma.value(), "q_at_min"_a = est.q_at_min,
                    "profile_hurst"_a = hs, "profile_q"_a = qs);
}

py::dict adequacy(const std::vector<double>& y, double hurst, double alpha) {
    fbm::AdequacyOptions opts;
    opts.alpha = alpha;
    const auto r = fbm::test_hypothesis(fbm::IncrementSeries(y), fbm::HurstExponent(hurst), opts);
    return py::dict("regime"_a = fbm::to_string(r.regime), "decision"_a = fbm::to_string(r.decision),
                    "a_n"_a = r.statistics.a_n, "b_n"_a = r.statistics.b_n, "d_n"_a = r.statistics.d_n,
                    "delta"_a = r.delta, "beta0"_a = r.thresholds.beta0, "beta1"_a = r.thresholds.beta1,
                    "beta2"_a = r.thresholds.beta2, "notes"_a = r.notes);
}

py::dict forecast(const std::vector<double>& path, double hurst, std::size_t m, std::size_t r) {
    const auto f = fbm::forecast_fbm_values(fbm::Series(path), fbm::HurstExponent(hurst), m, r);
    return py::dict("predictions"_a = f.predictions, "one_step_mse"_a = f.one_step_mse, "warnings"_a = f.warnings);
}

py::dict pipeline(const std::vector<double>& s, std::size_t m, std::size_t r, std::size_t window_size, bool detrend) {
    fbm::PipelineConfig cfg;
    cfg.window_size = window_size;
    cfg.detrend = detrend;
    const fbm::Series learn(std::vector<double>(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(m + 1)));
    const auto model = fbm::fit(learn, cfg);
    const auto f = fbm::predict(model, learn, m, r);
    return py::dict("hurst"_a = model.hurst.value(), "sigma"_a = model.sigma.value(), "lambda"_a = model.lambda,
                    "kurtosis"_a = model.kurtosis, "decision"_a = fbm::to_string(model.adequacy.decision),
                    "stationary"_a = model.stationarity.passed, "predictions"_a = f.values);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact fBm simulation, Hurst estimation, conditional forecasting and adequacy checks";

    auto base = py::register_exception<fbm::Error>(m, "FbmError", PyExc_RuntimeError);
    py::register_exception<fbm::ValidationError>(m, "ValidationError", base);
    py::register_exception<fbm::DegenerateInputError>(m, "DegenerateInputError", base);
    py::register_exception<fbm::NonPositiveDataError>(m, "NonPositiveDataError", base);
    py::register_exception<fbm::OutOfRangeError>(m, "OutOfRangeError", base);

    m.def("simulate",
          [](std::size_t n, double hurst, double sigma, std::uint64_t seed) {
              return to_vector(fbm::generate_fbm({n, fbm::HurstExponent(hurst), fbm::Volatility(sigma), seed}).values());
          },
          "n"_a, "hurst"_a, "sigma"_a = 1.0, "seed"_a = 0,
          "Path B(0), ..., B(n) of sigma * B_H sampled at k/n.");
    m.def("logistic",
          [](std::size_t n, double initial) { return to_vector(fbm::generate_logistic(n, initial).values()); },
          "n"_a, "initial"_a);
    m.def("increments", [](const std::vector<double>& path) {
        return to_vector(fbm::Series(path).increments().values());
    });
    m.def("q_statistic",
          [](const std::vector<double>& y, double hurst) {
              return fbm::q_statistic(fbm::IncrementSeries(y), fbm::HurstExponent(hurst));
          },
          "y"_a, "hurst"_a);
    m.def("estimate", &estimate, "y"_a, "grid_step"_a = 0.01, "compat_08"_a = false);
    m.def("test_hypothesis", &adequacy, "y"_a, "hurst"_a, "alpha"_a = 0.1);
    m.def("forecast", &forecast, "path"_a, "hurst"_a, "m"_a, "r"_a);
    m.def("solve_lambda", &fbm::solve_lambda, "d"_a);
    m.def("pipeline", &pipeline, "s"_a, "m"_a, "r"_a, "window_size"_a = 100, "detrend"_a = true,
          "Fit the positive-series pipeline on s[0..m] and forecast r steps ahead.");
}
