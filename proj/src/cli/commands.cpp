#include "cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>

#include "cli/csv_io.hpp"
#include "fbm/adequacy.hpp"
#include "fbm/errors.hpp"
#include "fbm/estimate.hpp"
#include "fbm/forecast.hpp"
#include "fbm/pipeline.hpp"
#include "fbm/simulate.hpp"

namespace fbmcli {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kMinEstimateRows = 50;

template <class T>
T get(const json& config, const char* key) {
    if (!config.contains(key) || config.at(key).is_null()) {
        throw fbm::ValidationError(std::string("missing option '") + key + "'");
    }
    try {
        return config.at(key).get<T>();
    } catch (const json::exception&) {
        throw fbm::ValidationError(std::string("option '") + key + "' has the wrong type");
    }
}

std::optional<double> get_optional(const json& config, const char* key) {
    if (!config.contains(key) || config.at(key).is_null()) return std::nullopt;
    return get<double>(config, key);
}

std::size_t get_count(const json& config, const char* key) {
    const auto v = get<long long>(config, key);
    if (v < 0) throw fbm::ValidationError(std::string("option '") + key + "' must be non-negative");
    return static_cast<std::size_t>(v);
}

void set_default(json& config, const char* key, json value) {
    if (!config.contains(key) || config[key].is_null()) config[key] = std::move(value);
}

double normalizing_constant(const json& config) {
    return get<bool>(config, "compat_08") ? fbm::kCompatNormalizingConstant : fbm::kMeanAbsNormal;
}

fbm::EstimatorOptions estimator_options(const json& config) {
    fbm::EstimatorOptions opts;
    opts.normalizing_constant = normalizing_constant(config);
    const auto sel = get<std::string>(config, "selection");
    if (sel == "nontrivial") {
        opts.selection = fbm::RootSelection::nontrivial_crossing;
    } else if (sel == "argmin") {
        opts.selection = fbm::RootSelection::global_argmin;
    } else {
        throw fbm::ValidationError("selection must be 'nontrivial' or 'argmin', got '" + sel + "'");
    }
    return opts;
}

fbm::AdequacyOptions adequacy_options(const json& config) {
    fbm::AdequacyOptions opts;
    opts.alpha = get<double>(config, "alpha");
    opts.beta0 = get<double>(config, "beta0");
    opts.normalizing_constant = normalizing_constant(config);
    opts.quantiles = get<bool>(config, "exact_quantiles") ? fbm::QuantileConvention::exact
                                                          : fbm::QuantileConvention::table;
    const auto rs = get<std::string>(config, "running_sum");
    if (rs == "exclusive") {
        opts.running_sum = fbm::RunningSum::exclusive;
    } else if (rs == "inclusive") {
        opts.running_sum = fbm::RunningSum::inclusive;
    } else {
        throw fbm::ValidationError("running_sum must be 'exclusive' or 'inclusive'");
    }
    return opts;
}

/// Increments of the input file: the file itself when it already holds
/// increments, first differences of its values otherwise.
fbm::IncrementSeries load_increments(const json& config, std::size_t min_rows) {
    const auto data = read_csv(get<std::string>(config, "input"));
    if (data.values.size() < min_rows) {
        throw fbm::ValidationError("input has " + std::to_string(data.values.size()) +
                                   " rows, need at least " + std::to_string(min_rows));
    }
    if (get<bool>(config, "increments")) return fbm::IncrementSeries(data.values);
    return fbm::Series(data.values).increments();
}

double quantile(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double median(const std::vector<double>& v) { return quantile(v, 0.5); }
double iqr(const std::vector<double>& v) { return quantile(v, 0.75) - quantile(v, 0.25); }

json estimate_json(const fbm::HurstEstimate& est) {
    json profile_h = json::array(), profile_q = json::array();
    for (const auto& p : est.profile) {
        profile_h.push_back(p.hurst);
        profile_q.push_back(p.q);
    }
    return {{"hurst", est.hurst.value()},
            {"sigma", est.sigma.value()},
            {"q_at_min", est.q_at_min},
            {"grid_step", est.grid_step},
            {"profile", {{"hurst", profile_h}, {"q", profile_q}}}};
}

json adequacy_json(const fbm::AdequacyReport& rep) {
    json out = {{"hurst", rep.hurst.value()},
                {"regime", fbm::to_string(rep.regime)},
                {"a_n", rep.statistics.a_n},
                {"b_n", rep.statistics.b_n},
                {"d_n", rep.statistics.d_n},
                {"delta", rep.delta},
                {"beta0", rep.thresholds.beta0},
                {"beta1", rep.thresholds.beta1},
                {"beta2", rep.thresholds.beta2},
                {"decision", fbm::to_string(rep.decision)},
                {"notes", rep.notes}};
    return out;
}

std::string hurst_tag(double h) {
    std::ostringstream s;
    s << h;
    return s.str();
}

// ---------------------------------------------------------------- simulate

Outcome cmd_simulate(const json& config, bool write_outputs) {
    fbm::SimulationSpec spec;
    spec.n = get_count(config, "n");
    spec.hurst = fbm::HurstExponent(get<double>(config, "hurst"));
    spec.sigma = fbm::Volatility(get<double>(config, "sigma"));
    spec.seed = get<std::uint64_t>(config, "seed");
    const auto path = fbm::generate_fbm(spec);

    Outcome out;
    out.seeds.push_back(spec.seed);
    out.results["rows"] = path.size();
    out.results["values"] = std::vector<double>(path.values().begin(), path.values().end());
    if (write_outputs) write_series_csv(get<std::string>(config, "output"), path.values());
    return out;
}

// ---------------------------------------------------------------- estimate

Outcome cmd_estimate(const json& config, bool write_outputs) {
    const auto y = load_increments(config, kMinEstimateRows);
    const auto est = fbm::estimate_hurst(y, get<double>(config, "grid_step"), estimator_options(config));

    Outcome out;
    out.results = estimate_json(est);
    out.results["n"] = y.size();
    out.warnings = est.diagnostics;

    const auto output = get<std::string>(config, "output");
    if (write_outputs && !output.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& p : est.profile) {
            rows.push_back({format_double(p.hurst), format_double(p.q), format_double(std::abs(p.q - 1.0))});
        }
        write_table_csv(output, {"hurst", "q", "abs_q_minus_1"}, rows);
    }
    return out;
}

// ---------------------------------------------------------------- check

Outcome cmd_check(const json& config, bool) {
    const auto y = load_increments(config, kMinEstimateRows);
    Outcome out;
    fbm::HurstExponent hurst{0.5};
    if (const auto h = get_optional(config, "hurst")) {
        hurst = fbm::HurstExponent(*h);
        out.results["hurst_source"] = "given";
    } else {
        const auto est = fbm::estimate_hurst(y, get<double>(config, "grid_step"), estimator_options(config));
        hurst = est.hurst;
        out.results["hurst_source"] = "estimated";
        out.results["estimate"] = estimate_json(est);
        out.warnings = est.diagnostics;
    }
    const auto rep = fbm::test_hypothesis(y, hurst, adequacy_options(config));
    out.results["adequacy"] = adequacy_json(rep);
    out.results["n"] = y.size();
    return out;
}

// ---------------------------------------------------------------- forecast

void attach_errors(json& results, std::span<const double> predicted, std::span<const double> actual) {
    json errors = json::array(), absolute = json::array();
    for (std::size_t j = 0; j < predicted.size(); ++j) {
        const auto e = fbm::forecast_error(predicted[j], actual[j]);
        errors.push_back(e.value);
        absolute.push_back(e.absolute);
    }
    results["actuals"] = std::vector<double>(actual.begin(), actual.end());
    results["errors"] = errors;
    results["error_is_absolute"] = absolute;
}

void attach_forecast(Outcome& out, const fbm::ForecastResult& f) {
    out.results["one_step_mse"] = f.one_step_mse;
    out.results["mse_clamped"] = f.mse_clamped;
    out.results["jitter_used"] = f.jitter_used;
    out.results["condition_estimate"] = f.condition_estimate;
    out.results["relative_residual"] = f.relative_residual;
    out.warnings.insert(out.warnings.end(), f.warnings.begin(), f.warnings.end());
}

Outcome cmd_forecast(const json& config, bool write_outputs) {
    const auto data = read_csv(get<std::string>(config, "input"));
    const auto m = get_count(config, "learning_size");
    const auto r = get_count(config, "horizon");
    const auto mode = get<std::string>(config, "mode");
    const auto& v = data.values;
    if (r == 0) throw fbm::ValidationError("horizon must be positive");

    // values and pipeline files start at time 0; increments files at step 1.
    const std::size_t origin = mode == "increments" ? 0 : 1;
    const std::size_t available = v.size() - origin;
    if (m + r > available) {
        throw fbm::ValidationError("learning size " + std::to_string(m) + " + horizon " +
                                   std::to_string(r) + " exceeds the " + std::to_string(available) +
                                   " observations in the input");
    }

    Outcome out;
    auto pick_hurst = [&](const fbm::IncrementSeries& y) {
        if (const auto h = get_optional(config, "hurst")) {
            out.results["hurst_source"] = "given";
            return fbm::HurstExponent(*h);
        }
        const auto est = fbm::estimate_hurst(y, get<double>(config, "grid_step"), estimator_options(config));
        out.results["hurst_source"] = "estimated";
        out.warnings.insert(out.warnings.end(), est.diagnostics.begin(), est.diagnostics.end());
        return est.hurst;
    };

    std::vector<double> predictions;
    std::vector<double> actual;
    if (mode == "values") {
        // Shift so the learning path starts at x_0 = 0, as the model assumes.
        const double x0 = v[0];
        std::vector<double> learn(m + 1);
        for (std::size_t k = 0; k <= m; ++k) learn[k] = v[k] - x0;
        const fbm::Series path(learn);
        const auto y = path.increments();
        const auto hurst = pick_hurst(y);
        const auto f = fbm::forecast_fbm_values(path, hurst, m, r);
        for (double p : f.predictions) predictions.push_back(p + x0);
        actual.assign(v.begin() + static_cast<std::ptrdiff_t>(m + 1),
                      v.begin() + static_cast<std::ptrdiff_t>(m + 1 + r));
        out.results["hurst"] = hurst.value();
        const auto sigma = fbm::sigma_hat_2(y, hurst);
        out.results["delta"] = sigma.value() * std::pow(static_cast<double>(m), -hurst.value()) *
                               std::sqrt(f.one_step_mse);
        attach_forecast(out, f);
    } else if (mode == "increments") {
        const fbm::IncrementSeries y(std::vector<double>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m)));
        const auto hurst = pick_hurst(y);
        const auto f = fbm::forecast_fbm_increments(fbm::IncrementSeries(v), hurst, m, r);
        predictions = f.predictions;
        actual.assign(v.begin() + static_cast<std::ptrdiff_t>(m),
                      v.begin() + static_cast<std::ptrdiff_t>(m + r));
        out.results["hurst"] = hurst.value();
        const auto sigma = fbm::sigma_hat_2(y, hurst);
        out.results["delta"] = sigma.value() * std::pow(static_cast<double>(m), -hurst.value()) *
                               std::sqrt(f.one_step_mse);
        attach_forecast(out, f);
    } else if (mode == "pipeline") {
        fbm::PipelineConfig cfg;
        cfg.window_size = get_count(config, "window_size");
        cfg.grid_step = get<double>(config, "grid_step");
        cfg.estimator = estimator_options(config);
        cfg.adequacy = adequacy_options(config);
        cfg.detrend = get<bool>(config, "detrend");
        if (const auto h = get_optional(config, "hurst")) cfg.known_hurst = fbm::HurstExponent(*h);
        const fbm::Series learn(std::vector<double>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m + 1)));
        const auto model = fbm::fit(learn, cfg);
        const auto f = fbm::predict(model, learn, m, r);
        predictions = f.values;
        actual.assign(v.begin() + static_cast<std::ptrdiff_t>(m + 1),
                      v.begin() + static_cast<std::ptrdiff_t>(m + 1 + r));
        out.results["hurst_source"] = cfg.known_hurst ? "given" : "estimated";
        out.results["hurst"] = model.hurst.value();
        out.results["sigma"] = model.sigma.value();
        out.results["kurtosis_ratio"] = model.kurtosis;
        out.results["lambda"] = model.lambda;
        out.results["transformed"] = model.transformed;
        out.results["stationarity"] = {{"p_hat", model.stationarity.p_hat_per_window},
                                       {"max_spread", model.stationarity.max_spread},
                                       {"passed", model.stationarity.passed}};
        out.results["adequacy"] = adequacy_json(model.adequacy);
        out.results["log_residual_forecast"] = f.log_residual;
        attach_forecast(out, f.transformed);
        if (!model.stationarity.passed) out.warnings.push_back("stationarity check failed");
        if (model.adequacy.decision == fbm::Decision::reject) {
            out.warnings.push_back("fBm adequacy hypothesis rejected for the transformed increments");
        }
    } else {
        throw fbm::ValidationError("mode must be values, increments or pipeline, got '" + mode + "'");
    }

    out.results["mode"] = mode;
    out.results["learning_size"] = m;
    out.results["horizon"] = r;
    out.results["predictions"] = predictions;
    attach_errors(out.results, predictions, actual);

    const auto output = get<std::string>(config, "output");
    if (write_outputs && !output.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t j = 0; j < r; ++j) {
            rows.push_back({std::to_string(j + 1), format_double(predictions[j]), format_double(actual[j]),
                            format_double(out.results["errors"][j].get<double>())});
        }
        write_table_csv(output, {"step", "prediction", "actual", "error"}, rows);
    }
    return out;
}

// ---------------------------------------------------------------- tables

struct Grid {
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::vector<std::vector<std::vector<double>>> samples;  // [row][col][seed]
};

json summarize(const Grid& g, std::vector<std::vector<std::string>>& median_rows,
               std::vector<std::vector<std::string>>& iqr_rows) {
    json med = json::array(), spread = json::array();
    for (std::size_t i = 0; i < g.row_labels.size(); ++i) {
        json mr = json::array(), sr = json::array();
        std::vector<std::string> mrow{g.row_labels[i]}, srow{g.row_labels[i]};
        for (std::size_t j = 0; j < g.col_labels.size(); ++j) {
            const double a = median(g.samples[i][j]);
            const double b = iqr(g.samples[i][j]);
            mr.push_back(a);
            sr.push_back(b);
            mrow.push_back(format_double(a));
            srow.push_back(format_double(b));
        }
        med.push_back(mr);
        spread.push_back(sr);
        median_rows.push_back(mrow);
        iqr_rows.push_back(srow);
    }
    return {{"rows", g.row_labels}, {"columns", g.col_labels}, {"median", med}, {"iqr", spread}};
}

Outcome cmd_tables(const json& config, bool write_outputs) {
    const auto id = get<int>(config, "table");
    const auto seeds = get_count(config, "seeds");
    const auto base = get<std::uint64_t>(config, "seed");
    const auto dir = fs::path(get<std::string>(config, "output"));
    const double c = normalizing_constant(config);
    if (seeds == 0) throw fbm::ValidationError("seeds must be positive");

    Outcome out;
    out.seeds = {{"base", base}, {"count", seeds}};
    Grid grid;
    std::string first_col;

    if (id == 1) {
        const auto n = get_count(config, "n");
        const std::vector<double> rows{0.1, 0.3, 0.7, 0.9};
        const std::vector<double> cols{0.1, 0.2, 0.3, 0.4, 0.6, 0.7, 0.8, 0.9};
        first_col = "H_true";
        for (double h : rows) grid.row_labels.push_back(hurst_tag(h));
        for (double h : cols) grid.col_labels.push_back(hurst_tag(h));
        grid.samples.assign(rows.size(), std::vector<std::vector<double>>(cols.size()));
        json hit_rate = json::array();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const fbm::FbmGenerator gen(n, fbm::HurstExponent(rows[i]), fbm::Volatility(1.0));
            std::size_t hits = 0;
            for (std::size_t s = 0; s < seeds; ++s) {
                const auto y = gen.increments(base + s);
                std::size_t best = 0;
                double best_dev = INFINITY;
                for (std::size_t j = 0; j < cols.size(); ++j) {
                    const double q = fbm::q_statistic(y, fbm::HurstExponent(cols[j]), c);
                    grid.samples[i][j].push_back(q);
                    if (std::abs(q - 1.0) < best_dev) {
                        best_dev = std::abs(q - 1.0);
                        best = j;
                    }
                }
                if (cols[best] == rows[i]) ++hits;
            }
            hit_rate.push_back(static_cast<double>(hits) / static_cast<double>(seeds));
        }
        out.results["n"] = n;
        out.results["diagonal_hit_rate"] = hit_rate;
    } else if (id == 2) {
        const std::vector<double> hs{0.3, 0.7, 0.9};
        const std::vector<std::size_t> ms{100, 500, 1000};
        const std::size_t r = 8;
        first_col = "H/m";
        for (std::size_t j = 1; j <= r; ++j) grid.col_labels.push_back(std::to_string(j));
        for (double h : hs) {
            for (std::size_t m : ms) {
                grid.row_labels.push_back(hurst_tag(h) + "/" + std::to_string(m));
                const fbm::HurstExponent hurst(h);
                const fbm::FbmGenerator gen(m + r, hurst, fbm::Volatility(1.0));
                const fbm::ConditionalForecaster fc(fbm::value_correlation_matrix(m + r, hurst), r);
                std::vector<std::vector<double>> cells(r);
                for (std::size_t s = 0; s < seeds; ++s) {
                    const auto path = gen.path(base + s);
                    const auto f = fc.predict(path.values().subspan(1, m));
                    for (std::size_t j = 0; j < r; ++j) {
                        cells[j].push_back(fbm::forecast_error(f.predictions[j], path[m + 1 + j]).value);
                    }
                }
                grid.samples.push_back(std::move(cells));
            }
        }
        out.results["horizon"] = r;
    } else if (id == 3) {
        const std::vector<double> hs{0.1, 0.2, 0.3, 0.4, 0.6, 0.7, 0.8, 0.9};
        const std::vector<std::size_t> ns{200, 1000};
        const auto opts = adequacy_options(config);
        first_col = "H/n";
        grid.col_labels = {"A_n", "B_n", "D_n", "beta_1", "accept_rate"};
        for (double h : hs) {
            const fbm::HurstExponent hurst(h);
            for (std::size_t n : ns) {
                grid.row_labels.push_back(hurst_tag(h) + "/" + std::to_string(n));
                const fbm::FbmGenerator gen(n, hurst, fbm::Volatility(1.0));
                std::vector<std::vector<double>> cells(5);
                for (std::size_t s = 0; s < seeds; ++s) {
                    const auto rep = fbm::test_hypothesis(gen.increments(base + s), hurst, opts);
                    cells[0].push_back(rep.statistics.a_n);
                    cells[1].push_back(rep.statistics.b_n);
                    cells[2].push_back(rep.statistics.d_n);
                    cells[3].push_back(rep.thresholds.beta1);
                    cells[4].push_back(rep.decision == fbm::Decision::accept ? 1.0 : 0.0);
                }
                // The accept column carries the rate, not a median of 0/1.
                double rate = 0.0;
                for (double a : cells[4]) rate += a;
                cells[4].assign(1, rate / static_cast<double>(seeds));
                grid.samples.push_back(std::move(cells));
            }
        }
    } else {
        throw fbm::ValidationError("table must be 1, 2 or 3, got " + std::to_string(id));
    }

    std::vector<std::vector<std::string>> median_rows, iqr_rows;
    out.results["table"] = id;
    out.results["grid"] = summarize(grid, median_rows, iqr_rows);

    if (write_outputs) {
        std::vector<std::string> header{first_col};
        header.insert(header.end(), grid.col_labels.begin(), grid.col_labels.end());
        const auto stem = "table" + std::to_string(id);
        write_table_csv(dir / (stem + "_median.csv"), header, median_rows);
        write_table_csv(dir / (stem + "_iqr.csv"), header, iqr_rows);
    }
    return out;
}

using Handler = Outcome (*)(const json&, bool);

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> table{
        {"simulate", cmd_simulate}, {"estimate", cmd_estimate}, {"check", cmd_check},
        {"forecast", cmd_forecast}, {"tables", cmd_tables},
    };
    return table;
}

void compare(const json& a, const json& b, const std::string& where, std::vector<std::string>& diffs) {
    // Parsed non-negative integers come back unsigned; compare those by value.
    const bool both_integers = a.is_number_integer() && b.is_number_integer();
    if (a.type() != b.type() && !both_integers) {
        diffs.push_back(where + ": type differs");
    } else if (a.is_object()) {
        for (const auto& [key, value] : a.items()) {
            if (!b.contains(key)) {
                diffs.push_back(where + "/" + key + ": missing after replay");
            } else {
                compare(value, b.at(key), where + "/" + key, diffs);
            }
        }
        for (const auto& [key, value] : b.items()) {
            if (!a.contains(key)) diffs.push_back(where + "/" + key + ": new after replay");
        }
    } else if (a.is_array()) {
        if (a.size() != b.size()) {
            diffs.push_back(where + ": length " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
            return;
        }
        for (std::size_t i = 0; i < a.size(); ++i) compare(a[i], b[i], where + "/" + std::to_string(i), diffs);
    } else if (a != b) {
        diffs.push_back(where + ": " + a.dump() + " vs " + b.dump());
    }
}

}  // namespace

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const fbm::ParseError*>(&e)) return kExitParse;
    if (dynamic_cast<const fbm::IoError*>(&e)) return kExitIo;
    if (dynamic_cast<const fbm::FactorizationError*>(&e) || dynamic_cast<const fbm::EstimationError*>(&e)) {
        return kExitNumeric;
    }
    if (dynamic_cast<const fbm::Error*>(&e)) return kExitValidation;
    if (dynamic_cast<const json::exception*>(&e)) return kExitParse;
    return kExitUnexpected;
}

fs::path default_output_dir() {
    if (const char* dir = std::getenv("FBM_OUTPUT_DIR"); dir && *dir) return fs::path(dir);
    return fs::current_path();
}

json normalize_config(const std::string& command, json config) {
    if (!config.is_object()) throw fbm::ValidationError("config must be an object");
    if (!handlers().contains(command)) throw fbm::ValidationError("unknown command '" + command + "'");

    const fs::path out_dir = default_output_dir();
    auto resolve = [&](const char* key) {
        const auto p = config[key].get<std::string>();
        if (!p.empty() && fs::path(p).is_relative()) config[key] = (out_dir / p).string();
    };

    set_default(config, "compat_08", false);
    set_default(config, "selection", "nontrivial");
    set_default(config, "grid_step", 0.01);
    set_default(config, "report", "");
    set_default(config, "output", "");

    if (command == "simulate") {
        set_default(config, "hurst", 0.5);
        set_default(config, "sigma", 1.0);
        set_default(config, "seed", 0);
        if (config["output"].get<std::string>().empty()) {
            config["output"] = "fbm_n" + std::to_string(get_count(config, "n")) + "_H" +
                               hurst_tag(get<double>(config, "hurst")) + "_seed" +
                               std::to_string(get<std::uint64_t>(config, "seed")) + ".csv";
        }
        resolve("output");
        if (config["report"].get<std::string>().empty()) {
            config["report"] = config["output"].get<std::string>() + ".report.json";
        }
    } else if (command == "tables") {
        set_default(config, "seeds", 20);
        set_default(config, "seed", 1);
        set_default(config, "n", 1000);
        set_default(config, "alpha", 0.1);
        set_default(config, "beta0", 1.5);
        set_default(config, "exact_quantiles", false);
        set_default(config, "running_sum", "exclusive");
        if (config["output"].get<std::string>().empty()) config["output"] = "tables";
        resolve("output");
    } else {
        set_default(config, "increments", false);
        set_default(config, "hurst", nullptr);
        set_default(config, "alpha", 0.1);
        set_default(config, "beta0", 1.5);
        set_default(config, "exact_quantiles", false);
        set_default(config, "running_sum", "exclusive");
        if (command == "forecast") {
            set_default(config, "mode", "values");
            set_default(config, "window_size", 100);
            set_default(config, "detrend", true);
            set_default(config, "horizon", 8);
        }
        resolve("output");
    }
    return config;
}

Outcome execute(const std::string& command, const json& config, bool write_outputs) {
    const auto it = handlers().find(command);
    if (it == handlers().end()) throw fbm::ValidationError("unknown command '" + command + "'");
    return it->second(config, write_outputs);
}

json make_report(const std::string& command, const json& config, const Outcome& outcome,
                 double duration_seconds) {
    return {{"schema_version", kReportSchemaVersion},
            {"command", command},
            {"config", config},
            {"seeds", outcome.seeds},
            {"results", outcome.results},
            {"warnings", outcome.warnings},
            {"duration_seconds", duration_seconds}};
}

RunResult run(const std::string& command, json config) {
    RunResult result;
    try {
        const auto start = std::chrono::steady_clock::now();
        config = normalize_config(command, std::move(config));
        const auto outcome = execute(command, config);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        result.report = make_report(command, config, outcome, elapsed.count());
        if (const auto path = config["report"].get<std::string>(); !path.empty()) {
            write_text(path, result.report.dump(2) + "\n");
        }
    } catch (const std::exception& e) {
        result.exit_code = exit_code_for(e);
        result.error = e.what();
    }
    return result;
}

ReplayResult replay(const json& report) {
    if (!report.is_object() || !report.contains("schema_version") || !report.contains("command") ||
        !report.contains("config") || !report.contains("results")) {
        throw fbm::ValidationError("not a run report");
    }
    if (report.at("schema_version") != kReportSchemaVersion) {
        throw fbm::ValidationError("unsupported report schema version " + report.at("schema_version").dump());
    }
    const auto command = report.at("command").get<std::string>();
    ReplayResult out;
    out.recomputed = execute(command, report.at("config"), false).results;
    compare(report.at("results"), out.recomputed, "results", out.mismatches);
    out.identical = out.mismatches.empty();
    return out;
}

}  // namespace fbmcli
