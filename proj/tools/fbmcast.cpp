#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/csv_io.hpp"

using fbmcli::json;

namespace {

struct Flags {
    std::string input, output, report, mode = "values", selection = "nontrivial", running_sum = "exclusive";
    std::optional<double> hurst;
    double sigma = 1.0, grid_step = 0.01, alpha = 0.1, beta0 = 1.5;
    std::uint64_t seed = 0;
    std::uint64_t table_seed = 1;
    std::size_t table_n = 1000;
    std::size_t n = 0, learning_size = 0, horizon = 8, window_size = 100, seeds = 20;
    int table = 0;
    bool compat = false, exact_quantiles = false, increments = false, no_detrend = false;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--report", f.report, "Also write the JSON report to this path");
    cmd->add_flag("--compat-08", f.compat, "Use the literal 0.8 normalizing constant");
}

void add_input(CLI::App* cmd, Flags& f) {
    cmd->add_option("--input", f.input, "CSV series (header optional, value or index,value)")->required();
    cmd->add_flag("--increments", f.increments, "Input already holds increments");
    cmd->add_option("--grid-step", f.grid_step, "Hurst grid step");
    cmd->add_option("--selection", f.selection, "Root selection: nontrivial or argmin");
}

void add_adequacy(CLI::App* cmd, Flags& f) {
    cmd->add_option("--alpha", f.alpha, "Significance level");
    cmd->add_option("--beta0", f.beta0, "Tolerance for |A_n + 1.5|");
    cmd->add_flag("--exact-quantiles", f.exact_quantiles, "Use unrounded normal quantiles");
    cmd->add_option("--running-sum", f.running_sum, "exclusive or inclusive");
}

json adequacy_config(const Flags& f) {
    return {{"alpha", f.alpha}, {"beta0", f.beta0}, {"exact_quantiles", f.exact_quantiles},
            {"running_sum", f.running_sum}};
}

json input_config(const Flags& f) {
    return {{"input", f.input}, {"increments", f.increments}, {"grid_step", f.grid_step},
            {"selection", f.selection}};
}

json hurst_value(const Flags& f) { return f.hurst ? json(*f.hurst) : json(nullptr); }

int finish(const fbmcli::RunResult& r) {
    if (r.exit_code != fbmcli::kExitOk) {
        std::cerr << "error: " << r.error << "\n";
        return r.exit_code;
    }
    std::cout << r.report.dump(2) << "\n";
    return fbmcli::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fractional Brownian motion simulation, estimation, adequacy testing and forecasting"};
    app.require_subcommand(1);
    Flags f;

    auto* sim = app.add_subcommand("simulate", "Simulate an fBm path x_0..x_n on [0, 1]");
    sim->add_option("--n", f.n, "Number of steps")->required();
    sim->add_option("--hurst", f.hurst, "Hurst exponent");
    sim->add_option("--sigma", f.sigma, "Volatility");
    sim->add_option("--seed", f.seed, "RNG seed");
    sim->add_option("--output", f.output, "CSV path (default under $FBM_OUTPUT_DIR)");
    add_common(sim, f);

    auto* est = app.add_subcommand("estimate", "Estimate H and sigma by the Q(H) method");
    add_input(est, f);
    est->add_option("--output", f.output, "Write the Q profile CSV here");
    add_common(est, f);

    auto* chk = app.add_subcommand("check", "Test whether the increments look like fBm");
    add_input(chk, f);
    chk->add_option("--hurst", f.hurst, "Known Hurst exponent (estimated when omitted)");
    add_adequacy(chk, f);
    add_common(chk, f);

    auto* fc = app.add_subcommand("forecast", "Conditional-mean forecast");
    add_input(fc, f);
    fc->add_option("--hurst", f.hurst, "Known Hurst exponent (estimated when omitted)");
    fc->add_option("--learning-size", f.learning_size, "Learning sample size m")->required();
    fc->add_option("--horizon", f.horizon, "Forecast horizon r");
    fc->add_option("--mode", f.mode, "values, increments or pipeline")
        ->check(CLI::IsMember({"values", "increments", "pipeline"}));
    fc->add_option("--window-size", f.window_size, "Detrending window (pipeline mode)");
    fc->add_flag("--no-detrend", f.no_detrend, "Skip detrending (pipeline mode)");
    fc->add_option("--output", f.output, "Write step,prediction,actual,error CSV here");
    add_adequacy(fc, f);
    add_common(fc, f);

    auto* tab = app.add_subcommand("tables", "Monte Carlo summary tables: 1 estimator grid, 2 forecast errors, 3 adequacy statistics");
    tab->add_option("--table", f.table, "Table id: 1, 2 or 3")->required();
    tab->add_option("--seeds", f.seeds, "Number of seeds");
    tab->add_option("--seed", f.table_seed, "First seed");
    tab->add_option("--n", f.table_n, "Series length for table 1");
    tab->add_option("--output", f.output, "Output directory");
    add_adequacy(tab, f);
    add_common(tab, f);

    auto* rep = app.add_subcommand("replay", "Re-run a saved report and compare the results");
    rep->add_option("--input", f.input, "Report JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : fbmcli::kExitValidation;
    }

    if (*sim) {
        json cfg = {{"n", f.n}, {"hurst", f.hurst.value_or(0.5)}, {"sigma", f.sigma}, {"seed", f.seed},
                    {"output", f.output}, {"report", f.report}};
        return finish(fbmcli::run("simulate", cfg));
    }
    if (*est) {
        json cfg = input_config(f);
        cfg.update({{"output", f.output}, {"report", f.report}, {"compat_08", f.compat}});
        return finish(fbmcli::run("estimate", cfg));
    }
    if (*chk) {
        json cfg = input_config(f);
        cfg.update(adequacy_config(f));
        cfg.update({{"hurst", hurst_value(f)}, {"report", f.report}, {"compat_08", f.compat}});
        return finish(fbmcli::run("check", cfg));
    }
    if (*fc) {
        json cfg = input_config(f);
        cfg.update(adequacy_config(f));
        cfg.update({{"hurst", hurst_value(f)}, {"learning_size", f.learning_size}, {"horizon", f.horizon},
                    {"mode", f.mode}, {"window_size", f.window_size}, {"detrend", !f.no_detrend},
                    {"output", f.output}, {"report", f.report}, {"compat_08", f.compat}});
        return finish(fbmcli::run("forecast", cfg));
    }
    if (*tab) {
        json cfg = adequacy_config(f);
        cfg.update({{"table", f.table}, {"seeds", f.seeds}, {"seed", f.table_seed}, {"n", f.table_n},
                    {"output", f.output}, {"report", f.report}, {"compat_08", f.compat}});
        return finish(fbmcli::run("tables", cfg));
    }

    try {
        const auto report = json::parse(fbmcli::read_text(f.input));
        const auto result = fbmcli::replay(report);
        std::cout << json{{"identical", result.identical}, {"mismatches", result.mismatches}}.dump(2) << "\n";
        return result.identical ? fbmcli::kExitOk : fbmcli::kExitReplayMismatch;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return fbmcli::exit_code_for(e);
    }
}
