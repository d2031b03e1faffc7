#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "orbdet/experiment.hpp"
#include "orbdet/predictions.hpp"
#include "orbdet/scenario.hpp"

namespace {

using namespace orbdet;
using namespace orbdet::harness;

enum Exit { kOk = 0, kUsage = 1, kInput = 2, kNumerical = 3 };

struct Common {
    std::string scenario;
    std::string variant;
    std::optional<int> runs;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format = "table";
};

void add_format(CLI::App* cmd, Common& c) {
    cmd->add_option("--out", c.out, "Directory for CSV reports and per-step error series");
    cmd->add_option("--format", c.format, "Report printed on stdout")
        ->check(CLI::IsMember({"table", "csv"}));
}

void add_scenario(CLI::App* cmd, Common& c) {
    cmd->add_option("--scenario", c.scenario, "Scenario file (built-in default when omitted)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--variant", c.variant, "Run a single filter variant")
        ->check(CLI::IsMember({"ekf", "ekffg", "cowell"}));
    cmd->add_option("--runs", c.runs, "Monte-Carlo run count")->check(CLI::Range(1, 1000000));
    cmd->add_option("--seed", c.seed, "Base seed; run k uses seed + k");
    add_format(cmd, c);
}

Scenario load(const Common& c) {
    Scenario sc = c.scenario.empty() ? default_scenario() : load_scenario(c.scenario);
    if (!c.variant.empty()) sc.variants = {*filters::parse_variant(c.variant)};
    if (c.runs) sc.n_runs = *c.runs;
    if (c.seed) sc.seed = *c.seed;
    sc.validate();
    return sc;
}

void emit(const Common& c, const RunReport& report, bool per_run = false) {
    if (c.format == "csv") {
        write_summary_csv(std::cout, report);
    } else {
        write_table(std::cout, report, per_run);
    }
    if (!c.out.empty()) write_report_dir(c.out, report);
}

void write_truth(const Common& c, const Scenario& sc) {
    if (c.out.empty()) return;
    std::ofstream out(std::filesystem::path(c.out) / "truth.txt", std::ios::binary);
    write_ephemeris(out, ecef_ephemeris(truth_trajectory(sc, 0)));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Orbit determination experiments: Cowell propagation, EKF variants, IOD"};
    app.require_subcommand(1);

    Common sim;
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo filter runs on a scenario");
    add_scenario(simulate, sim);

    Common iod_opts;
    auto* iod = app.add_subcommand("iod", "Trilateration + Gibbs initialization, then filtering");
    add_scenario(iod, iod_opts);

    Common sweep_opts;
    std::vector<double> minutes{10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 110, 120};
    auto* sweep = app.add_subcommand("sweep", "Dropout-length sweep");
    add_scenario(sweep, sweep_opts);
    sweep->add_option("--minutes", minutes, "Dropout lengths in minutes")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);

    Common score_opts;
    std::string truth;
    std::vector<std::string> predictions;
    auto* score = app.add_subcommand("score", "RMSE of prediction files against a truth file");
    score->add_option("--truth", truth, "Truth ephemeris")->required()->check(CLI::ExistingFile);
    score->add_option("predictions", predictions, "Prediction ephemerides")
        ->required()
        ->check(CLI::ExistingFile);
    add_format(score, score_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    // Input problems surface while loading; everything after is a run.
    std::optional<Scenario> sc;
    try {
        if (*simulate) sc = load(sim);
        if (*iod) sc = load(iod_opts);
        if (*sweep) sc = load(sweep_opts);
    } catch (const Error& e) {
        std::cerr << "orbdet: " << e.what() << '\n';
        return kInput;
    }

    try {
        if (*simulate) {
            emit(sim, run_scenario(*sc));
            write_truth(sim, *sc);
        } else if (*iod) {
            emit(iod_opts, iod_then_filter(*sc));
        } else if (*sweep) {
            const auto points = dropout_sweep(*sc, minutes);
            if (sweep_opts.format == "csv") {
                write_sweep_csv(std::cout, points);
            } else {
                write_sweep_table(std::cout, points);
            }
            if (!sweep_opts.out.empty()) write_sweep_dir(sweep_opts.out, points);
        } else {
            std::vector<std::filesystem::path> files(predictions.begin(), predictions.end());
            emit(score_opts, score_predictions(files, truth), true);
        }
    } catch (const Error& e) {
        std::cerr << "orbdet: " << to_string(e.code()) << ": " << e.what() << '\n';
        return is_input_error(e.code()) ? kInput : kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "orbdet: " << e.what() << '\n';
        return kNumerical;
    }
    return kOk;
}
