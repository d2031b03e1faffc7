#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "orbdet/errors.hpp"
#include "orbdet/metrics.hpp"

namespace orbdet::harness {

struct RunResult {
    std::string name;  // seed for simulated runs, file name for scored predictions
    std::vector<double> epochs;
    std::vector<double> errors;  // position error per step, km
    std::optional<double> rmse;
    std::optional<double> terminal_error;
    std::optional<double> initial_error;  // position error of the starting estimate, km
    std::optional<Error> failure;

    bool ok() const { return !failure.has_value(); }
};

/// Runs of one filter variant or one prediction set, plus aggregates over the
/// runs that succeeded.
struct SeriesReport {
    std::string label;
    std::vector<RunResult> runs;
    std::optional<Aggregates> aggregates;
    std::optional<double> terminal_rmse;  // RMS of the terminal errors

    std::size_t failures() const;
};

/// Builds a series from finished runs. Throws the first failure's code when
/// every run failed.
SeriesReport summarize(std::string label, std::vector<RunResult> runs);

/// Fills rmse and terminal_error from the error series.
RunResult finished_run(std::string name, std::vector<double> epochs, std::vector<double> errors);
RunResult failed_run(std::string name, Error failure);

struct RunReport {
    std::string title;
    std::vector<SeriesReport> series;

    const SeriesReport* find(const std::string& label) const;
};

struct SweepPoint {
    double dropout_minutes = 0.0;
    RunReport report;
};

enum class OutputFormat { Table, Csv };

/// Aggregate row per series; with `per_run`, one row per run underneath.
void write_table(std::ostream& out, const RunReport& report, bool per_run = false);
void write_summary_csv(std::ostream& out, const RunReport& report);
void write_runs_csv(std::ostream& out, const RunReport& report);

/// Two columns, `epoch_s error_km`, one row per step.
void write_series(std::ostream& out, const RunResult& run);

/// RMS error across the successful runs at each step. Skipped (returns false)
/// when the runs do not share epochs.
bool write_mean_series(std::ostream& out, const SeriesReport& series);

/// summary.csv, runs.csv, and series/<label>_mean.dat plus
/// series/<label>_run<k>.dat for every successful run.
void write_report_dir(const std::filesystem::path& dir, const RunReport& report);

void write_sweep_table(std::ostream& out, const std::vector<SweepPoint>& sweep);
void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& sweep);
void write_sweep_dir(const std::filesystem::path& dir, const std::vector<SweepPoint>& sweep);

}  // namespace orbdet::harness
