#include "orbdet/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace orbdet::harness {

namespace {

constexpr const char* kTop25Note = "top25 = mean RMSE of the best ceil(n/4) successful runs";

std::string num(double v, const char* fmt) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

std::string csv_num(double v) { return num(v, "%.12g"); }
std::string csv_num(const std::optional<double>& v) { return v ? csv_num(*v) : std::string(); }

std::string table_num(const std::optional<double>& v) { return v ? num(*v, "%.6f") : "-"; }

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

std::string pad_left(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string file_stem(const std::string& label) {
    std::string out;
    for (char c : label) {
        const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
        out += keep ? c : '_';
    }
    return out;
}

std::string run_tag(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "run%03zu", index);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
    return out;
}

std::optional<double> ratio(const RunReport& report, const char* num_label, const char* den_label) {
    const auto* a = report.find(num_label);
    const auto* b = report.find(den_label);
    if (!a || !b || !a->aggregates || !b->aggregates || b->aggregates->average <= 0.0) {
        return std::nullopt;
    }
    return a->aggregates->average / b->aggregates->average;
}

void summary_header(std::ostream& out) {
    out << "# " << kTop25Note << "\n";
}

void summary_row(std::ostream& out, const SeriesReport& s) {
    const auto& agg = s.aggregates;
    out << csv_quote(s.label) << ',' << s.runs.size() << ',' << s.failures() << ','
        << (agg ? csv_num(agg->average) : "") << ',' << (agg ? csv_num(agg->best) : "") << ','
        << (agg ? csv_num(agg->top25) : "") << ',' << csv_num(s.terminal_rmse) << '\n';
}

}  // namespace

std::size_t SeriesReport::failures() const {
    return static_cast<std::size_t>(
        std::count_if(runs.begin(), runs.end(), [](const RunResult& r) { return !r.ok(); }));
}

RunResult finished_run(std::string name, std::vector<double> epochs, std::vector<double> errors) {
    if (errors.empty() || errors.size() != epochs.size()) {
        throw Error(ErrorCode::EmptyInput, "run '" + name + "' produced no aligned error samples");
    }
    RunResult r;
    r.name = std::move(name);
    double sum = 0.0;
    for (double e : errors) sum += e * e;
    r.rmse = std::sqrt(sum / static_cast<double>(errors.size()));
    r.terminal_error = errors.back();
    r.epochs = std::move(epochs);
    r.errors = std::move(errors);
    return r;
}

RunResult failed_run(std::string name, Error failure) {
    RunResult r;
    r.name = std::move(name);
    r.failure = std::move(failure);
    return r;
}

SeriesReport summarize(std::string label, std::vector<RunResult> runs) {
    SeriesReport s;
    s.label = std::move(label);
    s.runs = std::move(runs);
    std::vector<double> values;
    double terminal_sq = 0.0;
    for (const auto& r : s.runs) {
        if (!r.ok()) continue;
        values.push_back(*r.rmse);
        terminal_sq += *r.terminal_error * *r.terminal_error;
    }
    if (values.empty()) {
        if (s.runs.empty()) throw Error(ErrorCode::EmptyInput, "series '" + s.label + "' has no runs");
        const Error& first = *s.runs.front().failure;
        throw Error(first.code(),
                    "all " + std::to_string(s.runs.size()) + " runs failed for '" + s.label +
                        "'; first failure: " + first.what(),
                    first.epoch());
    }
    s.aggregates = aggregate(values);
    s.terminal_rmse = std::sqrt(terminal_sq / static_cast<double>(values.size()));
    return s;
}

const SeriesReport* RunReport::find(const std::string& label) const {
    for (const auto& s : series) {
        if (s.label == label) return &s;
    }
    return nullptr;
}

void write_table(std::ostream& out, const RunReport& report, bool per_run) {
    std::size_t label_width = 6;
    for (const auto& s : report.series) label_width = std::max(label_width, s.label.size());
    std::size_t name_width = 4;
    for (const auto& s : report.series) {
        for (const auto& r : s.runs) name_width = std::max(name_width, r.name.size());
    }

    out << report.title << '\n';
    out << pad_right("series", label_width) << pad_left("runs", 7) << pad_left("failed", 8)
        << pad_left("average_km", 16) << pad_left("best_km", 16) << pad_left("top25_km", 16)
        << pad_left("terminal_rmse_km", 18) << '\n';
    for (const auto& s : report.series) {
        const auto& agg = s.aggregates;
        out << pad_right(s.label, label_width) << pad_left(std::to_string(s.runs.size()), 7)
            << pad_left(std::to_string(s.failures()), 8)
            << pad_left(table_num(agg ? std::optional(agg->average) : std::nullopt), 16)
            << pad_left(table_num(agg ? std::optional(agg->best) : std::nullopt), 16)
            << pad_left(table_num(agg ? std::optional(agg->top25) : std::nullopt), 16)
            << pad_left(table_num(s.terminal_rmse), 18) << '\n';
    }
    if (per_run) {
        out << '\n'
            << pad_right("series", label_width) << "  " << pad_right("run", name_width)
            << pad_left("rmse_km", 16) << pad_left("terminal_km", 16) << "  status\n";
        for (const auto& s : report.series) {
            for (const auto& r : s.runs) {
                out << pad_right(s.label, label_width) << "  " << pad_right(r.name, name_width)
                    << pad_left(table_num(r.rmse), 16) << pad_left(table_num(r.terminal_error), 16)
                    << "  " << (r.ok() ? "ok" : to_string(r.failure->code())) << '\n';
            }
        }
    }
    if (const auto r = ratio(report, "ekffg", "cowell")) {
        out << "ekffg/cowell average ratio: " << num(*r, "%.3f") << '\n';
    }
    out << kTop25Note << '\n';
}

void write_summary_csv(std::ostream& out, const RunReport& report) {
    summary_header(out);
    out << "series,runs,failures,average_rmse_km,best_rmse_km,top25_rmse_km,terminal_rmse_km\n";
    for (const auto& s : report.series) summary_row(out, s);
}

void write_runs_csv(std::ostream& out, const RunReport& report) {
    out << "series,run,name,status,rmse_km,terminal_error_km,initial_error_km,failure\n";
    for (const auto& s : report.series) {
        for (std::size_t k = 0; k < s.runs.size(); ++k) {
            const auto& r = s.runs[k];
            out << csv_quote(s.label) << ',' << k << ',' << csv_quote(r.name) << ','
                << (r.ok() ? "ok" : to_string(r.failure->code())) << ',' << csv_num(r.rmse) << ','
                << csv_num(r.terminal_error) << ',' << csv_num(r.initial_error) << ','
                << (r.ok() ? "" : csv_quote(r.failure->what()))
                << '\n';
        }
    }
}

void write_series(std::ostream& out, const RunResult& run) {
    out << "# epoch_s error_km\n";
    for (std::size_t k = 0; k < run.errors.size(); ++k) {
        out << num(run.epochs[k], "%.6f") << ' ' << num(run.errors[k], "%.12g") << '\n';
    }
}

bool write_mean_series(std::ostream& out, const SeriesReport& series) {
    const RunResult* ref = nullptr;
    std::size_t count = 0;
    for (const auto& r : series.runs) {
        if (!r.ok()) continue;
        if (!ref) ref = &r;
        if (r.epochs != ref->epochs) return false;
        ++count;
    }
    if (!ref) return false;
    out << "# epoch_s rms_error_km over " << count << " runs\n";
    for (std::size_t k = 0; k < ref->epochs.size(); ++k) {
        double sum = 0.0;
        for (const auto& r : series.runs) {
            if (r.ok()) sum += r.errors[k] * r.errors[k];
        }
        out << num(ref->epochs[k], "%.6f") << ' '
            << num(std::sqrt(sum / static_cast<double>(count)), "%.12g") << '\n';
    }
    return true;
}

void write_report_dir(const std::filesystem::path& dir, const RunReport& report) {
    std::filesystem::create_directories(dir / "series");
    {
        auto out = open_out(dir / "summary.csv");
        write_summary_csv(out, report);
    }
    {
        auto out = open_out(dir / "runs.csv");
        write_runs_csv(out, report);
    }
    for (const auto& s : report.series) {
        const std::string stem = file_stem(s.label);
        {
            auto out = open_out(dir / "series" / (stem + "_mean.dat"));
            if (!write_mean_series(out, s)) {
                out.close();
                std::filesystem::remove(dir / "series" / (stem + "_mean.dat"));
            }
        }
        for (std::size_t k = 0; k < s.runs.size(); ++k) {
            if (!s.runs[k].ok()) continue;
            auto out = open_out(dir / "series" / (stem + "_" + run_tag(k) + ".dat"));
            write_series(out, s.runs[k]);
        }
    }
}

void write_sweep_table(std::ostream& out, const std::vector<SweepPoint>& sweep) {
    out << pad_left("dropout_min", 12) << pad_left("series", 8) << pad_left("failed", 8)
        << pad_left("average_km", 16) << pad_left("best_km", 16) << pad_left("top25_km", 16)
        << pad_left("ekffg/cowell", 14) << '\n';
    for (const auto& p : sweep) {
        const auto r = ratio(p.report, "ekffg", "cowell");
        for (const auto& s : p.report.series) {
            const auto& agg = s.aggregates;
            out << pad_left(num(p.dropout_minutes, "%g"), 12) << pad_left(s.label, 8)
                << pad_left(std::to_string(s.failures()), 8)
                << pad_left(table_num(agg ? std::optional(agg->average) : std::nullopt), 16)
                << pad_left(table_num(agg ? std::optional(agg->best) : std::nullopt), 16)
                << pad_left(table_num(agg ? std::optional(agg->top25) : std::nullopt), 16)
                << pad_left(r ? num(*r, "%.3f") : "-", 14) << '\n';
        }
    }
    out << kTop25Note << '\n';
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& sweep) {
    summary_header(out);
    out << "dropout_min,series,runs,failures,average_rmse_km,best_rmse_km,top25_rmse_km,"
           "terminal_rmse_km\n";
    for (const auto& p : sweep) {
        for (const auto& s : p.report.series) {
            out << num(p.dropout_minutes, "%g") << ',';
            summary_row(out, s);
        }
    }
}

void write_sweep_dir(const std::filesystem::path& dir, const std::vector<SweepPoint>& sweep) {
    std::filesystem::create_directories(dir);
    {
        auto out = open_out(dir / "sweep.csv");
        write_sweep_csv(out, sweep);
    }
    for (const auto& p : sweep) {
        write_report_dir(dir / ("dropout_" + num(p.dropout_minutes, "%g") + "min"), p.report);
    }
}

}  // namespace orbdet::harness
