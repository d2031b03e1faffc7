#include "orbdet/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>

#include "orbdet/random.hpp"

namespace orbdet::harness {

namespace {

enum Stream : std::uint64_t { kJitter = 0, kMeasurements = 1, kInitialError = 2, kRanges = 3 };

struct RunInputs {
    std::vector<StateVector> truth;
    std::vector<std::optional<filters::Measurement>> measurements;
};

RunInputs make_inputs(const Scenario& sc, std::uint64_t seed) {
    StateVector start = sc.initial_state();
    if (sc.jitter_position > 0.0 || sc.jitter_velocity > 0.0) {
        GaussianRng rng(mix_seed(seed, kJitter));
        for (int i = 0; i < 3; ++i) start.position[i] += rng.normal(sc.jitter_position);
        for (int i = 0; i < 3; ++i) start.velocity[i] += rng.normal(sc.jitter_velocity);
    }
    RunInputs in;
    in.truth = measurements::simulate_truth(start, sc.force, sc.duration, sc.step, sc.integrator);
    measurements::MeasurementSchedule sched = sc.schedule;
    sched.seed = mix_seed(seed, kMeasurements);
    in.measurements = measurements::synthesize_measurements(in.truth, sched, sc.noise.measurement);
    return in;
}

filters::StepContext context(const Scenario& sc) {
    return filters::StepContext{sc.force, sc.integrator, sc.noise};
}

/// Filters from `start` (at truth[first]) through the end of the truth.
RunResult filter_run(const Scenario& sc, const RunInputs& in, std::size_t first,
                     const filters::FilterState& start, filters::Variant variant,
                     const std::string& name) {
    std::vector<filters::ScheduleEntry> schedule;
    for (std::size_t k = first + 1; k < in.truth.size(); ++k) {
        schedule.push_back({sc.step, in.measurements[k]});
    }
    const filters::FilterRun run = filters::run_filter(start, schedule, variant, context(sc));
    if (!run.ok()) return failed_run(name, *run.failure);

    std::vector<double> epochs;
    std::vector<double> errors;
    for (std::size_t k = 0; k < run.history.size(); ++k) {
        const StateVector& truth = in.truth[first + 1 + k];
        epochs.push_back(truth.epoch.t);
        errors.push_back((run.history[k].estimate.position - truth.position).norm());
    }
    RunResult result = finished_run(name, std::move(epochs), std::move(errors));
    result.initial_error = (start.estimate.position - in.truth[first].position).norm();
    return result;
}

using RunBody = std::function<std::vector<RunResult>(std::size_t k, const std::string& name)>;

RunReport collect(const Scenario& sc, std::size_t workers, std::string title, const RunBody& body) {
    sc.validate();
    const auto n = static_cast<std::size_t>(sc.n_runs);
    std::vector<std::vector<RunResult>> results(n);
    parallel_for(n, workers, [&](std::size_t k) {
        const std::string name = std::to_string(run_seed(sc, k));
        try {
            results[k] = body(k, name);
        } catch (const Error& e) {
            results[k].assign(sc.variants.size(), failed_run(name, e));
        }
    });

    RunReport report;
    report.title = std::move(title);
    for (std::size_t v = 0; v < sc.variants.size(); ++v) {
        std::vector<RunResult> runs;
        runs.reserve(n);
        for (auto& per_run : results) runs.push_back(std::move(per_run[v]));
        report.series.push_back(summarize(filters::to_string(sc.variants[v]), std::move(runs)));
    }
    return report;
}

std::string describe(const Scenario& sc) {
    std::string windows;
    for (const auto& w : sc.schedule.windows) {
        char buf[64];
        std::snprintf(buf, sizeof buf, " [%g, %g)", w.start.t, w.end.t);
        windows += buf;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d runs, seed %llu, %g s over %g s, dropout%s", sc.n_runs,
                  static_cast<unsigned long long>(sc.seed), sc.step, sc.duration,
                  windows.empty() ? " none" : "");
    return buf + windows;
}

}  // namespace

std::size_t worker_count() {
    if (const char* env = std::getenv("ORBDET_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn) {
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t k = next++; k < n; k = next++) {
            try {
                fn(k);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::uint64_t run_seed(const Scenario& sc, std::size_t k) { return sc.seed + k; }

std::vector<StateVector> truth_trajectory(const Scenario& sc, std::size_t k) {
    sc.validate();
    return make_inputs(sc, run_seed(sc, k)).truth;
}

RunReport run_scenario(const Scenario& sc, std::size_t workers) {
    return collect(sc, workers, "simulate: " + describe(sc), [&](std::size_t k, const std::string& name) {
        const std::uint64_t seed = run_seed(sc, k);
        const RunInputs in = make_inputs(sc, seed);

        GaussianRng rng(mix_seed(seed, kInitialError));
        StateVector estimate = in.truth.front();
        for (int i = 0; i < 3; ++i) estimate.position[i] += rng.normal(sc.initial_position_sigma);
        for (int i = 0; i < 3; ++i) estimate.velocity[i] += rng.normal(sc.initial_velocity_sigma);
        const filters::FilterState start{
            estimate,
            Covariance6::diagonal(sc.initial_position_sigma * sc.initial_position_sigma,
                                  sc.initial_velocity_sigma * sc.initial_velocity_sigma),
            std::nullopt};

        std::vector<RunResult> out;
        for (const auto variant : sc.variants) out.push_back(filter_run(sc, in, 0, start, variant, name));
        return out;
    });
}

RunReport iod_then_filter(const Scenario& sc, std::size_t workers) {
    sc.validate();
    if (sc.stations.size() != 3) {
        throw Error(ErrorCode::Scenario, "IOD needs exactly three iod.station entries, got " +
                                             std::to_string(sc.stations.size()));
    }
    const double ratio = sc.iod_spacing / sc.step;
    const auto spacing = static_cast<std::size_t>(std::llround(ratio));
    if (spacing < 1 || std::abs(ratio - static_cast<double>(spacing)) > 1e-9 * ratio) {
        throw Error(ErrorCode::Scenario, "iod.spacing_s must be a whole multiple of schedule.step_s");
    }
    if (2.0 * sc.iod_spacing >= sc.duration) {
        throw Error(ErrorCode::Scenario, "schedule.duration_s must extend past the IOD epochs");
    }
    const std::array<iod::GroundStation, 3> stations{sc.stations[0], sc.stations[1], sc.stations[2]};

    return collect(sc, workers, "iod: " + describe(sc), [&](std::size_t k, const std::string& name) {
        const std::uint64_t seed = run_seed(sc, k);
        const RunInputs in = make_inputs(sc, seed);

        std::optional<StateVector> fix;
        try {
            std::array<iod::RangeTriplet, 3> triplets;
            for (std::size_t j = 0; j < 3; ++j) {
                triplets[j] = measurements::range_observations(
                    in.truth[j * spacing], stations, sc.iod_range_sigma, mix_seed(seed, kRanges + j));
            }
            fix = iod::iod_pipeline(triplets);
        } catch (const Error& e) {
            throw Error(ErrorCode::InitializationFailure, std::string("IOD failed: ") + e.what(),
                        e.epoch());
        }
        const filters::FilterState start{
            *fix,
            Covariance6::diagonal(sc.iod_position_sigma * sc.iod_position_sigma,
                                  sc.iod_velocity_sigma * sc.iod_velocity_sigma),
            std::nullopt};

        std::vector<RunResult> out;
        for (const auto variant : sc.variants) {
            out.push_back(filter_run(sc, in, spacing, start, variant, name));
        }
        return out;
    });
}

std::vector<SweepPoint> dropout_sweep(const Scenario& sc, const std::vector<double>& minutes,
                                      std::size_t workers) {
    if (minutes.empty()) throw Error(ErrorCode::EmptyInput, "no dropout lengths to sweep");
    const double open = sc.schedule.windows.empty() ? 600.0 : sc.schedule.windows.front().start.t;
    std::vector<SweepPoint> out;
    for (const double m : minutes) {
        if (!(m > 0.0)) throw Error(ErrorCode::InvalidArgument, "dropout lengths must be positive");
        Scenario point = sc;
        point.schedule.windows = {{Epoch{open}, Epoch{open + 60.0 * m}}};
        point.duration = open + 60.0 * m;
        out.push_back({m, run_scenario(point, workers)});
    }
    return out;
}

}  // namespace orbdet::harness
