#include "doctest.h"

#include <algorithm>
#include <numbers>
#include <sstream>

#include "orbdet/elements.hpp"
#include "orbdet/experiment.hpp"
#include "orbdet/metrics.hpp"
#include "orbdet/predictions.hpp"
#include "orbdet/scenario.hpp"
#include "test_support.hpp"

using namespace orbdet;
using namespace orbdet::harness;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an orbdet::Error");
    return ErrorCode::InvalidArgument;
}

template <typename Fn>
std::string message_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    FAIL("expected an orbdet::Error");
    return {};
}

Scenario parse(const std::string& text) {
    std::istringstream in(text);
    return parse_scenario(in, "test");
}

std::string fixture(const char* name) { return std::string(ORBDET_FIXTURES) + "/" + name; }

/// Short dense-measurement scenario for filter checks.
Scenario short_scenario() {
    Scenario sc = default_scenario();
    sc.duration = 600.0;
    sc.schedule.windows.clear();
    sc.n_runs = 5;
    return sc;
}

std::string report_bytes(const RunReport& report) {
    std::ostringstream out;
    write_summary_csv(out, report);
    write_runs_csv(out, report);
    for (const auto& s : report.series) {
        for (const auto& r : s.runs) write_series(out, r);
    }
    return out.str();
}

}  // namespace

TEST_CASE("elements_to_state examples") {
    const double r = 7000.0;
    const StateVector circ = elements_to_state({r, 0.0, 0.0, 0.0, 0.0, 0.0});
    CHECK((circ.position - Vec3{r, 0.0, 0.0}).norm() < 1e-9);
    CHECK((circ.velocity - Vec3{0.0, std::sqrt(constants::mu / r), 0.0}).norm() < 1e-12);
    CHECK(circ.frame == Frame::ECI);

    const StateVector perigee = elements_to_state({r, 0.1, 0.3, 0.2, 1.0, 0.0});
    CHECK(perigee.position.norm() == doctest::Approx(6300.0).epsilon(1e-12));
    CHECK(std::abs(perigee.position.dot(perigee.velocity)) < 1e-9);

    const StateVector polar = elements_to_state({r, 0.0, std::numbers::pi / 2.0, 0.0, 0.0, 0.0});
    CHECK(std::abs(polar.position.y()) < 1e-9);
    CHECK(std::abs(polar.velocity.y()) < 1e-12);
    CHECK(std::abs(polar.velocity.x()) < 1e-12);
}

TEST_CASE("orbital element validation") {
    CHECK(code_of([] { (void)elements_to_state({7000.0, 1.0, 0, 0, 0, 0}); }) ==
          ErrorCode::UnsupportedOrbit);
    CHECK(code_of([] { (void)elements_to_state({7000.0, 1.5, 0, 0, 0, 0}); }) ==
          ErrorCode::UnsupportedOrbit);
    CHECK(code_of([] { (void)elements_to_state({7000.0, -0.1, 0, 0, 0, 0}); }) ==
          ErrorCode::InvalidArgument);
    CHECK(code_of([] { (void)elements_to_state({6000.0, 0.0, 0, 0, 0, 0}); }) ==
          ErrorCode::InvalidArgument);

    StateVector escape = testing::circular_equatorial(7000.0);
    escape.velocity *= 1.5;
    CHECK(code_of([&] { (void)state_to_elements(escape); }) == ErrorCode::UnsupportedOrbit);
    CHECK(code_of([] { (void)state_to_elements(eci_to_ecef(testing::circular_equatorial(7000.0))); }) ==
          ErrorCode::FrameMismatch);
}

TEST_CASE("state_to_elements on degenerate orbits") {
    const OrbitalElements circ = state_to_elements(testing::circular_equatorial(7000.0));
    CHECK(circ.a == doctest::Approx(7000.0));
    CHECK(circ.e < 1e-12);
    CHECK(circ.i == 0.0);
    CHECK(circ.raan == 0.0);

    // Circular inclined orbit a quarter turn past the node.
    const StateVector s = elements_to_state({7000.0, 0.0, 0.5, 1.0, 0.0, std::numbers::pi / 2.0});
    const OrbitalElements el = state_to_elements(s);
    CHECK(el.raan == doctest::Approx(1.0));
    CHECK(el.i == doctest::Approx(0.5));
    CHECK(el.argp + el.nu == doctest::Approx(std::numbers::pi / 2.0));
}

TEST_CASE("property: elements round-trip through Cartesian state") {
    testing::LeoGenerator gen(51);
    for (int k = 0; k < 500; ++k) {
        OrbitalElements el;
        el.a = gen.uniform(constants::earth_radius + 200.0, 45000.0);
        el.e = gen.uniform(0.001, 0.9);
        el.i = gen.uniform(0.01, std::numbers::pi - 0.01);
        el.raan = gen.uniform(0.0, 2.0 * std::numbers::pi);
        el.argp = gen.uniform(0.0, 2.0 * std::numbers::pi);
        el.nu = gen.uniform(0.0, 2.0 * std::numbers::pi);

        const StateVector s = elements_to_state(el);
        const OrbitalElements back = state_to_elements(s);
        CHECK(std::abs(back.a - el.a) <= 1e-9 * el.a);
        CHECK(std::abs(back.e - el.e) <= 1e-9);
        CHECK(std::abs(back.i - el.i) <= 1e-9);
        const auto angle_close = [](double a, double b) {
            return std::abs(std::remainder(a - b, 2.0 * std::numbers::pi)) <= 1e-8;
        };
        CHECK(angle_close(back.raan, el.raan));
        CHECK(angle_close(back.argp, el.argp));
        CHECK(angle_close(back.nu, el.nu));

        const StateVector again = elements_to_state(back);
        CHECK((again.position - s.position).norm() <= 1e-9 * s.position.norm());
        CHECK((again.velocity - s.velocity).norm() <= 1e-9 * s.velocity.norm());
    }
}

TEST_CASE("rmse examples") {
    CHECK(rmse(std::vector<Vec3>{Vec3::Zero(), Vec3::Zero()}) == 0.0);
    CHECK(rmse(std::vector<Vec3>{{3.0, 4.0, 0.0}}) == 5.0);
    CHECK(rmse(std::vector<Vec3>{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}}) == doctest::Approx(1.0));
    CHECK(rmse(std::vector<Vec3>{{4.0, 4.0, 0.0}}, std::vector<Vec3>{{1.0, 0.0, 0.0}}) == 5.0);
    CHECK(code_of([] { (void)rmse(std::vector<Vec3>{}); }) == ErrorCode::EmptyInput);
    CHECK(code_of([] { (void)rmse(std::vector<Vec3>{Vec3::Zero()}, std::vector<Vec3>{}); }) ==
          ErrorCode::Alignment);
}

TEST_CASE("property: rmse is permutation invariant and scales linearly") {
    testing::LeoGenerator gen(52);
    for (int k = 0; k < 200; ++k) {
        std::vector<Vec3> errors(1 + static_cast<std::size_t>(gen.uniform(0.0, 50.0)));
        for (auto& e : errors) e = gen.uniform(0.0, 10.0) * gen.unit();
        const double base = rmse(errors);

        auto shuffled = errors;
        std::shuffle(shuffled.begin(), shuffled.end(), gen.engine());
        CHECK(rmse(shuffled) == doctest::Approx(base).epsilon(1e-14));

        const double c = gen.uniform(0.0, 100.0);
        for (auto& e : shuffled) e *= c;
        CHECK(rmse(shuffled) == doctest::Approx(c * base).epsilon(1e-12));
    }
}

TEST_CASE("aggregate") {
    const Aggregates a = aggregate({5.0, 1.0, 4.0, 2.0, 3.0});
    CHECK(a.best == 1.0);
    CHECK(a.top25 == 1.5);
    CHECK(a.average == 3.0);
    CHECK(top_quartile_count(25) == 7);
    CHECK(top_quartile_count(4) == 1);
    CHECK(top_quartile_count(1) == 1);
    CHECK(code_of([] { (void)aggregate({}); }) == ErrorCode::EmptyInput);

    testing::LeoGenerator gen(53);
    for (int k = 0; k < 1000; ++k) {
        std::vector<double> values(1 + static_cast<std::size_t>(gen.uniform(0.0, 40.0)));
        const double scale = std::pow(10.0, gen.uniform(-6.0, 6.0));
        for (auto& v : values) v = scale * gen.uniform(0.0, 1.0);
        if (gen.uniform(0.0, 1.0) < 0.2) std::fill(values.begin(), values.end(), scale);
        const Aggregates g = aggregate(values);
        CHECK(g.best <= g.top25);
        CHECK(g.top25 <= g.average);
    }
}

TEST_CASE("summarize excludes failed runs") {
    std::vector<RunResult> runs;
    runs.push_back(finished_run("a", {1.0, 2.0}, {3.0, 4.0}));
    runs.push_back(failed_run("b", Error(ErrorCode::Reentry, "down", 12.0)));
    runs.push_back(finished_run("c", {1.0, 2.0}, {0.0, 0.0}));
    const SeriesReport s = summarize("ekf", runs);
    CHECK(s.failures() == 1);
    REQUIRE(s.aggregates);
    CHECK(s.aggregates->best == 0.0);
    CHECK(s.aggregates->average == doctest::Approx(std::sqrt(12.5) / 2.0));
    CHECK(*s.terminal_rmse == doctest::Approx(std::sqrt(8.0)));

    std::vector<RunResult> failed{failed_run("x", Error(ErrorCode::Reentry, "down")),
                                  failed_run("y", Error(ErrorCode::NoFix, "none"))};
    CHECK(code_of([&] { (void)summarize("ekffg", failed); }) == ErrorCode::Reentry);
}

TEST_CASE("scenario parsing") {
    SUBCASE("header only gives the default") {
        const Scenario sc = parse("# comment\norbdet-scenario 1\n");
        CHECK(sc.n_runs == 25);
        CHECK(sc.variants.size() == 3);
        CHECK(sc.schedule.windows.size() == 1);
        CHECK(sc.schedule.windows[0].end.t == 6000.0);
        CHECK(sc.stations.size() == 3);
    }

    SUBCASE("keys") {
        const Scenario sc = parse(
            "orbdet-scenario 1\n"
            "orbit.a_km = 7000   # trailing comment\n"
            "orbit.e = 0.01\n"
            "orbit.i_deg = 98\n"
            "force.drag = false\n"
            "integrator.method = rk4\n"
            "integrator.step_s = 5\n"
            "noise.r_km2 = 4e-4\n"
            "noise.q_velocity_km2_s2 = 1e-12\n"
            "schedule.step_s = 5\n"
            "schedule.cadence_s = 20\n"
            "schedule.dropout = 100 200\n"
            "schedule.dropout = 300 400\n"
            "run.variants = cowell, ekf\n"
            "run.n_runs = 3\n"
            "run.seed = 99\n"
            "iod.station = 10 20 0.5\n");
        const auto& el = std::get<OrbitalElements>(sc.orbit);
        CHECK(el.a == 7000.0);
        CHECK(el.e == 0.01);
        CHECK(el.i == doctest::Approx(98.0 * kDeg));
        CHECK_FALSE(sc.force.drag);
        CHECK(sc.integrator.method == dynamics::IntegratorMethod::RK4);
        CHECK(sc.integrator.fixed_step == 5.0);
        CHECK(sc.noise.measurement(1, 1) == 4e-4);
        CHECK(sc.noise.process.matrix()(4, 4) == 1e-12);
        CHECK(sc.noise.process.matrix()(0, 0) == 1e-8);
        CHECK(sc.schedule.cadence == 20.0);
        REQUIRE(sc.schedule.windows.size() == 2);
        CHECK(sc.schedule.windows[1].start.t == 300.0);
        CHECK(sc.variants == std::vector{filters::Variant::COWELL, filters::Variant::EKF});
        CHECK(sc.n_runs == 3);
        CHECK(sc.seed == 99);
        REQUIRE(sc.stations.size() == 1);
        CHECK(sc.stations[0].latitude == doctest::Approx(10.0 * kDeg));
    }

    SUBCASE("state orbit and no dropout") {
        const Scenario sc = parse(
            "orbdet-scenario 1\n"
            "orbit.position_km = 7000 0 0\n"
            "orbit.velocity_kms = 0 7.5 0\n"
            "schedule.dropout = none\n");
        const StateVector s = sc.initial_state();
        CHECK(s.position == Vec3{7000.0, 0.0, 0.0});
        CHECK(s.velocity == Vec3{0.0, 7.5, 0.0});
        CHECK(sc.schedule.windows.empty());
    }

    SUBCASE("errors carry source and line") {
        CHECK(message_of([] { (void)parse("orbdet-scenario 1\n\nbogus.key = 1\n"); }) ==
              "test:3: unknown key 'bogus.key'");
        CHECK(message_of([] { (void)parse("orbdet-scenario 2\n"); }) ==
              "test:1: expected header 'orbdet-scenario 1'");
        CHECK(message_of([] { (void)parse("orbdet-scenario 1\nrun.seed = 1\nrun.seed = 2\n"); }) ==
              "test:3: duplicate key 'run.seed'");
        CHECK(message_of([] { (void)parse("orbdet-scenario 1\norbit.e = abc\n"); }) ==
              "test:2: orbit.e: expected a number, got 'abc'");
        CHECK(code_of([] { (void)parse(""); }) == ErrorCode::Scenario);
        CHECK(code_of([] { (void)parse("orbdet-scenario 1\nrun.n_runs = 0\n"); }) == ErrorCode::Scenario);
        CHECK(code_of([] { (void)parse("orbdet-scenario 1\nrun.n_runs = -3\n"); }) == ErrorCode::Scenario);
        CHECK(code_of([] { (void)parse("orbdet-scenario 1\nrun.variants = ukf\n"); }) == ErrorCode::Scenario);
        CHECK(code_of([] { (void)parse("orbdet-scenario 1\nrun.seed\n"); }) == ErrorCode::Scenario);
        CHECK(code_of([] { (void)parse("orbdet-scenario 1\norbit.e = 1.2\n"); }) == ErrorCode::Scenario);
        CHECK(code_of([] { (void)parse("orbdet-scenario 1\nschedule.cadence_s = 15\n"); }) ==
              ErrorCode::Scenario);
        CHECK(code_of([] { (void)parse("orbdet-scenario 1\nschedule.dropout = 200 100\n"); }) ==
              ErrorCode::Scenario);
        CHECK(code_of([] {
                  (void)parse("orbdet-scenario 1\nschedule.dropout = 1 2\nschedule.dropout = none\n");
              }) == ErrorCode::Scenario);
        CHECK(code_of([] {
                  (void)parse("orbdet-scenario 1\norbit.a_km = 7000\norbit.position_km = 7000 0 0\n"
                              "orbit.velocity_kms = 0 7.5 0\n");
              }) == ErrorCode::Scenario);
        CHECK(code_of([] {
                  (void)parse("orbdet-scenario 1\norbit.position_km = 7000 0 0\norbit.a_km = 7000\n");
              }) == ErrorCode::Scenario);
        CHECK(code_of([] { (void)parse("orbdet-scenario 1\norbit.position_km = 7000 0 0\n"); }) ==
              ErrorCode::Scenario);
        CHECK(code_of([] { (void)load_scenario("/nonexistent/file.scenario"); }) == ErrorCode::Scenario);
    }
}

TEST_CASE("the shipped default scenario file matches the built-in default") {
    Scenario file = load_scenario(std::string(ORBDET_SCENARIOS) + "/default.scenario");
    Scenario sc = default_scenario();
    sc.n_runs = file.n_runs = 3;
    CHECK(report_bytes(run_scenario(file, 1)) == report_bytes(run_scenario(sc, 1)));
}

TEST_CASE("parallel_for") {
    std::vector<int> hits(100, 0);
    parallel_for(hits.size(), 4, [&](std::size_t k) { hits[k] += static_cast<int>(k); });
    for (std::size_t k = 0; k < hits.size(); ++k) CHECK(hits[k] == static_cast<int>(k));

    try {
        parallel_for(10, 3, [](std::size_t k) {
            if (k == 7 || k == 3) throw Error(ErrorCode::NumericalFailure, std::to_string(k));
        });
        FAIL("expected a rethrow");
    } catch (const Error& e) {
        CHECK(std::string(e.what()) == "3");
    }
    parallel_for(0, 4, [](std::size_t) { FAIL("no work expected"); });
}

TEST_CASE("run_scenario with exact dynamics and no noise") {
    Scenario sc = short_scenario();
    sc.variants = {filters::Variant::COWELL};
    sc.schedule.sigma = 0.0;
    sc.noise.process = Covariance6{};
    sc.initial_position_sigma = 0.0;
    sc.initial_velocity_sigma = 0.0;
    sc.n_runs = 2;
    const RunReport report = run_scenario(sc, 1);
    REQUIRE(report.series.size() == 1);
    const SeriesReport& s = report.series[0];
    CHECK(s.label == "cowell");
    CHECK(s.aggregates->average <= 1e-5);
    CHECK(s.runs[0].errors.size() == 60);
    CHECK(s.runs[0].epochs.front() == 10.0);
    CHECK(s.runs[0].epochs.back() == 600.0);
    CHECK(*s.runs[0].initial_error == 0.0);
}

TEST_CASE("run_scenario is deterministic across repeats and worker counts") {
    Scenario sc = short_scenario();
    sc.schedule.windows = {{Epoch{300.0}, Epoch{600.0}}};
    const std::string a = report_bytes(run_scenario(sc, 1));
    CHECK(a == report_bytes(run_scenario(sc, 1)));
    CHECK(a == report_bytes(run_scenario(sc, 3)));

    Scenario other = sc;
    other.seed = sc.seed + 100;
    CHECK(a != report_bytes(run_scenario(other, 1)));
}

TEST_CASE("run_scenario report structure") {
    Scenario sc = short_scenario();
    sc.jitter_position = 1.0;
    sc.jitter_velocity = 1e-3;
    const RunReport report = run_scenario(sc, 2);
    REQUIRE(report.series.size() == 3);
    CHECK(report.find("ekf"));
    CHECK(report.find("ekffg"));
    CHECK(report.find("cowell"));
    CHECK_FALSE(report.find("ukf"));
    for (const auto& s : report.series) {
        CHECK(s.runs.size() == 5);
        CHECK(s.failures() == 0);
        CHECK(s.runs[2].name == std::to_string(sc.seed + 2));
        CHECK(s.aggregates->best <= s.aggregates->top25);
        CHECK(s.aggregates->top25 <= s.aggregates->average);
    }
    // Runs of one seed share their truth and initial estimate.
    CHECK(*report.series[0].runs[3].initial_error == *report.series[2].runs[3].initial_error);
    CHECK(truth_trajectory(sc, 0).front().position != sc.initial_state().position);
}

TEST_CASE("run_scenario reports when every run fails") {
    Scenario sc = short_scenario();
    sc.variants = {filters::Variant::EKFFG};
    sc.schedule.windows = {{Epoch{0.0}, Epoch{1e6}}};
    CHECK(code_of([&] { (void)run_scenario(sc, 1); }) == ErrorCode::NoFix);
}

TEST_CASE("iod_then_filter") {
    Scenario sc = default_scenario();
    sc.duration = 1200.0;
    sc.schedule.windows.clear();
    sc.variants = {filters::Variant::EKF};
    sc.n_runs = 5;

    SUBCASE("noiseless IOD tracks like a truth-initialized filter") {
        sc.iod_range_sigma = 0.0;
        const RunReport iod = iod_then_filter(sc, 1);
        const RunReport direct = run_scenario(sc, 1);
        const double a = *iod.series[0].terminal_rmse;
        const double b = *direct.series[0].terminal_rmse;
        MESSAGE("terminal RMSE iod/direct [km]: " << a << " " << b);
        CHECK(a <= 2.0 * b);
        CHECK(b <= 2.0 * a);
        CHECK(iod.series[0].runs[0].epochs.front() == sc.iod_spacing + sc.step);
        CHECK(*iod.series[0].runs[0].initial_error < 1e-3);
    }

    SUBCASE("ranging noise: the filter improves on the IOD fix") {
        sc.iod_range_sigma = 0.01;
        const RunReport iod = iod_then_filter(sc, 1);
        double sum_sq = 0.0;
        for (const auto& r : iod.series[0].runs) {
            REQUIRE(r.ok());
            sum_sq += *r.initial_error * *r.initial_error;
        }
        const double iod_rms = std::sqrt(sum_sq / static_cast<double>(iod.series[0].runs.size()));
        MESSAGE("IOD error RMS " << iod_rms << " km, terminal RMSE " << *iod.series[0].terminal_rmse);
        CHECK(*iod.series[0].terminal_rmse < iod_rms);
    }

    SUBCASE("stations without a common view") {
        sc.stations = {iod::GroundStation::from_degrees(0.0, 0.0, 0.0),
                       iod::GroundStation::from_degrees(0.0, 180.0, 0.0),
                       iod::GroundStation::from_degrees(5.0, 5.0, 0.0)};
        CHECK(code_of([&] { (void)iod_then_filter(sc, 1); }) == ErrorCode::InitializationFailure);
    }

    SUBCASE("configuration errors") {
        sc.stations.pop_back();
        CHECK(code_of([&] { (void)iod_then_filter(sc, 1); }) == ErrorCode::Scenario);
        sc = default_scenario();
        sc.iod_spacing = 65.0;
        CHECK(code_of([&] { (void)iod_then_filter(sc, 1); }) == ErrorCode::Scenario);
        sc.iod_spacing = 60.0;
        sc.duration = 120.0;
        CHECK(code_of([&] { (void)iod_then_filter(sc, 1); }) == ErrorCode::Scenario);
    }
}

TEST_CASE("dropout_sweep") {
    Scenario sc = default_scenario();
    sc.n_runs = 3;
    sc.schedule.windows = {{Epoch{300.0}, Epoch{400.0}}};
    const auto points = dropout_sweep(sc, {5.0, 10.0}, 1);
    REQUIRE(points.size() == 2);
    CHECK(points[0].dropout_minutes == 5.0);
    CHECK(points[1].report.series[0].runs[0].epochs.back() == 900.0);
    CHECK(points[0].report.series[0].runs[0].epochs.back() == 600.0);
    CHECK(code_of([&] { (void)dropout_sweep(sc, {}, 1); }) == ErrorCode::EmptyInput);
    CHECK(code_of([&] { (void)dropout_sweep(sc, {-1.0}, 1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("ephemeris files") {
    const auto truth = read_ephemeris(fixture("truth.txt"));
    REQUIRE(truth.size() == 5);
    CHECK(truth[0].line == 2);
    CHECK(truth[1].epoch == 10.0);
    CHECK(truth[4].position.z() == 238.564453125);

    std::ostringstream out;
    write_ephemeris(out, truth);
    std::istringstream in(out.str());
    const auto again = parse_ephemeris(in, "roundtrip");
    REQUIRE(again.size() == truth.size());
    for (std::size_t k = 0; k < truth.size(); ++k) CHECK(again[k].position == truth[k].position);

    CHECK(message_of([] { (void)read_ephemeris(fixture("malformed.txt")); }).find("malformed.txt:5:") !=
          std::string::npos);
    const auto bad = [](const char* text) {
        std::istringstream s(text);
        return code_of([&] { (void)parse_ephemeris(s, "bad"); });
    };
    CHECK(bad("1, 2, 3, 4, 5\n") == ErrorCode::Format);
    CHECK(bad("1, 2, x, 4\n") == ErrorCode::Format);
    CHECK(bad("1, 2, , 4\n") == ErrorCode::Format);
    CHECK(bad("1, 2, inf, 4\n") == ErrorCode::Format);
    CHECK(code_of([] { (void)read_ephemeris("/nonexistent.txt"); }) == ErrorCode::Format);
}

TEST_CASE("score_predictions") {
    const auto truth = fixture("truth.txt");
    const RunReport same = score_predictions({truth}, truth);
    CHECK(same.series[0].aggregates->average == 0.0);

    const RunReport offset = score_predictions({fixture("offset_345.txt"), truth}, truth);
    const auto& runs = offset.series[0].runs;
    REQUIRE(runs.size() == 2);
    CHECK(*runs[0].rmse == 5.0);
    CHECK(*runs[1].rmse == 0.0);
    CHECK(offset.series[0].aggregates->best == 0.0);

    CHECK(message_of([&] { (void)score_predictions({fixture("shuffled.txt")}, truth); })
              .find("record 2 (line 2)") != std::string::npos);
    CHECK(code_of([&] { (void)score_predictions({fixture("shuffled.txt")}, truth); }) ==
          ErrorCode::Alignment);
    CHECK(code_of([&] { (void)score_predictions({fixture("short.txt")}, truth); }) ==
          ErrorCode::Alignment);
    CHECK(code_of([&] { (void)score_predictions({truth}, fixture("short.txt")); }) ==
          ErrorCode::Alignment);
    CHECK(code_of([&] { (void)score_predictions({}, truth); }) == ErrorCode::EmptyInput);
}

TEST_CASE("property: truth scored against itself is exact") {
    testing::LeoGenerator gen(54);
    for (int k = 0; k < 20; ++k) {
        const auto traj = measurements::simulate_truth(gen.state(gen.uniform(0.0, 1000.0)),
                                                       dynamics::ForceModel::full(),
                                                       gen.uniform(10.0, 600.0), 10.0);
        std::ostringstream out;
        write_ephemeris(out, ecef_ephemeris(traj));
        std::istringstream in(out.str());
        const auto records = parse_ephemeris(in, "gen");
        const RunResult r = score_run("gen", records, records);
        CHECK(*r.rmse == 0.0);
        CHECK(r.errors.size() == traj.size());
    }
}

TEST_CASE("report writers") {
    Scenario sc = short_scenario();
    sc.n_runs = 2;
    const RunReport report = run_scenario(sc, 1);

    std::ostringstream table;
    write_table(table, report);
    CHECK(table.str().find("ekffg/cowell average ratio") != std::string::npos);
    CHECK(table.str().find("top25 = mean RMSE of the best ceil(n/4)") != std::string::npos);

    std::ostringstream csv;
    write_summary_csv(csv, report);
    std::istringstream lines(csv.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line.starts_with("# top25"));
    std::getline(lines, line);
    CHECK(line == "series,runs,failures,average_rmse_km,best_rmse_km,top25_rmse_km,terminal_rmse_km");
    std::getline(lines, line);
    CHECK(line.starts_with("ekf,2,0,"));

    std::ostringstream mean;
    CHECK(write_mean_series(mean, report.series[0]));
    CHECK(mean.str().starts_with("# epoch_s rms_error_km over 2 runs\n10.000000 "));
}
