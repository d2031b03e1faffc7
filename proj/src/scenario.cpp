#include "orbdet/scenario.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace orbdet::harness {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr const char* kHeader = "orbdet-scenario 1";

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_words(const std::string& s, char extra = ' ') {
    std::string copy = s;
    for (char& c : copy) {
        if (c == extra || c == '\t') c = ' ';
    }
    std::istringstream in(copy);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

double to_double(const std::string& word) {
    char* end = nullptr;
    const double v = std::strtod(word.c_str(), &end);
    if (word.empty() || end != word.c_str() + word.size() || !std::isfinite(v)) {
        throw std::invalid_argument("expected a number, got '" + word + "'");
    }
    return v;
}

std::vector<double> to_doubles(const std::string& value, std::size_t count) {
    const auto words = split_words(value);
    if (words.size() != count) {
        throw std::invalid_argument("expected " + std::to_string(count) + " numbers");
    }
    std::vector<double> out;
    for (const auto& w : words) out.push_back(to_double(w));
    return out;
}

double one_double(const std::string& value) { return to_doubles(value, 1)[0]; }

std::uint64_t to_uint(const std::string& value) {
    const auto words = split_words(value);
    if (words.size() != 1 || words[0].find_first_not_of("0123456789") != std::string::npos) {
        throw std::invalid_argument("expected a non-negative integer, got '" + value + "'");
    }
    errno = 0;
    const unsigned long long v = std::strtoull(words[0].c_str(), nullptr, 10);
    if (errno == ERANGE) throw std::invalid_argument("integer out of range: " + value);
    return v;
}

bool to_bool(const std::string& value) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw std::invalid_argument("expected true or false, got '" + value + "'");
}

Vec3 to_vec3(const std::string& value) {
    const auto v = to_doubles(value, 3);
    return Vec3{v[0], v[1], v[2]};
}

using Setter = std::function<void(Scenario&, const std::string&)>;

OrbitalElements& elements(Scenario& sc) {
    if (!std::holds_alternative<OrbitalElements>(sc.orbit)) {
        throw std::invalid_argument("element keys cannot be mixed with orbit.position_km");
    }
    return std::get<OrbitalElements>(sc.orbit);
}

StateVector& state(Scenario& sc) {
    if (std::holds_alternative<OrbitalElements>(sc.orbit)) {
        StateVector s;
        s.position = Vec3::Constant(std::nan(""));
        s.velocity = Vec3::Constant(std::nan(""));
        sc.orbit = s;
    }
    return std::get<StateVector>(sc.orbit);
}

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table{
        {"orbit.a_km", [](Scenario& sc, const std::string& v) { elements(sc).a = one_double(v); }},
        {"orbit.e", [](Scenario& sc, const std::string& v) { elements(sc).e = one_double(v); }},
        {"orbit.i_deg", [](Scenario& sc, const std::string& v) { elements(sc).i = one_double(v) * kDeg; }},
        {"orbit.raan_deg",
         [](Scenario& sc, const std::string& v) { elements(sc).raan = one_double(v) * kDeg; }},
        {"orbit.argp_deg",
         [](Scenario& sc, const std::string& v) { elements(sc).argp = one_double(v) * kDeg; }},
        {"orbit.nu_deg", [](Scenario& sc, const std::string& v) { elements(sc).nu = one_double(v) * kDeg; }},
        {"orbit.position_km", [](Scenario& sc, const std::string& v) { state(sc).position = to_vec3(v); }},
        {"orbit.velocity_kms", [](Scenario& sc, const std::string& v) { state(sc).velocity = to_vec3(v); }},
        {"orbit.jitter_position_km",
         [](Scenario& sc, const std::string& v) { sc.jitter_position = one_double(v); }},
        {"orbit.jitter_velocity_kms",
         [](Scenario& sc, const std::string& v) { sc.jitter_velocity = one_double(v); }},

        {"force.j2", [](Scenario& sc, const std::string& v) { sc.force.j2 = to_bool(v); }},
        {"force.drag", [](Scenario& sc, const std::string& v) { sc.force.drag = to_bool(v); }},
        {"force.cd", [](Scenario& sc, const std::string& v) { sc.force.drag_params.cd = one_double(v); }},
        {"force.area_to_mass_m2_kg",
         [](Scenario& sc, const std::string& v) { sc.force.drag_params.area_to_mass = one_double(v); }},
        {"force.rho0_kg_m3",
         [](Scenario& sc, const std::string& v) { sc.force.drag_params.rho0 = one_double(v); }},
        {"force.h0_km", [](Scenario& sc, const std::string& v) { sc.force.drag_params.h0 = one_double(v); }},
        {"force.scale_height_km",
         [](Scenario& sc, const std::string& v) { sc.force.drag_params.scale_height = one_double(v); }},

        {"integrator.method",
         [](Scenario& sc, const std::string& v) {
             if (v == "rkf45") {
                 sc.integrator.method = dynamics::IntegratorMethod::RKF45;
             } else if (v == "rk4") {
                 sc.integrator.method = dynamics::IntegratorMethod::RK4;
             } else {
                 throw std::invalid_argument("integrator.method must be rkf45 or rk4");
             }
         }},
        {"integrator.step_s",
         [](Scenario& sc, const std::string& v) { sc.integrator.fixed_step = one_double(v); }},
        {"integrator.rel_tol", [](Scenario& sc, const std::string& v) { sc.integrator.rel_tol = one_double(v); }},
        {"integrator.abs_tol", [](Scenario& sc, const std::string& v) { sc.integrator.abs_tol = one_double(v); }},
        {"integrator.min_step_s",
         [](Scenario& sc, const std::string& v) { sc.integrator.min_step = one_double(v); }},
        {"integrator.max_step_s",
         [](Scenario& sc, const std::string& v) { sc.integrator.max_step = one_double(v); }},

        {"noise.q_position_km2",
         [](Scenario& sc, const std::string& v) {
             Mat6 q = sc.noise.process.matrix();
             q.block<3, 3>(0, 0) = Mat3::Identity() * one_double(v);
             sc.noise.process = Covariance6(q);
         }},
        {"noise.q_velocity_km2_s2",
         [](Scenario& sc, const std::string& v) {
             Mat6 q = sc.noise.process.matrix();
             q.block<3, 3>(3, 3) = Mat3::Identity() * one_double(v);
             sc.noise.process = Covariance6(q);
         }},
        {"noise.r_km2",
         [](Scenario& sc, const std::string& v) { sc.noise.measurement = Mat3::Identity() * one_double(v); }},

        {"filter.initial_position_sigma_km",
         [](Scenario& sc, const std::string& v) { sc.initial_position_sigma = one_double(v); }},
        {"filter.initial_velocity_sigma_kms",
         [](Scenario& sc, const std::string& v) { sc.initial_velocity_sigma = one_double(v); }},

        {"schedule.step_s", [](Scenario& sc, const std::string& v) { sc.step = one_double(v); }},
        {"schedule.cadence_s", [](Scenario& sc, const std::string& v) { sc.schedule.cadence = one_double(v); }},
        {"schedule.duration_s", [](Scenario& sc, const std::string& v) { sc.duration = one_double(v); }},
        {"schedule.sigma_km", [](Scenario& sc, const std::string& v) { sc.schedule.sigma = one_double(v); }},
        {"schedule.dropout",
         [](Scenario& sc, const std::string& v) {
             if (v == "none") return;
             const auto w = to_doubles(v, 2);
             sc.schedule.windows.push_back({Epoch{w[0]}, Epoch{w[1]}});
         }},

        {"run.variants",
         [](Scenario& sc, const std::string& v) {
             sc.variants.clear();
             for (const auto& word : split_words(v, ',')) {
                 const auto variant = filters::parse_variant(word);
                 if (!variant) throw std::invalid_argument("unknown variant '" + word + "'");
                 sc.variants.push_back(*variant);
             }
         }},
        {"run.n_runs",
         [](Scenario& sc, const std::string& v) {
             const auto n = to_uint(v);
             if (n < 1 || n > 1000000) throw std::invalid_argument("run.n_runs must be in [1, 1e6]");
             sc.n_runs = static_cast<int>(n);
         }},
        {"run.seed", [](Scenario& sc, const std::string& v) { sc.seed = to_uint(v); }},

        {"iod.station",
         [](Scenario& sc, const std::string& v) {
             const auto g = to_doubles(v, 3);
             sc.stations.push_back(iod::GroundStation::from_degrees(g[0], g[1], g[2]));
         }},
        {"iod.spacing_s", [](Scenario& sc, const std::string& v) { sc.iod_spacing = one_double(v); }},
        {"iod.range_sigma_km", [](Scenario& sc, const std::string& v) { sc.iod_range_sigma = one_double(v); }},
        {"iod.position_sigma_km",
         [](Scenario& sc, const std::string& v) { sc.iod_position_sigma = one_double(v); }},
        {"iod.velocity_sigma_kms",
         [](Scenario& sc, const std::string& v) { sc.iod_velocity_sigma = one_double(v); }},
    };
    return table;
}

const std::set<std::string> kRepeatable{"schedule.dropout", "iod.station"};

}  // namespace

void Scenario::validate() const {
    if (const auto* el = std::get_if<OrbitalElements>(&orbit)) {
        el->validate();
    } else {
        check_state(std::get<StateVector>(orbit));
    }
    force.validate();
    integrator.validate();
    noise.validate();
    schedule.validate();
    const auto need = [](bool ok, const std::string& what) {
        if (!ok) throw Error(ErrorCode::Scenario, what);
    };
    need(jitter_position >= 0.0 && jitter_velocity >= 0.0, "orbit jitter must be non-negative");
    need(initial_position_sigma >= 0.0 && initial_velocity_sigma >= 0.0,
         "initial sigmas must be non-negative");
    need(step > 0.0, "schedule.step_s must be positive");
    need(duration >= step, "schedule.duration_s must cover at least one step");
    const double ratio = schedule.cadence / step;
    need(std::abs(ratio - std::round(ratio)) <= 1e-9 * ratio && ratio >= 1.0 - 1e-9,
         "schedule.cadence_s must be a whole multiple of schedule.step_s");
    need(!variants.empty(), "run.variants is empty");
    need(n_runs >= 1, "run.n_runs must be at least 1");
    for (const auto& g : stations) g.validate();
    need(iod_spacing > 0.0 && iod_range_sigma >= 0.0 && iod_position_sigma > 0.0 &&
             iod_velocity_sigma > 0.0,
         "iod spacing and sigmas must be positive");
}

StateVector Scenario::initial_state() const {
    if (const auto* el = std::get_if<OrbitalElements>(&orbit)) return elements_to_state(*el);
    return std::get<StateVector>(orbit);
}

Scenario default_scenario() {
    Scenario sc;
    sc.orbit = OrbitalElements{constants::earth_radius + 500.0, 0.0, 51.6 * kDeg, 0.0, 0.0, 0.0};
    sc.schedule.windows = {{Epoch{600.0}, Epoch{600.0 + 90.0 * 60.0}}};
    sc.variants = {filters::Variant::EKF, filters::Variant::EKFFG, filters::Variant::COWELL};
    sc.stations = {iod::GroundStation::from_degrees(2.0, -2.0, 0.1),
                   iod::GroundStation::from_degrees(6.0, 6.0, 0.2),
                   iod::GroundStation::from_degrees(-3.0, 5.0, 0.0)};
    return sc;
}

Scenario parse_scenario(std::istream& in, const std::string& source) {
    Scenario sc = default_scenario();
    std::set<std::string> seen;
    bool header = false;
    int line_no = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        const auto fail = [&](const std::string& msg) {
            throw Error(ErrorCode::Scenario, source + ":" + std::to_string(line_no) + ": " + msg);
        };
        const std::string line = trim(std::string_view(raw).substr(0, raw.find('#')));
        if (line.empty()) continue;
        if (!header) {
            if (line != kHeader) fail("expected header '" + std::string(kHeader) + "'");
            header = true;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) fail("unknown key '" + key + "'");
        if (value.empty()) fail("missing value for '" + key + "'");

        const bool first = seen.insert(key).second;
        if (!first && !kRepeatable.contains(key)) fail("duplicate key '" + key + "'");
        if (first && key == "schedule.dropout") sc.schedule.windows.clear();
        if (first && key == "iod.station") sc.stations.clear();
        if (!first && key == "schedule.dropout" && (value == "none" || sc.schedule.windows.empty())) {
            fail("schedule.dropout = none cannot be combined with windows");
        }
        try {
            it->second(sc, value);
        } catch (const std::invalid_argument& e) {
            fail(key + ": " + e.what());
        }
    }
    if (!header) {
        throw Error(ErrorCode::Scenario, source + ": missing header '" + std::string(kHeader) + "'");
    }
    const bool any_elements = std::any_of(seen.begin(), seen.end(), [](const std::string& k) {
        return (k.starts_with("orbit.") && k.ends_with("_deg")) || k == "orbit.a_km" || k == "orbit.e";
    });
    if (any_elements && std::holds_alternative<StateVector>(sc.orbit)) {
        throw Error(ErrorCode::Scenario, source + ": element keys cannot be mixed with orbit.position_km");
    }
    if (const auto* s = std::get_if<StateVector>(&sc.orbit); s && !s->is_finite()) {
        throw Error(ErrorCode::Scenario,
                    source + ": orbit.position_km and orbit.velocity_kms must be given together");
    }
    try {
        sc.validate();
    } catch (const Error& e) {
        throw Error(ErrorCode::Scenario, source + ": " + e.what());
    }
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Scenario, "cannot open scenario file " + path.string());
    return parse_scenario(in, path.string());
}

}  // namespace orbdet::harness
