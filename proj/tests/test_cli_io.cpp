#include <doctest.h>

#include "rotframe/config.hpp"
#include "rotframe/evolution.hpp"
#include "rotframe/phases.hpp"
#include "rotframe/tables.hpp"
#include "rotframe/verify.hpp"

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace rotframe;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"({"spectral": {"n_channels": 2, "states": [{"energy": -1.0, "gammas": [1.0, 1.0]}]}})";

std::string error_of(std::string_view text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("rotframe_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
}

} // namespace

TEST_CASE("parse_config: minimal document gets the defaults") {
    const auto cfg = parse_config(kMinimal);
    CHECK(cfg.spectral.n_channels == 2);
    REQUIRE(cfg.spectral.n_states() == 1);
    CHECK(cfg.spectral.states[0].kappas == Eigen::Vector2d(1.0, 1.0));
    CHECK(cfg.frame.omega == 0.5);
    CHECK_FALSE(cfg.grid.has_value());
    CHECK(cfg.time.periods == 1);
    CHECK(cfg.time.steps_per_period == 2048);
    CHECK_FALSE(cfg.spin_model.has_value());
    CHECK(cfg.output.directory == "out");
    CHECK(cfg.output.formats == std::vector<std::string>{"csv"});
    CHECK(resolve_grid(cfg) == default_grid(cfg.spectral));
}

TEST_CASE("parse_config: energy from kappas in degenerate mode") {
    const auto cfg =
        parse_config(R"({"spectral": {"n_channels": 2, "states": [{"kappas": [0.5, 0.5], "gammas": [1, 0]}]}})");
    CHECK(cfg.spectral.states[0].energy == doctest::Approx(-0.25));
}

TEST_CASE("parse_config: errors carry field paths") {
    const std::string neg = error_of(
        R"({"spectral": {"n_channels": 2, "states": [{"energy": -1.0, "kappas": [-1.0, 1.0], "gammas": [1, 1]}]}})");
    CHECK(neg.find("spectral.states[0].kappas[0]") != std::string::npos);

    const std::string many = error_of(
        R"({"spectral": {"n_channels": 2, "states": [{"energy": -1.0, "gammas": [0, 0]}]},
            "frame": {"omega": -1}, "time": {"steps_per_period": 12}, "bogus": 1})");
    CHECK(many.find("spectral.states[0].gammas") != std::string::npos);
    CHECK(many.find("frame.omega") != std::string::npos);
    CHECK(many.find("time.steps_per_period") != std::string::npos);
    CHECK(many.find("bogus: unknown field") != std::string::npos);
    CHECK(many.find("4 problem(s)") != std::string::npos);

    CHECK(error_of(R"({"frame": {"omega": 1}})").find("spectral: required section missing") != std::string::npos);
    CHECK(error_of(R"([1, 2])").find("top level") != std::string::npos);

    const std::string spin = error_of(
        R"({"spectral": {"n_channels": 1, "states": [{"energy": -1, "gammas": [1]}]},
            "spin_model": {"j": 0.7, "theta_bar": 4, "sweep": {"omegas": [0.1, 0.2]}}})");
    CHECK(spin.find("spin_model.j") != std::string::npos);
    CHECK(spin.find("spin_model.theta_bar") != std::string::npos);
    CHECK(spin.find("spin_model.sweep.omegas[1]") != std::string::npos);

    const std::string fmt = error_of(
        R"({"spectral": {"n_channels": 1, "states": [{"energy": -1, "gammas": [1]}]}, "output": {"formats": ["hdf5"]}})");
    CHECK(fmt.find("output.formats[0]") != std::string::npos);
}

TEST_CASE("parse_config: even grid count is a quadrature error") {
    const char* text = R"({"spectral": {"n_channels": 2, "states": [{"energy": -1.0, "gammas": [1, 1]}]},
                           "grid": {"x_min": -10, "x_max": 10, "n_points": 2000}})";
    CHECK_THROWS_AS(parse_config(text), QuadratureError);
    CHECK(error_of(text).find("grid.n_points") != std::string::npos);
}

TEST_CASE("parse_config: malformed JSON reports the line") {
    const std::string msg = error_of("{\n  \"spectral\": {\n    \"n_channels\": 2,,\n  }\n}");
    CHECK(msg.find("line 3") != std::string::npos);
}

TEST_CASE("serialize_config round trip") {
    for (const char* name : {"two_state.json", "soliton_uncoupled.json", "spin_half.json"}) {
        const auto cfg = load_config(fs::path(ROTFRAME_CONFIGS) / name);
        const std::string text = serialize_config(cfg);
        const auto again = parse_config(text);
        CHECK(again == cfg);
        CHECK(serialize_config(again) == text);
    }
    CHECK_THROWS_AS(load_config("/nonexistent/rotframe.json"), ConfigError);
}

TEST_CASE("format_double and CSV layout") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(-2.0) == "-2");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    Table t{{"a", "b"}, {{"1", "2"}, {"3", "4"}}};
    CHECK(to_csv(t) == "a,b\n1,2\n3,4\n");
}

TEST_CASE("tables: headers and shapes") {
    const auto spec = two_state_coupled();
    const Grid g{-8.0, 8.0, 161};
    const auto pot = potential_table(spec, g);
    CHECK(pot.header == std::vector<std::string>{"x", "q", "V11", "V12", "V22"});
    CHECK(pot.rows.size() == 161);

    const auto field = field_table(spec, g, 0.5);
    CHECK(field.header == std::vector<std::string>{"x", "omega_bar", "theta_bar", "omega_dressed", "theta_dressed"});

    const auto b = bfield_table(spec, g, 0.5, 5, 41);
    CHECK(b.header == std::vector<std::string>{"t", "x", "B1", "B2", "B3"});
    CHECK(b.rows.size() == 5 * 41);
    CHECK_THROWS_AS(bfield_table(spec, g, 0.0), ConfigError);

    CHECK_THROWS_AS(field_table(one_soliton(), g, 0.5), ConfigError);
    const auto single = potential_table(one_soliton(), g);
    CHECK(single.rows[80][3] == "0");
}

TEST_CASE("phases table: uncoupled state has no geometric phase on its occupied branch") {
    const auto cfg = load_config(fs::path(ROTFRAME_CONFIGS) / "soliton_uncoupled.json");
    const auto sol = make_exact_solution(cfg.spectral, 0, RotationFrame{cfg.frame.omega}, resolve_grid(cfg));
    const PhaseReport r = phase_report(sol, Branch::upper, 256);
    const std::vector<PhaseReport> reports{r};
    const auto t = phases_table(reports);
    CHECK(t.header == std::vector<std::string>{"state", "branch", "total", "dynamical", "geometric", "aa", "sigma3"});
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0][1] == "upper");
    CHECK(std::abs(std::stod(t.rows[0][4])) < 1e-9);
    CHECK(std::stod(t.rows[0][6]) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("sweep table: deviation decreases down the rows") {
    const auto cfg = load_config(fs::path(ROTFRAME_CONFIGS) / "spin_half.json");
    REQUIRE(cfg.spin_model);
    REQUIRE(cfg.spin_model->sweep);
    const auto& sw = *cfg.spin_model->sweep;
    const auto rows = adiabatic_sweep(Spin::from_double(cfg.spin_model->j), cfg.spin_model->m,
                                      PolarField<double>{sw.lab_magnitude, sw.lab_theta, false}, sw.omegas);
    const auto t = sweep_table(rows);
    CHECK(t.header == std::vector<std::string>{"omega_ratio", "geometric", "berry", "deviation"});
    REQUIRE(t.rows.size() == 3);
    for (std::size_t i = 1; i < t.rows.size(); ++i) CHECK(std::stod(t.rows[i][3]) < std::stod(t.rows[i - 1][3]));
}

TEST_CASE("verify table: reflection row and bounds") {
    const auto checks = run_criterion(2);
    const auto t = verify_table(checks);
    CHECK(t.header == std::vector<std::string>{"check_name", "value", "tolerance", "pass"});
    bool found = false;
    for (const auto& row : t.rows) {
        if (row[0] != "reflection_k1") continue;
        found = true;
        CHECK(std::stod(row[1]) <= 1e-8);
        CHECK(row[3] == "true");
    }
    CHECK(found);
    CHECK_THROWS_AS(run_criterion(11), ConfigError);

    const CheckResult lo = at_least(4, "x", 0.5, 1e-3);
    const CheckResult band = within(8, "y", 3.0, 5.0, 20.0);
    const std::vector<CheckResult> two{lo, band};
    const auto vt = verify_table(two);
    CHECK(vt.rows[0][2] == ">=0.001");
    CHECK(vt.rows[1][2] == "5..20");
    CHECK(vt.rows[1][3] == "false");
    CHECK_FALSE(all_passed(two));
}

TEST_CASE("write_table: creates directories, identical bytes, unwritable path") {
    const auto spec = two_state_coupled();
    const Grid g{-6.0, 6.0, 121};
    const fs::path dir = scratch("tables") / "nested";
    const auto first = write_table(dir, "potential.csv", potential_table(spec, g));
    const std::string a = slurp(first);
    const auto second = write_table(dir, "potential.csv", potential_table(spec, g));
    CHECK(slurp(second) == a);
    CHECK(split(a.substr(0, a.find('\n'))) == std::vector<std::string>{"x", "q", "V11", "V12", "V22"});

    const fs::path file = scratch("blocker");
    std::ofstream(file) << "x";
    CHECK_THROWS_AS(write_table(file / "sub", "t.csv", potential_table(spec, g)), OutputError);
    fs::remove_all(file);
    fs::remove_all(dir.parent_path());
}
