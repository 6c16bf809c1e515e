#include "rotframe/config.hpp"

#include "rotframe/errors.hpp"
#include "rotframe/gauge.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace rotframe {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

/// Collects every schema problem instead of stopping at the first one.
struct Diagnostics {
    std::vector<std::string> problems;
    bool quadrature = false;

    void add(const std::string& path, const std::string& what) { problems.push_back(path + ": " + what); }
};

std::string key_path(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& path, Diagnostics& d) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) d.add(key_path(path, key), "unknown field");
    }
}

const json* section(const json& parent, const std::string& key, const std::string& path, Diagnostics& d) {
    if (!parent.contains(key)) return nullptr;
    const json& s = parent.at(key);
    if (!s.is_object()) {
        d.add(key_path(path, key), "expected an object");
        return nullptr;
    }
    return &s;
}

void read_number(const json& obj, const std::string& key, const std::string& path, double& out, Diagnostics& d) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number()) {
        d.add(key_path(path, key), "expected a number");
        return;
    }
    out = v.get<double>();
    if (!std::isfinite(out)) d.add(key_path(path, key), "must be finite");
}

void read_int(const json& obj, const std::string& key, const std::string& path, long long& out, Diagnostics& d) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) {
        d.add(key_path(path, key), "expected an integer");
        return;
    }
    out = v.get<long long>();
}

std::optional<Eigen::VectorXd> read_vector(const json& obj, const std::string& key, const std::string& path,
                                           Diagnostics& d) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_array()) {
        d.add(key_path(path, key), "expected an array of numbers");
        return std::nullopt;
    }
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    bool ok = true;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string p = key_path(path, key) + "[" + std::to_string(i) + "]";
        if (!v[i].is_number()) {
            d.add(p, "expected a number");
            ok = false;
        } else {
            out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
        }
    }
    if (!ok) return std::nullopt;
    return out;
}

SpectralData<double> read_spectral(const json& root, Diagnostics& d) {
    SpectralData<double> spec;
    const json* s = section(root, "spectral", "", d);
    if (!s) {
        if (!root.contains("spectral")) d.add("spectral", "required section missing");
        return spec;
    }
    reject_unknown(*s, {"n_channels", "thresholds", "states"}, "spectral", d);

    long long channels = 1;
    read_int(*s, "n_channels", "spectral", channels, d);
    spec.n_channels = static_cast<Eigen::Index>(channels);

    if (s->contains("thresholds")) {
        const json& t = s->at("thresholds");
        if (t == "degenerate") {
            spec.thresholds = ThresholdMode::degenerate;
        } else if (t == "per_channel") {
            spec.thresholds = ThresholdMode::per_channel;
        } else {
            d.add("spectral.thresholds", "expected \"degenerate\" or \"per_channel\"");
        }
    }

    if (!s->contains("states") || !s->at("states").is_array()) {
        d.add("spectral.states", "expected an array of bound states");
        return spec;
    }
    const json& states = s->at("states");
    for (std::size_t nu = 0; nu < states.size(); ++nu) {
        const std::string path = "spectral.states[" + std::to_string(nu) + "]";
        const json& st = states[nu];
        if (!st.is_object()) {
            d.add(path, "expected an object");
            continue;
        }
        reject_unknown(st, {"energy", "kappas", "gammas"}, path, d);
        BoundState<double> b;
        const bool has_energy = st.contains("energy");
        double energy = 0.0;
        read_number(st, "energy", path, energy, d);
        const auto kappas = read_vector(st, "kappas", path, d);
        const auto gammas = read_vector(st, "gammas", path, d);
        if (!gammas) {
            if (!st.contains("gammas")) d.add(path + ".gammas", "required field missing");
            continue;
        }
        b.gammas = *gammas;
        if (kappas) {
            b.kappas = *kappas;
        } else if (has_energy && energy < 0.0) {
            b.kappas = Eigen::VectorXd::Constant(spec.n_channels > 0 ? spec.n_channels : 1, std::sqrt(-energy));
        } else if (!st.contains("kappas")) {
            d.add(path, "needs kappas or a negative energy");
            continue;
        } else {
            continue;
        }
        if (has_energy) {
            b.energy = energy;
        } else if (spec.thresholds == ThresholdMode::degenerate && b.kappas.size() > 0) {
            b.energy = -b.kappas[0] * b.kappas[0];
        } else {
            d.add(path + ".energy", "required for per-channel thresholds");
            continue;
        }
        spec.states.push_back(std::move(b));
    }
    if (spec.states.size() == states.size()) {
        for (auto& p : validate(spec)) d.problems.push_back(std::move(p));
    }
    return spec;
}

} // namespace

RunConfig parse_config(std::string_view text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        // byte offset -> line and column
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ConfigError("config: malformed JSON at line " + std::to_string(line) + ", column " +
                          std::to_string(column) + ": " + e.what());
    }
    if (!root.is_object()) throw ConfigError("config: top level must be a JSON object");

    Diagnostics d;
    RunConfig cfg;
    reject_unknown(root, {"spectral", "frame", "grid", "time", "spin_model", "output"}, "", d);
    cfg.spectral = read_spectral(root, d);

    if (const json* f = section(root, "frame", "", d)) {
        reject_unknown(*f, {"omega"}, "frame", d);
        read_number(*f, "omega", "frame", cfg.frame.omega, d);
    }
    if (!(cfg.frame.omega > 0.0)) d.add("frame.omega", "rotation frequency must be positive");

    if (const json* g = section(root, "grid", "", d)) {
        reject_unknown(*g, {"x_min", "x_max", "n_points"}, "grid", d);
        Grid grid;
        long long n = grid.n_points;
        for (const char* key : {"x_min", "x_max", "n_points"}) {
            if (!g->contains(key)) d.add(std::string("grid.") + key, "required field missing");
        }
        read_number(*g, "x_min", "grid", grid.x_min, d);
        read_number(*g, "x_max", "grid", grid.x_max, d);
        read_int(*g, "n_points", "grid", n, d);
        grid.n_points = static_cast<Eigen::Index>(n);
        if (!(grid.x_max > grid.x_min)) d.add("grid.x_max", "must exceed grid.x_min");
        if (n < 3 || n % 2 == 0) {
            d.add("grid.n_points", "composite Simpson quadrature needs an odd count >= 3, got " + std::to_string(n));
            d.quadrature = true;
        }
        cfg.grid = grid;
    }

    if (const json* t = section(root, "time", "", d)) {
        reject_unknown(*t, {"periods", "steps_per_period"}, "time", d);
        long long periods = cfg.time.periods, steps = cfg.time.steps_per_period;
        read_int(*t, "periods", "time", periods, d);
        read_int(*t, "steps_per_period", "time", steps, d);
        if (periods < 1) d.add("time.periods", "must be >= 1");
        if (steps < 128) d.add("time.steps_per_period", "must be >= 128");
        cfg.time.periods = static_cast<int>(periods);
        cfg.time.steps_per_period = static_cast<int>(steps);
    }

    if (const json* s = section(root, "spin_model", "", d)) {
        reject_unknown(*s, {"j", "m", "omega_bar", "theta_bar", "omega", "sweep"}, "spin_model", d);
        SpinModelConfig sm;
        long long m = sm.m;
        read_number(*s, "j", "spin_model", sm.j, d);
        read_int(*s, "m", "spin_model", m, d);
        read_number(*s, "omega_bar", "spin_model", sm.omega_bar, d);
        read_number(*s, "theta_bar", "spin_model", sm.theta_bar, d);
        read_number(*s, "omega", "spin_model", sm.omega, d);
        sm.m = static_cast<int>(m);
        try {
            const Spin spin = Spin::from_double(sm.j);
            if (std::abs(sm.m) > spin.twice_j || (spin.twice_j - sm.m) % 2 != 0) {
                d.add("spin_model.m", "must be one of 2j, 2j-2, ..., -2j");
            }
        } catch (const ConfigError&) {
            d.add("spin_model.j", "must be a positive multiple of 1/2");
        }
        if (!(sm.omega_bar > 0.0)) d.add("spin_model.omega_bar", "must be positive");
        if (!(sm.theta_bar >= 0.0 && sm.theta_bar <= std::numbers::pi)) d.add("spin_model.theta_bar", "must lie in [0, pi]");
        if (!(sm.omega > 0.0)) d.add("spin_model.omega", "rotation frequency must be positive");
        if (const json* w = section(*s, "sweep", "spin_model", d)) {
            reject_unknown(*w, {"lab_magnitude", "lab_theta", "omegas"}, "spin_model.sweep", d);
            SweepConfig sweep;
            read_number(*w, "lab_magnitude", "spin_model.sweep", sweep.lab_magnitude, d);
            read_number(*w, "lab_theta", "spin_model.sweep", sweep.lab_theta, d);
            if (auto om = read_vector(*w, "omegas", "spin_model.sweep", d)) {
                sweep.omegas.assign(om->data(), om->data() + om->size());
            }
            if (!(sweep.lab_magnitude > 0.0)) d.add("spin_model.sweep.lab_magnitude", "must be positive");
            for (std::size_t i = 0; i < sweep.omegas.size(); ++i) {
                if (!(sweep.omegas[i] >= 0.0) || (i > 0 && !(sweep.omegas[i] < sweep.omegas[i - 1]))) {
                    d.add("spin_model.sweep.omegas[" + std::to_string(i) + "]",
                          "omegas must be non-negative and strictly decreasing");
                }
            }
            sm.sweep = sweep;
        }
        cfg.spin_model = sm;
    }

    if (const json* o = section(root, "output", "", d)) {
        reject_unknown(*o, {"directory", "formats"}, "output", d);
        if (o->contains("directory")) {
            if (o->at("directory").is_string()) {
                cfg.output.directory = o->at("directory").get<std::string>();
            } else {
                d.add("output.directory", "expected a string");
            }
        }
        if (cfg.output.directory.empty()) d.add("output.directory", "must not be empty");
        if (o->contains("formats")) {
            const json& f = o->at("formats");
            cfg.output.formats.clear();
            if (!f.is_array()) {
                d.add("output.formats", "expected an array of strings");
            } else {
                for (std::size_t i = 0; i < f.size(); ++i) {
                    if (f[i] != "csv") {
                        d.add("output.formats[" + std::to_string(i) + "]", "only \"csv\" is supported");
                    } else {
                        cfg.output.formats.push_back("csv");
                    }
                }
            }
        }
    }

    if (!d.problems.empty()) {
        std::string msg = "config: " + std::to_string(d.problems.size()) + " problem(s)";
        for (const auto& p : d.problems) msg += "\n  " + p;
        if (d.quadrature) throw QuadratureError(msg);
        throw ConfigError(msg);
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string serialize_config(const RunConfig& config) {
    auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
    ordered_json root;
    ordered_json spectral;
    spectral["n_channels"] = config.spectral.n_channels;
    spectral["thresholds"] = config.spectral.thresholds == ThresholdMode::degenerate ? "degenerate" : "per_channel";
    spectral["states"] = ordered_json::array();
    for (const auto& s : config.spectral.states) {
        ordered_json st;
        st["energy"] = s.energy;
        st["kappas"] = vec(s.kappas);
        st["gammas"] = vec(s.gammas);
        spectral["states"].push_back(st);
    }
    root["spectral"] = spectral;
    root["frame"] = {{"omega", config.frame.omega}};
    if (config.grid) {
        root["grid"] = {{"x_min", config.grid->x_min}, {"x_max", config.grid->x_max}, {"n_points", config.grid->n_points}};
    }
    root["time"] = {{"periods", config.time.periods}, {"steps_per_period", config.time.steps_per_period}};
    if (config.spin_model) {
        const auto& sm = *config.spin_model;
        ordered_json s;
        s["j"] = sm.j;
        s["m"] = sm.m;
        s["omega_bar"] = sm.omega_bar;
        s["theta_bar"] = sm.theta_bar;
        s["omega"] = sm.omega;
        if (sm.sweep) {
            s["sweep"] = {{"lab_magnitude", sm.sweep->lab_magnitude},
                          {"lab_theta", sm.sweep->lab_theta},
                          {"omegas", sm.sweep->omegas}};
        }
        root["spin_model"] = s;
    }
    root["output"] = {{"directory", config.output.directory}, {"formats", config.output.formats}};
    return root.dump(2) + "\n";
}

Grid resolve_grid(const RunConfig& config) {
    return config.grid ? *config.grid : default_grid(config.spectral);
}

} // namespace rotframe
