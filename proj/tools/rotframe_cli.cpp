// Command-line front end: tabulates potentials, fields and phases, runs the
// oracles and the verification suite. Exit codes: 0 ok, 1 configuration
// error, 2 verification failure, 3 numerical degeneracy.

#include "rotframe/config.hpp"
#include "rotframe/evolution.hpp"
#include "rotframe/field_map.hpp"
#include "rotframe/oracle.hpp"
#include "rotframe/phases.hpp"
#include "rotframe/spin_model.hpp"
#include "rotframe/tables.hpp"
#include "rotframe/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>

namespace {

using namespace rotframe;

constexpr int kExitConfig = 1;
constexpr int kExitVerify = 2;
constexpr int kExitNumerical = 3;

struct GlobalOptions {
    std::string config_path;
    std::string out;
    std::optional<int> steps;
    std::uint64_t seed = VerifyOptions{}.seed;
};

RunConfig require_config(const GlobalOptions& g) {
    if (g.config_path.empty()) throw ConfigError("this subcommand needs --config <path>");
    RunConfig cfg = load_config(g.config_path);
    if (g.steps) {
        if (*g.steps < 128) throw ConfigError("--steps must be >= 128");
        cfg.time.steps_per_period = *g.steps;
    }
    return cfg;
}

/// --out, then $ROTFRAME_OUT, then output.directory of the config.
std::filesystem::path output_dir(const GlobalOptions& g, const RunConfig* cfg) {
    if (!g.out.empty()) return g.out;
    if (const char* env = std::getenv("ROTFRAME_OUT"); env && *env) return env;
    return cfg ? cfg->output.directory : OutputConfig{}.directory;
}

void report(const std::filesystem::path& p) {
    std::cout << "wrote " << p.string() << "\n";
}

int cmd_potential(const GlobalOptions& g) {
    const RunConfig cfg = require_config(g);
    report(write_table(output_dir(g, &cfg), "potential.csv", potential_table(cfg.spectral, resolve_grid(cfg))));
    return 0;
}

int cmd_field(const GlobalOptions& g) {
    const RunConfig cfg = require_config(g);
    const Grid grid = resolve_grid(cfg);
    const auto dir = output_dir(g, &cfg);
    report(write_table(dir, "field.csv", field_table(cfg.spectral, grid, cfg.frame.omega)));
    report(write_table(dir, "bfield.csv", bfield_table(cfg.spectral, grid, cfg.frame.omega)));
    return 0;
}

int cmd_evolve(const GlobalOptions& g) {
    const RunConfig cfg = require_config(g);
    const Grid grid = resolve_grid(cfg);
    const RotationFrame frame{cfg.frame.omega};
    Table t;
    t.header = {"state", "energy", "tdse_residual", "cyclic_fidelity", "oracle_infidelity"};
    for (Eigen::Index nu = 0; nu < cfg.spectral.n_states(); ++nu) {
        const auto sol = make_exact_solution(cfg.spectral, nu, frame, grid);
        const double residual = tdse_residual(sol, 0.37 * frame.period());
        const auto cyc = cyclic_return(sol, cfg.time.steps_per_period);

        // grid oracle over the configured number of periods
        oracle::GridHamiltonian h;
        h.grid = grid;
        h.q.resize(grid.n_points);
        std::vector<PolarField<double>> fields;
        for (Eigen::Index i = 0; i < grid.n_points; ++i) {
            const auto d = decompose<double>(sol.potential[static_cast<std::size_t>(i)]);
            h.q[i] = d.q;
            fields.push_back(d.field);
        }
        h.spin = [&](Eigen::Index i, double time) -> Eigen::Matrix2cd {
            return h_of_t(0.0, fields[static_cast<std::size_t>(i)], frame.omega, time).spin;
        };
        const double duration = frame.period() * cfg.time.periods;
        const SpinorField numeric = oracle::propagate_grid(
            h, sol.base_state, 0.0, duration,
            {cfg.time.steps_per_period * cfg.time.periods, oracle::Scheme::implicit_midpoint});
        const SpinorField exact = exact_psi(sol, duration);
        const double infidelity =
            1.0 - std::abs(inner_product(exact, numeric)) / (l2_norm(exact) * l2_norm(numeric));

        std::printf("state %lld  E = %.12g  tdse residual %.3e  cyclic fidelity %.15f  oracle infidelity %.3e\n",
                    static_cast<long long>(nu), sol.energy, residual, cyc.fidelity, infidelity);
        t.rows.push_back({std::to_string(nu), format_double(sol.energy), format_double(residual),
                          format_double(cyc.fidelity), format_double(infidelity)});
    }
    report(write_table(output_dir(g, &cfg), "evolve.csv", t));
    return 0;
}

int cmd_phases(const GlobalOptions& g) {
    const RunConfig cfg = require_config(g);
    const Grid grid = resolve_grid(cfg);
    const RotationFrame frame{cfg.frame.omega};
    std::vector<PhaseReport> reports;
    for (Eigen::Index nu = 0; nu < cfg.spectral.n_states(); ++nu) {
        const auto sol = make_exact_solution(cfg.spectral, nu, frame, grid);
        const auto cyc = cyclic_return(sol, cfg.time.steps_per_period);
        for (Branch b : {Branch::upper, Branch::lower}) {
            // a branch whose component carries no weight has no phase to report
            if (!cyc.total[b == Branch::upper ? 0 : 1]) continue;
            const auto r = phase_report(sol, b, cfg.time.steps_per_period);
            std::printf("state %lld %-5s  total %.12f  dynamical %.12f  geometric %.12f  aa %.12f  sigma3 %.12f\n",
                        static_cast<long long>(nu), b == Branch::upper ? "upper" : "lower", r.total, r.dynamical,
                        r.geometric, r.aa_integral, r.spin_expectation);
            reports.push_back(r);
        }
    }
    report(write_table(output_dir(g, &cfg), "phases.csv", phases_table(reports)));
    return 0;
}

int cmd_spin_model(const GlobalOptions& g) {
    const RunConfig cfg = require_config(g);
    if (!cfg.spin_model) throw ConfigError("spin_model: section required for the spin-model subcommand");
    const auto& sm = *cfg.spin_model;
    const Spin spin = Spin::from_double(sm.j);
    const auto model = make_cranked_model(spin, sm.omega_bar, sm.theta_bar, sm.omega);
    const auto r = spin_phases(model, sm.m);
    std::printf("j = %g  m = %d  E = %.15g  alignment %.15g\n", spin.j(), r.m, r.energy, r.alignment);
    std::printf("total %.15g  dynamical %.15g  geometric %.15g  (mod 2pi: %.15g)\n", r.total, r.dynamical,
                r.geometric, r.geometric_mod);
    if (sm.sweep) {
        const PolarField<double> lab{sm.sweep->lab_magnitude, sm.sweep->lab_theta, false};
        const auto rows = adiabatic_sweep(spin, sm.m, lab, sm.sweep->omegas);
        for (const auto& row : rows) {
            std::printf("omega/Omega %-8g geometric %.15g  berry %.15g  deviation %.3e%s\n", row.omega_ratio,
                        row.geometric, row.berry, row.deviation, row.flagged ? "  (degenerate)" : "");
        }
        report(write_table(output_dir(g, &cfg), "sweep.csv", sweep_table(rows)));
    }
    return 0;
}

int cmd_verify(const GlobalOptions& g, bool perturb) {
    std::optional<RunConfig> cfg;
    if (!g.config_path.empty()) cfg = load_config(g.config_path);
    VerifyOptions opt;
    opt.seed = g.seed;
    opt.perturb = perturb;
    if (g.steps) {
        if (*g.steps < 128) throw ConfigError("--steps must be >= 128");
        opt.spin_steps = *g.steps;
    }
    std::vector<CheckResult> checks;
    for (int c = 1; c <= 9; ++c) {
        const auto part = run_criterion(c, opt);
        for (const auto& r : part) {
            std::printf("[%d] %-28s %-5s value %.6e\n", r.criterion, r.name.c_str(), r.pass ? "PASS" : "FAIL",
                        r.value);
        }
        checks.insert(checks.end(), part.begin(), part.end());
    }
    report(write_table(output_dir(g, cfg ? &*cfg : nullptr), "verify.csv", verify_table(checks)));
    const bool ok = all_passed(checks);
    std::cout << (ok ? "all checks passed" : "verification FAILED") << "\n";
    return ok ? 0 : kExitVerify;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rotating-frame solvable Hamiltonians: tables, oracles and checks"};
    app.require_subcommand(1);
    app.fallthrough();
    GlobalOptions g;
    app.add_option("--config", g.config_path, "JSON run configuration");
    app.add_option("--out", g.out, "output directory (default: $ROTFRAME_OUT, then output.directory)");
    app.add_option("--steps", g.steps, "time steps per period");
    app.add_option("--seed", g.seed, "seed for randomized checks");

    auto* potential = app.add_subcommand("potential", "tabulate V(x) -> potential.csv");
    auto* field = app.add_subcommand("field", "field decomposition, dressing and B(t, x) -> field.csv, bfield.csv");
    auto* evolve = app.add_subcommand("evolve", "exact solutions against the grid oracle -> evolve.csv");
    auto* phases = app.add_subcommand("phases", "total, dynamical, geometric and AA phases -> phases.csv");
    auto* spin = app.add_subcommand("spin-model", "cranked spin phases and adiabatic sweep -> sweep.csv");
    auto* verify = app.add_subcommand("verify", "run the invariant suite -> verify.csv");
    bool perturb = false;
    verify->add_flag("--perturb", perturb, "add 0.1 sin(t) sigma_1 to H(t) in the frame check (negative control)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*potential) return cmd_potential(g);
        if (*field) return cmd_field(g);
        if (*evolve) return cmd_evolve(g);
        if (*phases) return cmd_phases(g);
        if (*spin) return cmd_spin_model(g);
        if (*verify) return cmd_verify(g, perturb);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitConfig;
}
