#include "rotframe/verify.hpp"

#include "rotframe/evolution.hpp"
#include "rotframe/field_map.hpp"
#include "rotframe/gauge.hpp"
#include "rotframe/oracle.hpp"
#include "rotframe/phases.hpp"
#include "rotframe/spin_model.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace rotframe {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double kOmega = 0.5; // frame frequency of the spatial checks

std::vector<SpectralData<double>> random_configs(std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::vector<SpectralData<double>> out;
    for (int i = 0; i < count; ++i) out.push_back(random_spectral(rng));
    return out;
}

std::string k_label(double k) {
    std::string s = format_double(k);
    return "reflection_k" + s;
}

// ---- 1: one-soliton golden values

std::vector<CheckResult> golden_soliton() {
    const auto spec = one_soliton();
    double v_err = 0.0, phi_err = 0.0, jost_err = 0.0;
    Eigen::VectorXcd k(1);
    k[0] = std::complex<double>(0.0, 1.0);
    for (int i = 0; i <= 2000; ++i) {
        const double x = -10.0 + 0.01 * i;
        const double sech = 1.0 / std::cosh(x);
        v_err = std::max(v_err, std::abs(potential_matrix(spec, x).V(0, 0) + 2.0 * sech * sech));
        phi_err = std::max(phi_err, std::abs(bound_state_at(spec, 0, x)[0] - sech / std::sqrt(2.0)));
        const auto F = jost_solution(spec, k, JostSign::plus, x);
        jost_err = std::max(jost_err, std::abs(F(0, 0) * std::sqrt(2.0) - sech / std::sqrt(2.0)));
    }
    // sampled route: wide grid, compared on [-10, 10]
    const Grid wide{-30.0, 30.0, 6001};
    const auto sample = bound_state(spec, 0, wide);
    double grid_err = 0.0;
    for (Eigen::Index i = 2000; i <= 4000; ++i) {
        const double x = wide.x(i);
        grid_err = std::max(grid_err, std::abs(sample.state.values(i, 0) - 1.0 / (std::sqrt(2.0) * std::cosh(x))));
    }
    return {at_most(1, "soliton_potential", v_err, 1e-10), at_most(1, "soliton_bound_state", phi_err, 1e-10),
            at_most(1, "soliton_jost", jost_err, 1e-10), at_most(1, "soliton_bound_state_grid", grid_err, 1e-10),
            at_most(1, "soliton_norm", std::abs(sample.quadrature_norm - 1.0), 1e-10)};
}

// ---- 2: transparency via the scattering oracle

std::vector<CheckResult> transparency(const VerifyOptions& opt) {
    const std::array<double, 5> ks{0.5, 1.0, 2.0, 4.0, 8.0};
    std::array<double, 5> worst{};
    for (const auto& spec : random_configs(opt.seed, 5)) {
        const Grid range = default_grid(spec, 1.0);
        Eigen::Index n = static_cast<Eigen::Index>(std::ceil((range.x_max - range.x_min) / 2e-3));
        n = 2 * n + 1;
        const auto table = oracle::tabulate([&](double x) -> Eigen::MatrixXd { return potential_matrix(spec, x).V; },
                                            range.x_min, range.x_max, n);
        for (std::size_t i = 0; i < ks.size(); ++i) {
            worst[i] = std::max(worst[i], oracle::reflection_matrix(table, ks[i]).cwiseAbs().maxCoeff());
        }
    }
    std::vector<CheckResult> out;
    for (std::size_t i = 0; i < ks.size(); ++i) out.push_back(at_most(2, k_label(ks[i]), worst[i], 1e-6));
    return out;
}

// ---- 3: stationary eigen-residuals

std::vector<CheckResult> eigen_residuals(const VerifyOptions& opt) {
    double worst = 0.0;
    for (const auto& spec : random_configs(opt.seed, 5)) {
        const Grid grid = default_grid(spec, 0.05);
        for (Eigen::Index nu = 0; nu < spec.n_states(); ++nu) {
            worst = std::max(worst, eigen_residual(spec, nu, grid, 1e-3));
        }
    }
    return {at_most(3, "eigen_residual", worst, 1e-6)};
}

// ---- 4: frame stationarity and the two constructions of H(t)

std::vector<CheckResult> frame_checks(const VerifyOptions& opt) {
    const auto spec = two_state_coupled();
    const RotationFrame frame{kOmega};
    std::vector<double> times(100);
    for (int k = 0; k < 100; ++k) times[static_cast<std::size_t>(k)] = frame.period() * k / 99.0;

    double stationarity = 0.0, dual = 0.0, control = 0.0;
    for (double x : {-3.0, -1.0, 0.0, 0.7, 2.5}) {
        const auto d = decompose<double>(potential_matrix(spec, x).V);
        const Eigen::Matrix2cd hbar = h_stationary(d.q, d.field).matrix();
        auto lab = [&](double t) -> Eigen::Matrix2cd { return h_of_t(d.q, d.field, frame.omega, t).matrix(); };
        auto perturbed = [&](double t) -> Eigen::Matrix2cd {
            return lab(t) + std::complex<double>(0.1 * std::sin(t)) * pauli::sigma1<double>();
        };
        const std::function<Eigen::Matrix2cd(double)> checked =
            opt.perturb ? std::function<Eigen::Matrix2cd(double)>(perturbed) : lab;

        // deviation over t, plus the t = 0 value against H_bar itself
        const Eigen::Matrix2cd S0 = s_of_t(frame, 0.0);
        const Eigen::Matrix2cd at_zero =
            S0.adjoint() * checked(0.0) * S0 - std::complex<double>(0, 1) * S0.adjoint() * s_dot(frame, 0.0);
        stationarity = std::max({stationarity, frame_stationarity_check(checked, frame, times),
                                 (at_zero - hbar).cwiseAbs().maxCoeff()});
        control = std::max(control, frame_stationarity_check(perturbed, frame, times));
        for (double t : times) {
            const Eigen::Matrix2cd a = h_of_t(d.q, d.field, frame.omega, t).matrix();
            const Eigen::Matrix2cd b = h_of_t_conjugated(d.q, d.field, frame.omega, t).matrix();
            dual = std::max(dual, (a - b).cwiseAbs().maxCoeff());
        }
    }
    return {at_most(4, "frame_stationarity", stationarity, 1e-12), at_most(4, "dual_construction", dual, 1e-12),
            at_least(4, "frame_negative_control", control, 1e-3)};
}

// ---- 5: exact solution against the TDSE

double grid_infidelity(const ExactSolution& sol, double dx, int steps) {
    const Grid& base = sol.base_state.grid;
    Eigen::Index intervals = static_cast<Eigen::Index>(std::ceil((base.x_max - base.x_min) / dx));
    intervals += intervals % 2;
    const Grid grid{base.x_min, base.x_max, intervals + 1};

    oracle::GridHamiltonian h;
    h.grid = grid;
    h.q.resize(grid.n_points);
    std::vector<PolarField<double>> fields(static_cast<std::size_t>(grid.n_points));
    SpinorField psi0(grid, 2);
    for (Eigen::Index i = 0; i < grid.n_points; ++i) {
        const double x = grid.x(i);
        const auto d = decompose<double>(potential_matrix(sol.spec, x).V);
        h.q[i] = d.q;
        fields[static_cast<std::size_t>(i)] = d.field;
        psi0.values.row(i) = sol.phi(x).cast<std::complex<double>>().transpose();
    }
    const double omega = sol.frame.omega;
    h.spin = [&](Eigen::Index i, double t) -> Eigen::Matrix2cd {
        return h_of_t(0.0, fields[static_cast<std::size_t>(i)], omega, t).spin;
    };
    const double T = sol.frame.period();
    const SpinorField numeric =
        oracle::propagate_grid(h, psi0, 0.0, T, {steps, oracle::Scheme::implicit_midpoint});

    SpinorField exact = psi0;
    const Eigen::Vector2cd u = u_phases(sol.frame, sol.energy, T);
    exact.values.col(0) *= u[0];
    exact.values.col(1) *= u[1];
    const double overlap = std::abs(inner_product(exact, numeric));
    return 1.0 - overlap / (l2_norm(exact) * l2_norm(numeric));
}

std::vector<CheckResult> tdse_checks() {
    const auto spec = two_state_coupled();
    const RotationFrame frame{kOmega};
    const auto sol = make_exact_solution(spec, 0, frame, default_grid(spec, 0.02));
    const double T = frame.period();
    double residual = 0.0;
    for (double f : {0.0, 0.37, 0.81}) residual = std::max(residual, tdse_residual(sol, f * T));

    const double coarse = grid_infidelity(sol, 0.02, 2048);
    const double fine = grid_infidelity(sol, 0.01, 4096);
    return {at_most(5, "tdse_residual", residual, 1e-5), at_most(5, "grid_oracle_infidelity", coarse, 1e-4),
            at_least(5, "grid_refinement_gain", coarse / fine, 4.0)};
}

// ---- 6: phase identities

std::vector<CheckResult> phase_checks() {
    const RotationFrame frame{kOmega};
    double geo = 0.0, energy = 0.0, aa = 0.0, two_path = 0.0;
    struct Case {
        SpectralData<double> spec;
        Eigen::Index state;
    };
    const std::array<Case, 3> cases{Case{coupled_soliton(), 0}, Case{two_state_coupled(), 0},
                                    Case{two_state_coupled(), 1}};
    for (const auto& c : cases) {
        const Grid grid = default_grid(c.spec, 0.01);
        const auto sol = make_exact_solution(c.spec, c.state, frame, grid);
        const double sigma3 = spin_expectation(sol.base_state);
        const auto cyc = cyclic_return(sol, 2048);
        const double dyn = dynamical_phase_integral(sol, 256);
        for (Branch b : {Branch::upper, Branch::lower}) {
            const auto& tracked = cyc.total[b == Branch::upper ? 0 : 1];
            if (!tracked) continue;
            geo = std::max(geo, std::abs((*tracked - dyn) - geometric_phase_closed_form(sigma3, b)));
        }
        for (int k = 0; k <= 8; ++k) {
            const double t = frame.period() * k / 8.0;
            energy = std::max(energy, std::abs(energy_expectation(sol, t) - (sol.energy + frame.omega * sigma3)));
        }
        aa = std::max(aa, std::abs(aa_integral(sol, 2048) - pi * sigma3));
        const auto gauge = stationary_gauge_data(c.spec, grid, sol.energy);
        const SpinorField rotated = gauge_rotate(sol.base_state, gauge.rotation());
        two_path = std::max(two_path, std::abs(spin_expectation_rotated(rotated, gauge.theta) - sigma3));
    }
    return {at_most(6, "geometric_phase_identity", geo, 1e-10), at_most(6, "energy_constancy", energy, 1e-10),
            at_most(6, "aa_integral", aa, 1e-8), at_most(6, "sigma3_two_path", two_path, 1e-10)};
}

// ---- 7: cranked spin against RK4

std::vector<CheckResult> spin_oracle_checks(const VerifyOptions& opt) {
    std::mt19937_64 rng(opt.seed ^ 0x5eedULL);
    std::uniform_real_distribution<double> omega_bar(0.5, 2.0), theta_bar(0.2, pi - 0.2), omega(0.2, 1.0);
    double worst = 0.0, infidelity = 0.0;
    for (int c = 0; c < 20; ++c) {
        const double ob = omega_bar(rng), tb = theta_bar(rng), w = omega(rng);
        const auto model = make_cranked_model(Spin::half(), ob, tb, w);
        for (int m : {1, -1}) {
            const auto run = oracle::propagate_spin(
                [&](double t) -> Eigen::MatrixXcd { return build_matrices(model, t).ht; },
                rotated_eigenvector(model, m), model.period(), {opt.spin_steps, oracle::Scheme::rk4});
            const double total = -run.overlap_phase;
            const double geometric = total - run.energy_integral;
            worst = std::max(worst, std::abs(principal_value(geometric - berry_limit(tb, m))));
            infidelity = std::max(infidelity, 1.0 - run.fidelity);
        }
    }
    return {at_most(7, "spin_geometric_phase", worst, 1e-6), at_most(7, "spin_cyclic_infidelity", infidelity, 1e-8)};
}

// ---- 8: adiabatic (Berry) limit

std::vector<CheckResult> berry_checks() {
    const PolarField<double> lab{1.0, pi / 2, false};
    const std::array<double, 3> omegas{0.1, 0.01, 0.001};
    const auto rows = adiabatic_sweep(Spin::half(), 1, lab, omegas);
    return {within(8, "berry_ratio_0.1_0.01", rows[0].deviation / rows[1].deviation, 5.0, 20.0),
            within(8, "berry_ratio_0.01_0.001", rows[1].deviation / rows[2].deviation, 5.0, 20.0)};
}

// ---- 9: unitarity, orthogonality, vector potential

std::vector<CheckResult> algebra_checks(const VerifyOptions& opt) {
    std::mt19937_64 rng(opt.seed ^ 0xa1ebULL);
    std::uniform_real_distribution<double> time(0.0, 100.0), freq(0.1, 2.0), angle(-2 * pi, 2 * pi);
    std::uniform_int_distribution<int> twice_j(1, 5);
    double unitarity = 0.0, orthogonality = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Eigen::Matrix2cd S = s_of_t(RotationFrame{freq(rng)}, time(rng));
        unitarity = std::max(unitarity, (S.adjoint() * S - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff());
        const Spin s{twice_j(rng)};
        const Eigen::MatrixXd R = rotation_matrix(angle(rng), s);
        orthogonality = std::max(
            orthogonality, (R.transpose() * R - Eigen::MatrixXd::Identity(s.dim(), s.dim())).cwiseAbs().maxCoeff());
    }

    // theta_bar(x) of a coupled potential, derivative from the closed-form V and V'
    const auto spec = two_state_coupled();
    double gauge = 0.0;
    for (double x : {-2.0, -0.5, 0.3, 1.1, 2.4}) {
        const auto jet = potential_jet(spec, x);
        const double b = 0.5 * (jet.V(0, 0) - jet.V(1, 1)), c = jet.V(0, 1);
        const double db = 0.5 * (jet.dV(0, 0) - jet.dV(1, 1)), dc = jet.dV(0, 1);
        const double theta_prime = (b * dc - c * db) / (b * b + c * c);
        const double reference = std::atan2(c, b);
        auto theta = [&](double y) {
            return unwrap_near(decompose<double>(potential_matrix(spec, y).V).field.angle, reference);
        };
        for (int tj : {1, 2, 3}) {
            const Spin s{tj};
            gauge = std::max(gauge,
                             (vector_potential(theta_prime, s) - vector_potential_fd(theta, x, s)).cwiseAbs().maxCoeff());
        }
    }
    return {at_most(9, "frame_unitarity", unitarity, 1e-13), at_most(9, "rotation_orthogonality", orthogonality, 1e-13),
            at_most(9, "vector_potential_fd", gauge, 1e-8)};
}

} // namespace

CheckResult at_most(int criterion, std::string name, double value, double tolerance) {
    return {criterion, std::move(name), value, tolerance, 0.0, Relation::at_most, value <= tolerance};
}

CheckResult at_least(int criterion, std::string name, double value, double bound) {
    return {criterion, std::move(name), value, bound, 0.0, Relation::at_least, value >= bound};
}

CheckResult within(int criterion, std::string name, double value, double lower, double upper) {
    return {criterion, std::move(name), value, upper, lower, Relation::within, value >= lower && value <= upper};
}

std::vector<CheckResult> run_criterion(int criterion, const VerifyOptions& options) {
    switch (criterion) {
    case 1: return golden_soliton();
    case 2: return transparency(options);
    case 3: return eigen_residuals(options);
    case 4: return frame_checks(options);
    case 5: return tdse_checks();
    case 6: return phase_checks();
    case 7: return spin_oracle_checks(options);
    case 8: return berry_checks();
    case 9: return algebra_checks(options);
    default: throw ConfigError("no verification criterion " + std::to_string(criterion));
    }
}

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
    std::vector<CheckResult> all;
    for (int c = 1; c <= 9; ++c) {
        auto part = run_criterion(c, options);
        all.insert(all.end(), part.begin(), part.end());
    }
    return all;
}

bool all_passed(std::span<const CheckResult> checks) {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

Table verify_table(std::span<const CheckResult> checks) {
    Table t;
    t.header = {"check_name", "value", "tolerance", "pass"};
    for (const auto& c : checks) {
        std::string tol;
        switch (c.relation) {
        case Relation::at_most: tol = format_double(c.tolerance); break;
        case Relation::at_least: tol = ">=" + format_double(c.tolerance); break;
        case Relation::within: tol = format_double(c.lower) + ".." + format_double(c.tolerance); break;
        }
        t.rows.push_back({c.name, format_double(c.value), tol, c.pass ? "true" : "false"});
    }
    return t;
}

SpectralData<double> one_soliton() {
    return make_spectral<double>(1, {degenerate_state<double>(1.0, Eigen::VectorXd::Constant(1, std::sqrt(2.0)))});
}

SpectralData<double> coupled_soliton() {
    return make_spectral<double>(2, {degenerate_state<double>(1.0, Eigen::VectorXd{{1.0, 1.0}})});
}

SpectralData<double> two_state_coupled() {
    return make_spectral<double>(2, {degenerate_state<double>(1.0, Eigen::VectorXd{{1.0, 0.4}}),
                                     degenerate_state<double>(0.6, Eigen::VectorXd{{0.3, 0.9}})});
}

SpectralData<double> random_spectral(std::mt19937_64& rng, int max_states) {
    std::uniform_int_distribution<int> count(1, std::max(1, max_states));
    std::uniform_real_distribution<double> kappa(0.6, 2.0), magnitude(0.3, 1.5);
    std::bernoulli_distribution negative(0.5);
    const int n = count(rng);
    std::vector<double> kappas;
    while (static_cast<int>(kappas.size()) < n) {
        const double k = kappa(rng);
        bool distinct = true;
        for (double other : kappas) distinct = distinct && std::abs(k - other) > 0.1;
        if (distinct) kappas.push_back(k);
    }
    std::vector<BoundState<double>> states;
    for (double k : kappas) {
        Eigen::VectorXd g(2);
        for (Eigen::Index a = 0; a < 2; ++a) g[a] = (negative(rng) ? -1.0 : 1.0) * magnitude(rng);
        states.push_back(degenerate_state(k, g));
    }
    return make_spectral<double>(2, std::move(states));
}

} // namespace rotframe
