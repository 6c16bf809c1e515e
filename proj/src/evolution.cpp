#include "rotframe/evolution.hpp"

#include "rotframe/quadrature.hpp"
#include "rotframe/stencil.hpp"

#include <cmath>
#include <complex>

namespace rotframe {

namespace {

constexpr std::complex<double> I(0.0, 1.0);

} // namespace

Eigen::Matrix2cd s_of_t(const RotationFrame& frame, double t) {
    return rotation_frame_matrix(frame.omega, t);
}

Eigen::Matrix2cd s_dot(const RotationFrame& frame, double t) {
    return -I * frame.omega * pauli::sigma3<double>() * s_of_t(frame, t);
}

Eigen::Vector2cd u_phases(const RotationFrame& frame, double energy, double t) {
    return {std::polar(1.0, (-frame.omega - energy) * t), std::polar(1.0, (frame.omega - energy) * t)};
}

Eigen::Vector2d ExactSolution::phi(double x) const {
    return scale * bound_state_at(spec, state, x);
}

ExactSolution make_exact_solution(const SpectralData<double>& spec, Eigen::Index state, const RotationFrame& frame,
                                  const Grid& grid) {
    if (spec.n_channels != 2) {
        throw ConfigError("exact solutions are built for the two-channel problem only");
    }
    require_valid(spec);
    ExactSolution sol;
    sol.spec = spec;
    sol.state = state;
    sol.frame = frame;

    auto sample = bound_state(spec, state, grid);
    sol.energy = spec.states[static_cast<std::size_t>(state)].energy;
    sol.base_state = std::move(sample.state);
    sol.renormalized = sample.renormalized;
    sol.scale = sample.renormalized ? 1.0 / sample.quadrature_norm : 1.0;

    sol.base_derivative = SpinorField(grid, 2);
    sol.potential.resize(static_cast<std::size_t>(grid.n_points));
    for (Eigen::Index i = 0; i < grid.n_points; ++i) {
        const double x = grid.x(i);
        const Eigen::Vector2d d = stencil::first([&](double y) -> Eigen::Vector2d { return sol.phi(y); }, x);
        sol.base_derivative.values.row(i) = d.cast<std::complex<double>>().transpose();
        sol.potential[static_cast<std::size_t>(i)] = potential_matrix(spec, x).V;
    }
    return sol;
}

SpinorField exact_psi(const ExactSolution& sol, double t) {
    const Eigen::Vector2cd u = u_phases(sol.frame, sol.energy, t);
    SpinorField psi = sol.base_state;
    psi.values.col(0) *= u[0];
    psi.values.col(1) *= u[1];
    return psi;
}

Eigen::Matrix2cd lab_hamiltonian_matrix(const ExactSolution& sol, Eigen::Index i, double t) {
    const auto d = decompose<double>(sol.potential[static_cast<std::size_t>(i)]);
    return h_of_t(d.q, d.field, sol.frame.omega, t).matrix();
}

CyclicReturn cyclic_return(const ExactSolution& sol, int steps_per_period) {
    const double T = sol.frame.period();
    const double h = sol.base_state.grid.step();
    const Eigen::VectorXd weights = simpson_weights(sol.base_state.size(), h);

    auto overlaps = [&](const SpinorField& psi) {
        Eigen::Vector2cd z;
        for (int a = 0; a < 2; ++a) {
            z[a] = weights.cast<std::complex<double>>().dot(
                sol.base_state.values.col(a).conjugate().cwiseProduct(psi.values.col(a)));
        }
        return z;
    };

    const Eigen::Vector2cd z0 = overlaps(sol.base_state);
    Eigen::Vector2cd previous = z0;
    Eigen::Vector2d accumulated = Eigen::Vector2d::Zero();
    for (int n = 1; n <= steps_per_period; ++n) {
        const Eigen::Vector2cd z = overlaps(exact_psi(sol, T * n / steps_per_period));
        for (int a = 0; a < 2; ++a) {
            if (std::abs(z0[a]) > 1e-12) accumulated[a] += std::arg(z[a] / previous[a]);
        }
        previous = z;
    }

    CyclicReturn out;
    for (int a = 0; a < 2; ++a) {
        if (std::abs(z0[a]) > 1e-12) out.total[static_cast<std::size_t>(a)] = -accumulated[a];
    }
    const SpinorField psi_T = exact_psi(sol, T);
    const double norm2 = std::real(inner_product(sol.base_state, sol.base_state));
    out.fidelity = std::abs(inner_product(sol.base_state, psi_T)) / norm2;
    if (out.fidelity < 1.0 - 1e-8) {
        throw NonCyclicEvolutionError("cyclic_return: fidelity " + std::to_string(out.fidelity) + " after one period");
    }
    return out;
}

double frame_stationarity_check(const std::function<Eigen::Matrix2cd(double)>& h_of_t, const RotationFrame& frame,
                                std::span<const double> times) {
    auto frame_hamiltonian = [&](double t) -> Eigen::Matrix2cd {
        const Eigen::Matrix2cd S = s_of_t(frame, t);
        return S.adjoint() * h_of_t(t) * S - I * S.adjoint() * s_dot(frame, t);
    };
    const Eigen::Matrix2cd reference = frame_hamiltonian(0.0);
    double worst = 0.0;
    for (double t : times) {
        worst = std::max(worst, (frame_hamiltonian(t) - reference).cwiseAbs().maxCoeff());
    }
    return worst;
}

double tdse_residual(const ExactSolution& sol, double t, double dt, double dx) {
    const Grid& grid = sol.base_state.grid;
    auto psi_at = [&](double tt, double x) -> Eigen::Vector2cd {
        const Eigen::Vector2cd u = u_phases(sol.frame, sol.energy, tt);
        const Eigen::Vector2d p = sol.phi(x);
        return {u[0] * p[0], u[1] * p[1]};
    };
    Eigen::VectorXd residual2(grid.n_points);
    Eigen::VectorXd norm2(grid.n_points);
    for (Eigen::Index i = 0; i < grid.n_points; ++i) {
        const double x = grid.x(i);
        const Eigen::Vector2cd psi = psi_at(t, x);
        const Eigen::Vector2cd dpsi_dt = stencil::first([&](double tt) -> Eigen::Vector2cd { return psi_at(tt, x); }, t, dt);
        const Eigen::Vector2cd d2psi = stencil::second([&](double y) -> Eigen::Vector2cd { return psi_at(t, y); }, x, dx);
        const Eigen::Vector2cd h_psi = -d2psi + lab_hamiltonian_matrix(sol, i, t) * psi;
        residual2[i] = (I * dpsi_dt - h_psi).squaredNorm();
        norm2[i] = psi.squaredNorm();
    }
    const double h = grid.step();
    return std::sqrt(simpson(residual2, h) / simpson(norm2, h));
}

double energy_expectation(const ExactSolution& sol, double t) {
    const SpinorField psi = exact_psi(sol, t);
    const Eigen::Vector2cd u = u_phases(sol.frame, sol.energy, t);
    const Grid& grid = psi.grid;
    Eigen::VectorXd integrand(grid.n_points);
    for (Eigen::Index i = 0; i < grid.n_points; ++i) {
        const Eigen::Vector2cd p = psi.values.row(i).transpose();
        Eigen::Vector2cd dp = sol.base_derivative.values.row(i).transpose();
        dp[0] *= u[0];
        dp[1] *= u[1];
        integrand[i] = dp.squaredNorm() + std::real(p.dot(lab_hamiltonian_matrix(sol, i, t) * p));
    }
    const double h = grid.step();
    return simpson(integrand, h) / simpson(density(psi), h);
}

double eigen_residual(const SpectralData<double>& spec, Eigen::Index state, const Grid& grid, double dx) {
    const double energy = spec.states[static_cast<std::size_t>(state)].energy;
    Eigen::VectorXd residual2(grid.n_points);
    Eigen::VectorXd norm2(grid.n_points);
    for (Eigen::Index i = 0; i < grid.n_points; ++i) {
        const double x = grid.x(i);
        const Eigen::VectorXd phi = bound_state_at(spec, state, x);
        const Eigen::VectorXd d2 =
            stencil::second([&](double y) -> Eigen::VectorXd { return bound_state_at(spec, state, y); }, x, dx);
        residual2[i] = (-d2 + potential_matrix(spec, x).V * phi - energy * phi).squaredNorm();
        norm2[i] = phi.squaredNorm();
    }
    const double h = grid.step();
    return std::sqrt(simpson(residual2, h) / simpson(norm2, h));
}

double eigen_residual(const ExactSolution& sol, double dx) {
    return eigen_residual(sol.spec, sol.state, sol.base_state.grid, dx);
}

} // namespace rotframe
