#include "rotframe/phases.hpp"

#include "rotframe/quadrature.hpp"
#include "rotframe/stencil.hpp"

#include <cmath>
#include <numbers>

namespace rotframe {

namespace {

constexpr double pi = std::numbers::pi;
constexpr std::complex<double> I(0.0, 1.0);

void require_normalized(const SpinorField& state) {
    const double norm = l2_norm(state);
    if (std::abs(norm - 1.0) > kNormalizationTolerance) {
        throw NormalizationError("state norm " + std::to_string(norm) + " differs from 1 by more than 1e-6");
    }
}

} // namespace

double principal_value(double angle) {
    double r = std::remainder(angle, 2.0 * pi);
    if (r <= -pi) r += 2.0 * pi;
    return r;
}

double spin_expectation(const SpinorField& state) {
    require_normalized(state);
    const Eigen::VectorXd diff = state.values.col(0).cwiseAbs2() - state.values.col(1).cwiseAbs2();
    return simpson(diff, state.grid.step());
}

double spin_expectation_rotated(const SpinorField& state_prime, const Eigen::VectorXd& theta) {
    require_normalized(state_prime);
    if (theta.size() != state_prime.size()) {
        throw GridMismatchError("spin_expectation_rotated: angle profile does not match the grid");
    }
    Eigen::VectorXd integrand(state_prime.size());
    for (Eigen::Index i = 0; i < state_prime.size(); ++i) {
        const std::complex<double> a = state_prime.values(i, 0);
        const std::complex<double> b = state_prime.values(i, 1);
        const double s1 = 2.0 * std::real(std::conj(a) * b);
        const double s3 = std::norm(a) - std::norm(b);
        integrand[i] = -std::sin(theta[i]) * s1 + std::cos(theta[i]) * s3;
    }
    return simpson(integrand, state_prime.grid.step());
}

double total_phase(double energy, const RotationFrame& frame, Branch branch) {
    return branch_sign(branch) * pi + energy * frame.period();
}

double dynamical_phase(double energy, double sigma3, const RotationFrame& frame) {
    return energy * frame.period() + frame.omega * frame.period() * sigma3;
}

double dynamical_phase_integral(const ExactSolution& sol, int steps_per_period) {
    const double T = sol.frame.period();
    const int n = steps_per_period + (steps_per_period % 2);
    Eigen::VectorXd samples(n + 1);
    for (int k = 0; k <= n; ++k) samples[k] = energy_expectation(sol, T * k / n);
    return simpson(samples, T / n);
}

double geometric_phase_closed_form(double sigma3, Branch branch) {
    return pi * (branch_sign(branch) - sigma3);
}

double aa_integral(const ExactSolution& sol, int steps_per_period) {
    const SpinorField& phi = sol.base_state;
    const Eigen::VectorXd w = simpson_weights(phi.size(), phi.grid.step());
    // Gram matrix int Phi Phi^dagger dx, so <S(t)Phi|X|S(t)Phi> = tr(S^dagger X S G)
    const Eigen::Matrix2cd gram = phi.values.transpose() * w.cast<std::complex<double>>().asDiagonal() *
                                  phi.values.conjugate();
    const double norm2 = std::real(gram.trace());

    const double T = sol.frame.period();
    const int n = steps_per_period + (steps_per_period % 2);
    const double dt = T / n;
    Eigen::VectorXd integrand(n + 1);
    for (int k = 0; k <= n; ++k) {
        const double t = dt * k;
        const Eigen::Matrix2cd dS =
            stencil::first([&](double tt) -> Eigen::Matrix2cd { return s_of_t(sol.frame, tt); }, t, dt);
        const Eigen::Matrix2cd S = s_of_t(sol.frame, t);
        const std::complex<double> value = I * (S.adjoint() * dS * gram).trace() / norm2;
        integrand[k] = std::real(value);
    }
    return simpson(integrand, dt);
}

PhaseReport phase_report(const ExactSolution& sol, Branch branch, int steps_per_period) {
    PhaseReport r;
    r.state = sol.state;
    r.branch = branch;
    r.spin_expectation = spin_expectation(sol.base_state);
    r.total = total_phase(sol.energy, sol.frame, branch);
    r.dynamical = dynamical_phase(sol.energy, r.spin_expectation, sol.frame);
    r.geometric = geometric_phase(r.total, r.dynamical);
    r.aa_integral = aa_integral(sol, steps_per_period);
    r.total_mod = principal_value(r.total);
    r.dynamical_mod = principal_value(r.dynamical);
    r.geometric_mod = principal_value(r.geometric);
    r.aa_mod = principal_value(r.aa_integral);
    r.aa_gap = principal_value(r.geometric - r.aa_integral);
    return r;
}

} // namespace rotframe
