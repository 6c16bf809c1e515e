#pragma once

// Rotating-frame construction of exactly solvable time-dependent problems:
// S(t) = exp(-i sigma_3 omega t), U(t) = S(t) exp(-i H_bar t), the exact
// states Psi(t) = S(t) e^{-i E t} Phi and the frame-stationarity check.

#include "rotframe/bargmann.hpp"
#include "rotframe/field_map.hpp"
#include "rotframe/grid.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace rotframe {

struct RotationFrame {
    double omega = 1.0;

    /// T = pi / omega: one full turn of the field, which precesses at 2 omega.
    double period() const { return std::numbers::pi / omega; }
};

Eigen::Matrix2cd s_of_t(const RotationFrame& frame, double t);

/// dS/dt = -i omega sigma_3 S(t), analytic.
Eigen::Matrix2cd s_dot(const RotationFrame& frame, double t);

/// Diagonal of U(t) acting on an H_bar eigenstate of energy E: e^{(-+i omega - i E) t}.
Eigen::Vector2cd u_phases(const RotationFrame& frame, double energy, double t);

/// An H_bar eigenstate on a grid together with what is needed to evaluate
/// its exact time evolution and Hamiltonian action.
struct ExactSolution {
    SpectralData<double> spec;
    Eigen::Index state = 0;
    double energy = 0.0;
    RotationFrame frame;
    SpinorField base_state;        // Phi(x), normalized
    SpinorField base_derivative;   // dPhi/dx, five-point stencil at h = 1e-3
    std::vector<Eigen::Matrix2d> potential; // V(x) on the grid
    double scale = 1.0;            // 1 / quadrature norm when renormalized, else 1
    bool renormalized = false;

    /// Phi at an arbitrary x, with the same normalization as base_state.
    Eigen::Vector2d phi(double x) const;
};

/// Two-channel only.
ExactSolution make_exact_solution(const SpectralData<double>& spec, Eigen::Index state, const RotationFrame& frame,
                                  const Grid& grid);

/// Psi_a(t, x) = e^{-+i omega t} e^{-i E t} Phi_a(x), upper sign for the first component.
SpinorField exact_psi(const ExactSolution& sol, double t);

/// Lab-frame matrix part q + B(t, x).sigma at grid index i.
Eigen::Matrix2cd lab_hamiltonian_matrix(const ExactSolution& sol, Eigen::Index i, double t);

struct CyclicReturn {
    /// delta_a with Psi_a(T) = e^{-i delta_a} Psi_a(0), tracked continuously in t.
    /// Empty for a component that carries no weight.
    std::array<std::optional<double>, 2> total;
    double fidelity = 0.0; // |<Psi(0)|Psi(T)>| / ||Psi(0)||^2
};

/// Throws NonCyclicEvolutionError if the fidelity falls below 1 - 1e-8.
CyclicReturn cyclic_return(const ExactSolution& sol, int steps_per_period = 2048);

/// max_t || S^dagger H(t) S - i S^dagger dS/dt - H_bar(0) ||_max over `times`,
/// with H_bar(0) computed the same way at t = 0.
double frame_stationarity_check(const std::function<Eigen::Matrix2cd(double)>& h_of_t, const RotationFrame& frame,
                                std::span<const double> times);

/// Relative residual ||i dPsi/dt - H(t) Psi|| / ||Psi|| on the solution grid.
/// d/dt by five-point stencil at dt, -d^2/dx^2 by five-point stencil at dx.
double tdse_residual(const ExactSolution& sol, double t, double dt = 1e-4, double dx = 1e-3);

/// <Psi(t)|H(t)|Psi(t)> / <Psi|Psi>, kinetic part as int |dPsi/dx|^2.
double energy_expectation(const ExactSolution& sol, double t);

/// Stationary residual ||-Phi'' + V Phi - E Phi|| / ||Phi|| over the solution grid (five-point, dx).
double eigen_residual(const ExactSolution& sol, double dx = 1e-3);

/// Same residual for any state of any spectral data, sampled on `grid`.
double eigen_residual(const SpectralData<double>& spec, Eigen::Index state, const Grid& grid, double dx = 1e-3);

} // namespace rotframe
