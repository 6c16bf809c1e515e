#pragma once

// Total, dynamical, geometric and Aharonov-Anandan phases of the exact cyclic
// solutions. Sign convention: Psi(T) = e^{-i delta} Psi(0).

#include "rotframe/evolution.hpp"
#include "rotframe/grid.hpp"

#include <Eigen/Dense>

namespace rotframe {

/// Which of the two frame phases e^{-+i omega t} the phase bookkeeping follows.
enum class Branch { upper = 1, lower = 2 };

inline double branch_sign(Branch b) { return b == Branch::upper ? 1.0 : -1.0; }

/// Angle reduced to (-pi, pi].
double principal_value(double angle);

struct PhaseReport {
    Eigen::Index state = 0;
    Branch branch = Branch::upper;
    double spin_expectation = 0.0; // sigma_3 alignment, in [-1, 1]

    // winding-preserving
    double total = 0.0;
    double dynamical = 0.0;
    double geometric = 0.0;   // total - dynamical
    double aa_integral = 0.0; // i int <Psi'|d/dt Psi'> dt, closed form pi * sigma_3

    // reduced to (-pi, pi]
    double total_mod = 0.0;
    double dynamical_mod = 0.0;
    double geometric_mod = 0.0;
    double aa_mod = 0.0;

    /// principal(geometric - aa_integral): the two geometric-phase expressions differ in general.
    double aa_gap = 0.0;
};

/// int (|Phi_1|^2 - |Phi_2|^2) dx. Throws NormalizationError unless ||state|| = 1 +- 1e-6.
double spin_expectation(const SpinorField& state);

/// int <Phi'| -sin(theta) sigma_1 + cos(theta) sigma_3 |Phi'> dx for Phi' = gauge_rotate(Phi).
double spin_expectation_rotated(const SpinorField& state_prime, const Eigen::VectorXd& theta);

/// delta = +-pi + E T, upper sign for the upper branch.
double total_phase(double energy, const RotationFrame& frame, Branch branch);

/// delta_d = E T + pi sigma_3 (T omega = pi).
double dynamical_phase(double energy, double sigma3, const RotationFrame& frame);

/// int_0^T <Psi(t)|H(t)|Psi(t)> dt by composite Simpson in time.
double dynamical_phase_integral(const ExactSolution& sol, int steps_per_period = 2048);

inline double geometric_phase(double total, double dynamical) { return total - dynamical; }

/// pi (+-1 - sigma_3).
double geometric_phase_closed_form(double sigma3, Branch branch);

/// i int_0^T <Psi'(t)| d/dt Psi'(t)> dt with Psi'(t) = S(t) Phi; d/dt by five-point
/// stencil, composite Simpson in time.
double aa_integral(const ExactSolution& sol, int steps_per_period = 2048);

/// Full pipeline for one state and branch.
PhaseReport phase_report(const ExactSolution& sol, Branch branch, int steps_per_period = 2048);

} // namespace rotframe
