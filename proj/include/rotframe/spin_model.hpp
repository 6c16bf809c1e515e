#pragma once

// x-independent cranked spin in a rotating field:
//   H_bar = Omega_bar exp(-i theta_bar j_2) Sigma_3 exp(i theta_bar j_2)   (Routhian)
//   H_0   = H_bar + omega Sigma_3
//   H(t)  = S(t) H_0 S^dagger(t),  S(t) = exp(-i Sigma_3 omega t)
// with Sigma_3 = 2 j_z, the spin-j analog of sigma_3 (Pauli sigma_3 for j = 1/2).
// States are labelled by the Sigma_3 eigenvalue m in {2j, 2j-2, ..., -2j},
// so m = +-1 for spin 1/2.

#include "rotframe/field_map.hpp"
#include "rotframe/gauge.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace rotframe {

struct CrankedModel {
    Spin spin = Spin::half();
    double omega_bar = 1.0; // Omega_bar > 0
    double theta_bar = 0.0; // [0, pi]
    double omega = 0.0;     // cranking frequency >= 0

    PolarField<double> stationary_field() const { return {omega_bar, theta_bar, false}; }
    /// Lab field (Omega, theta) of H_0.
    PolarField<double> dressed_field() const { return dress(stationary_field(), omega); }
    double period() const;
};

/// Validates the ranges above; throws ConfigError.
CrankedModel make_cranked_model(Spin spin, double omega_bar, double theta_bar, double omega);

Eigen::MatrixXcd sigma3_analog(Spin s);

/// Valid state labels (Sigma_3 eigenvalues), descending.
std::vector<int> state_labels(Spin s);

struct SpinMatrices {
    Eigen::MatrixXcd h0;
    Eigen::MatrixXcd hbar;
    Eigen::MatrixXcd ht;
};

SpinMatrices build_matrices(const CrankedModel& model, double t);

/// S(t) = exp(-i Sigma_3 omega t).
Eigen::MatrixXcd frame_rotation(const CrankedModel& model, double t);

/// exp(-i theta_bar j_2)|m>, the H_bar eigenvector carrying label m.
Eigen::VectorXcd rotated_eigenvector(const CrankedModel& model, int m);

/// m cos(theta_bar).
double spin_alignment(const CrankedModel& model, int m);

/// <m| exp(i theta_bar j_2) Sigma_3 exp(-i theta_bar j_2) |m> by explicit matrices.
double spin_alignment_matrix(const CrankedModel& model, int m);

struct SpinPhaseReport {
    int m = 1;
    double energy = 0.0;    // H_bar eigenvalue matched to label m
    double alignment = 0.0; // m cos(theta_bar)
    double total = 0.0;     // dynamical + geometric = E T + m pi
    double dynamical = 0.0; // E T + m pi cos(theta_bar)
    double geometric = 0.0; // m pi (1 - cos(theta_bar))
    double total_mod = 0.0;
    double geometric_mod = 0.0;
};

/// Requires omega > 0. The energy is taken from a dense eigendecomposition of
/// H_bar, matched to m by maximal overlap with rotated_eigenvector(m).
SpinPhaseReport spin_phases(const CrankedModel& model, int m);

/// m pi (1 - cos(theta)).
double berry_limit(double theta, double m);

struct SweepRow {
    double omega = 0.0;
    double omega_ratio = 0.0; // omega / Omega of the fixed lab field
    double geometric = 0.0;
    double berry = 0.0;
    double deviation = 0.0;
    bool flagged = false; // undressing degenerate (Omega_bar ~ 0)
};

/// Keep the lab field (Omega, theta) of H_0 fixed, undress it for each omega and
/// compare the nonadiabatic geometric phase with Berry's value at theta.
/// `omegas` must be non-negative and strictly decreasing.
std::vector<SweepRow> adiabatic_sweep(Spin spin, int m, const PolarField<double>& lab_field,
                                      std::span<const double> omegas);

} // namespace rotframe
