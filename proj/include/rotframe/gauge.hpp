#pragma once

// Position-dependent SU(2) rotation exp(-i theta(x) j_2) that aligns the
// effective field with the z axis, the induced vector potential
// A = exp(i theta j_2) d/dx exp(-i theta j_2) = -i theta' j_2, and the
// gauge-type stationary equation [-(d/dx + A)^2 + q + Omega sigma_3 - E] Phi' = 0.
//
// Convention: j_2 is the standard angular-momentum component, so for j = 1/2
//   exp(-i theta j_2) = [[cos(theta/2), -sin(theta/2)], [sin(theta/2), cos(theta/2)]]
// and B.sigma = Omega exp(-i theta j_2) sigma_3 exp(+i theta j_2). States are
// mapped by Phi' = exp(+i theta j_2) Phi (the transpose), which diagonalizes the
// field term and gives the spin alignment as <Phi'| -sin(theta) sigma_1 + cos(theta) sigma_3 |Phi'>.

#include "rotframe/bargmann.hpp"
#include "rotframe/field_map.hpp"
#include "rotframe/grid.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace rotframe {

/// Spin quantum number stored as 2j so half-integers are exact.
struct Spin {
    int twice_j = 1;

    static Spin half() { return Spin{1}; }
    /// Throws ConfigError unless j is a positive multiple of 1/2.
    static Spin from_double(double j);

    double j() const { return 0.5 * twice_j; }
    Eigen::Index dim() const { return twice_j + 1; }

    bool operator==(const Spin&) const = default;
};

/// Standard angular-momentum matrices, basis ordered m = j, j-1, ..., -j.
Eigen::MatrixXcd jx_matrix(Spin s);
Eigen::MatrixXcd jy_matrix(Spin s);
Eigen::MatrixXcd jz_matrix(Spin s);

/// exp(-i theta j_2): closed form for j = 1/2, dense matrix exponential otherwise. Real orthogonal.
Eigen::MatrixXd rotation_matrix(double theta, Spin s = Spin::half());

/// || B.sigma - Omega exp(-i theta j_2) sigma_3 exp(i theta j_2) ||_max.
double conjugation_identity_check(const PolarField<double>& field);

/// A = -i theta' j_2, real antisymmetric.
Eigen::MatrixXd vector_potential(double theta_prime, Spin s = Spin::half());

/// R(theta(x))^T dR(theta(x))/dx with the derivative by five-point stencil.
Eigen::MatrixXd vector_potential_fd(const std::function<double(double)>& theta, double x, Spin s = Spin::half(),
                                    double h = 1e-3);

struct GaugeRotation {
    Eigen::VectorXd theta; // one unwrapped angle per grid point
    Spin spin = Spin::half();

    GaugeRotation inverse() const { return {-theta, spin}; }
};

/// Phi'(x) = exp(+i theta(x) j_2) Phi(x) pointwise. Norm preserving.
SpinorField gauge_rotate(const SpinorField& state, const GaugeRotation& rot);

/// Data of the gauge-type equation on a grid: q, the aligned field magnitude,
/// the rotation angle and its first two derivatives, and the energy E (P^2 = E I).
struct GaugeEquationData {
    Grid grid;
    Eigen::VectorXd q;
    Eigen::VectorXd magnitude;
    Eigen::VectorXd theta;
    Eigen::VectorXd theta_prime;
    Eigen::VectorXd theta_second;
    std::vector<bool> degenerate;
    double energy = 0.0;

    GaugeRotation rotation() const { return {theta, Spin::half()}; }
};

/// Stationary field (Omega_bar, theta_bar) of a two-channel Bargmann potential.
/// theta' follows from the closed-form V and V'; theta'' is a five-point stencil of theta'.
GaugeEquationData stationary_gauge_data(const SpectralData<double>& spec, const Grid& grid, double energy);

/// Dressed field (Omega, theta) of H_0 = H_bar + omega sigma_3 for the same potential.
GaugeEquationData dressed_gauge_data(const SpectralData<double>& spec, const Grid& grid, double omega);

/// [-(d/dx + A)^2 + q + Omega sigma_3] Phi' with five-point grid stencils.
/// The two samples at each end are left zero.
SpinorField apply_gauge_operator(const SpinorField& state_prime, const GaugeEquationData& data);

/// Relative residual of the gauge-type equation, ||(gauge operator - E) Phi'|| / ||Phi'||.
double gauge_residual(const SpinorField& state_prime, const GaugeEquationData& data);

/// ||-Phi'' + V Phi - E Phi|| / ||Phi|| with five-point grid stencils, for comparison at equal resolution.
double stationary_residual_on_grid(const SpinorField& state, const std::vector<Eigen::Matrix2d>& potential,
                                   double energy);

} // namespace rotframe
