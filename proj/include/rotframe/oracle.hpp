#pragma once

// Brute-force numerical references. Nothing here knows about the closed
// forms: Hamiltonians and potentials come in as samplers or tables.

#include "rotframe/grid.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <vector>

namespace rotframe::oracle {

enum class Scheme { rk4, implicit_midpoint };

struct PropagationConfig {
    int t_steps = 4096; // steps over the propagated interval, >= 128
    Scheme scheme = Scheme::rk4;
};

struct SpinPropagation {
    Eigen::VectorXcd psi_T;
    /// arg <psi0|psi(T)>, principal value.
    double overlap_phase = 0.0;
    /// arg <psi0|psi(t)> accumulated continuously; empty when the overlap
    /// passes too close to zero for the winding to be defined.
    std::optional<double> tracked_phase;
    double min_overlap = 1.0;
    /// int_0^T <psi|H|psi> dt, composite Simpson on the RK4 samples.
    double energy_integral = 0.0;
    double norm_drift = 0.0;
    /// |<psi0|psi(T)>| / ||psi0||^2
    double fidelity = 0.0;
};

/// Classical RK4 for i dpsi/dt = H(t) psi over [0, T]. Throws ResolutionError if the
/// norm drifts by more than 1e-6 or a tracked phase increment reaches pi/4.
SpinPropagation propagate_spin(const std::function<Eigen::MatrixXcd(double)>& hamiltonian,
                               const Eigen::VectorXcd& psi0, double T, const PropagationConfig& cfg = {});

/// Two-channel lab Hamiltonian on a grid: -d^2/dx^2 + q(x) + spin(i, t).
struct GridHamiltonian {
    Grid grid;
    Eigen::VectorXd q;
    std::function<Eigen::Matrix2cd(Eigen::Index, double)> spin;
};

/// Implicit-midpoint (Crank-Nicolson) stepping of the two-channel TDSE with a
/// three-point Laplacian and zero Dirichlet ghosts, from t0 to t0 + duration.
/// Throws BoundaryLeakError if the edge amplitude exceeds 1e-6.
SpinorField propagate_grid(const GridHamiltonian& h, const SpinorField& psi0, double t0, double duration,
                           const PropagationConfig& cfg = {2048, Scheme::implicit_midpoint});

/// Potential samples on a uniform grid with spacing h.
struct PotentialTable {
    double x_min = 0.0;
    double h = 1e-3;
    std::vector<Eigen::MatrixXd> values;

    double x_max() const { return x_min + h * static_cast<double>(values.size() - 1); }
};

/// Samples V on [x_min, x_max]; n_samples must be odd so RK4 midpoints land on samples.
PotentialTable tabulate(const std::function<Eigen::MatrixXd(double)>& V, double x_min, double x_max,
                        Eigen::Index n_samples);

/// Reflection amplitudes for a plane wave e^{-ikx} incident from the right in
/// `incident_channel`: the right-side solution is e^{-ikx} e_c + r e^{ikx}.
/// Integrates -psi'' + V psi = k^2 psi from a purely transmitted left solution with RK4.
/// Throws TruncationError if |V| > 1e-12 at either end of the table.
Eigen::VectorXcd reflection_amplitudes(const PotentialTable& V, double k, Eigen::Index incident_channel);

/// All incident channels at once: column c is reflection_amplitudes(V, k, c).
Eigen::MatrixXcd reflection_matrix(const PotentialTable& V, double k);

} // namespace rotframe::oracle
