#pragma once

// The invariant suite behind the `verify` subcommand: closed forms against
// the brute-force oracles and against each other, grouped by criterion 1-9.

#include "rotframe/bargmann.hpp"
#include "rotframe/tables.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace rotframe {

enum class Relation { at_most, at_least, within };

struct CheckResult {
    int criterion = 0;
    std::string name;
    double value = 0.0;
    double tolerance = 0.0; // upper bound (at_most, within) or lower bound (at_least)
    double lower = 0.0;     // lower bound for `within`
    Relation relation = Relation::at_most;
    bool pass = false;
};

CheckResult at_most(int criterion, std::string name, double value, double tolerance);
CheckResult at_least(int criterion, std::string name, double value, double bound);
CheckResult within(int criterion, std::string name, double value, double lower, double upper);

struct VerifyOptions {
    std::uint64_t seed = 20250101;
    int spin_steps = 4096; // RK4 steps per period for the spin-model oracle
    /// Adds 0.1 sin(t) sigma_1 to the lab Hamiltonian fed to the frame-stationarity check.
    bool perturb = false;
};

/// Criteria 1-9 in order.
std::vector<CheckResult> run_verification(const VerifyOptions& options = {});

/// One criterion (1-9). Throws ConfigError for other numbers.
std::vector<CheckResult> run_criterion(int criterion, const VerifyOptions& options = {});

bool all_passed(std::span<const CheckResult> checks);

/// check_name, value, tolerance, pass
Table verify_table(std::span<const CheckResult> checks);

/// kappa = 1, gamma = sqrt(2): V = -2 sech^2 x, Phi = sech(x)/sqrt(2). One channel.
SpectralData<double> one_soliton();

/// kappa = 1, gamma = (1, 1): equal entries in all of V, so theta_bar is constant and sigma_3 = 0.
SpectralData<double> coupled_soliton();

/// Two states with different channel mixing; theta_bar varies along x.
SpectralData<double> two_state_coupled();

/// Degenerate-threshold two-channel data with 1-3 states, distinct kappa in [0.6, 2]
/// and gamma entries of magnitude [0.3, 1.5] with random signs.
SpectralData<double> random_spectral(std::mt19937_64& rng, int max_states = 3);

} // namespace rotframe
