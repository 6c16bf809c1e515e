#pragma once

// Plot-ready CSV tables with fixed headers. Floats are written with 17
// significant digits and rows come out in a fixed order, so identical inputs
// give byte-identical files.

#include "rotframe/bargmann.hpp"
#include "rotframe/grid.hpp"
#include "rotframe/phases.hpp"
#include "rotframe/spin_model.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace rotframe {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// "%.17g"; nan and inf are spelled nan, inf, -inf.
std::string format_double(double v);

std::string to_csv(const Table& table);

/// Writes dir/name, creating dir if needed. Throws OutputError on failure.
std::filesystem::path write_table(const std::filesystem::path& dir, const std::string& name, const Table& table);

/// x, q, V11, V12, V22
Table potential_table(const SpectralData<double>& spec, const Grid& grid);

/// x, omega_bar, theta_bar, omega_dressed, theta_dressed (angles unwrapped along x)
Table field_table(const SpectralData<double>& spec, const Grid& grid, double omega);

/// t, x, B1, B2, B3 at n_times instants over one period and at most max_x positions.
Table bfield_table(const SpectralData<double>& spec, const Grid& grid, double omega, int n_times = 9,
                   Eigen::Index max_x = 201);

/// state, branch, total, dynamical, geometric, aa, sigma3
Table phases_table(std::span<const PhaseReport> reports);

/// omega_ratio, geometric, berry, deviation
Table sweep_table(std::span<const SweepRow> rows);

} // namespace rotframe
