#pragma once

#include "rotframe/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>

namespace rotframe {

/// Uniform spatial grid, endpoints included.
struct Grid {
    double x_min = -10.0;
    double x_max = 10.0;
    Eigen::Index n_points = 2001;

    double step() const { return (x_max - x_min) / static_cast<double>(n_points - 1); }
    double x(Eigen::Index i) const { return x_min + step() * static_cast<double>(i); }

    Eigen::VectorXd points() const { return Eigen::VectorXd::LinSpaced(n_points, x_min, x_max); }

    bool operator==(const Grid&) const = default;
};

/// Multi-component complex field sampled on a grid; row i is the spinor at grid.x(i).
struct SpinorField {
    Grid grid;
    Eigen::MatrixXcd values;

    SpinorField() = default;
    SpinorField(const Grid& g, Eigen::Index components)
        : grid(g), values(Eigen::MatrixXcd::Zero(g.n_points, components)) {}
    SpinorField(const Grid& g, Eigen::MatrixXcd v) : grid(g), values(std::move(v)) {}

    Eigen::Index components() const { return values.cols(); }
    Eigen::Index size() const { return values.rows(); }
};

inline void require_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) {
        throw GridMismatchError("grid mismatch between spinor fields");
    }
}

} // namespace rotframe
