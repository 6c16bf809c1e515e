#pragma once

#include "rotframe/errors.hpp"
#include "rotframe/grid.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace rotframe {

/// Composite Simpson weights for n equally spaced samples (n odd, n >= 3).
inline Eigen::VectorXd simpson_weights(Eigen::Index n, double h) {
    if (n < 3 || n % 2 == 0) {
        throw QuadratureError("composite Simpson needs an odd sample count >= 3, got " + std::to_string(n));
    }
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        w[i] = (i % 2 == 1) ? 4.0 : 2.0;
    }
    w[0] = 1.0;
    w[n - 1] = 1.0;
    return w * (h / 3.0);
}

template <typename Derived>
typename Derived::Scalar simpson(const Eigen::MatrixBase<Derived>& samples, double h) {
    return simpson_weights(samples.size(), h).template cast<typename Derived::Scalar>().dot(samples.derived());
}

/// Per-point density sum_a |psi_a(x)|^2.
inline Eigen::VectorXd density(const SpinorField& f) {
    return f.values.cwiseAbs2().rowwise().sum();
}

/// sqrt(int sum_a |psi_a|^2 dx) by composite Simpson.
inline double l2_norm(const SpinorField& f) {
    return std::sqrt(simpson(density(f), f.grid.step()));
}

/// <a|b> by composite Simpson.
inline std::complex<double> inner_product(const SpinorField& a, const SpinorField& b) {
    require_same_grid(a.grid, b.grid);
    Eigen::VectorXcd pointwise = (a.values.conjugate().cwiseProduct(b.values)).rowwise().sum();
    return simpson(pointwise, a.grid.step());
}

} // namespace rotframe
