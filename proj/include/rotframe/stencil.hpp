#pragma once

#include <Eigen/Dense>

#include <type_traits>

namespace rotframe::stencil {

/// Default step for finite-difference residual checks.
inline constexpr double kDefaultStep = 1e-3;

/// Five-point central first derivative of f at x.
/// f must return a plain value (double, complex or a concrete Eigen type).
template <typename F>
auto first(F&& f, double x, double h = kDefaultStep) {
    using R = std::decay_t<std::invoke_result_t<F&, double>>;
    const R a = f(x - 2 * h), b = f(x - h), c = f(x + h), d = f(x + 2 * h);
    R out = ((a - d) + 8.0 * (c - b)) / (12.0 * h);
    return out;
}

/// Five-point central second derivative of f at x.
template <typename F>
auto second(F&& f, double x, double h = kDefaultStep) {
    using R = std::decay_t<std::invoke_result_t<F&, double>>;
    const R a = f(x - 2 * h), b = f(x - h), c = f(x), d = f(x + h), e = f(x + 2 * h);
    R out = (16.0 * (d + b) - (e + a) - 30.0 * c) / (12.0 * h * h);
    return out;
}

/// Five-point derivatives of sampled rows; rows within two samples of an end are left zero.
inline Eigen::MatrixXcd first_on_grid(const Eigen::MatrixXcd& v, double h) {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(v.rows(), v.cols());
    for (Eigen::Index i = 2; i + 2 < v.rows(); ++i) {
        d.row(i) = ((v.row(i - 2) - v.row(i + 2)) + 8.0 * (v.row(i + 1) - v.row(i - 1))) / (12.0 * h);
    }
    return d;
}

inline Eigen::MatrixXcd second_on_grid(const Eigen::MatrixXcd& v, double h) {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(v.rows(), v.cols());
    for (Eigen::Index i = 2; i + 2 < v.rows(); ++i) {
        d.row(i) = (16.0 * (v.row(i + 1) + v.row(i - 1)) - (v.row(i + 2) + v.row(i - 2)) - 30.0 * v.row(i)) /
                   (12.0 * h * h);
    }
    return d;
}

} // namespace rotframe::stencil
