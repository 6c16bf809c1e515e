#include "rotframe/gauge.hpp"

#include "rotframe/quadrature.hpp"
#include "rotframe/stencil.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <string>

namespace rotframe {

Spin Spin::from_double(double j) {
    const double twice = 2.0 * j;
    if (!(j > 0.0) || std::abs(twice - std::round(twice)) > 1e-12) {
        throw ConfigError("spin j must be a positive multiple of 1/2, got " + std::to_string(j));
    }
    return Spin{static_cast<int>(std::lround(twice))};
}

namespace {

/// j_+ in the basis m = j, ..., -j (index k <-> m = j - k).
Eigen::MatrixXd raising(Spin s) {
    const Eigen::Index n = s.dim();
    const double j = s.j();
    Eigen::MatrixXd jp = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 1; k < n; ++k) {
        const double m = j - static_cast<double>(k); // column state |m>, raised to |m+1> at row k-1
        jp(k - 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    }
    return jp;
}

constexpr std::complex<double> I(0.0, 1.0);

/// (-i j_2) is real: -(j_+ - j_-)/2.
Eigen::MatrixXd minus_i_jy(Spin s) {
    const Eigen::MatrixXd jp = raising(s);
    return -0.5 * (jp - jp.transpose());
}

} // namespace

Eigen::MatrixXcd jx_matrix(Spin s) {
    const Eigen::MatrixXd jp = raising(s);
    return (0.5 * (jp + jp.transpose())).cast<std::complex<double>>();
}

Eigen::MatrixXcd jy_matrix(Spin s) {
    const Eigen::MatrixXd jp = raising(s);
    return (jp - jp.transpose()).cast<std::complex<double>>() / (2.0 * I);
}

Eigen::MatrixXcd jz_matrix(Spin s) {
    Eigen::VectorXd m(s.dim());
    for (Eigen::Index k = 0; k < s.dim(); ++k) m[k] = s.j() - static_cast<double>(k);
    return m.cast<std::complex<double>>().asDiagonal();
}

Eigen::MatrixXd rotation_matrix(double theta, Spin s) {
    if (s.twice_j < 1) {
        throw ConfigError("rotation_matrix: spin must be >= 1/2");
    }
    if (s.twice_j == 1) {
        const double c = std::cos(0.5 * theta);
        const double sn = std::sin(0.5 * theta);
        Eigen::MatrixXd r(2, 2);
        r << c, -sn, sn, c;
        return r;
    }
    const Eigen::MatrixXd generator = theta * minus_i_jy(s);
    return generator.exp();
}

double conjugation_identity_check(const PolarField<double>& field) {
    const Eigen::Matrix2cd lhs = pauli::dot<double>(field_vector(field));
    const Eigen::Matrix2cd R = rotation_matrix(field.angle).cast<std::complex<double>>();
    const Eigen::Matrix2cd rhs = field.magnitude * R * pauli::sigma3<double>() * R.adjoint();
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

Eigen::MatrixXd vector_potential(double theta_prime, Spin s) {
    return theta_prime * minus_i_jy(s);
}

Eigen::MatrixXd vector_potential_fd(const std::function<double(double)>& theta, double x, Spin s, double h) {
    const Eigen::MatrixXd dR =
        stencil::first([&](double y) -> Eigen::MatrixXd { return rotation_matrix(theta(y), s); }, x, h);
    return rotation_matrix(theta(x), s).transpose() * dR;
}

SpinorField gauge_rotate(const SpinorField& state, const GaugeRotation& rot) {
    if (rot.theta.size() != state.size()) {
        throw GridMismatchError("gauge_rotate: angle profile has " + std::to_string(rot.theta.size()) +
                                " samples, state has " + std::to_string(state.size()));
    }
    if (state.components() != rot.spin.dim()) {
        throw GridMismatchError("gauge_rotate: spinor dimension does not match 2j+1");
    }
    SpinorField out(state.grid, state.components());
    for (Eigen::Index i = 0; i < state.size(); ++i) {
        const Eigen::MatrixXcd R = rotation_matrix(rot.theta[i], rot.spin).transpose().cast<std::complex<double>>();
        out.values.row(i) = (R * state.values.row(i).transpose()).transpose();
    }
    return out;
}

namespace {

/// d/dx atan2(b, a) for the field (a, b) = ((V11 - V22)/2 + shift, V12), from closed-form V and V'.
double angle_derivative(const SpectralData<double>& spec, double x, double shift) {
    const auto jet = potential_jet(spec, x);
    const double a = 0.5 * (jet.V(0, 0) - jet.V(1, 1)) + shift;
    const double b = jet.V(0, 1);
    const double da = 0.5 * (jet.dV(0, 0) - jet.dV(1, 1));
    const double db = jet.dV(0, 1);
    const double r2 = a * a + b * b;
    if (std::sqrt(r2) < kDegeneracyTolerance) return 0.0;
    return (a * db - b * da) / r2;
}

GaugeEquationData gauge_data(const SpectralData<double>& spec, const Grid& grid, double shift) {
    if (spec.n_channels != 2) {
        throw ConfigError("gauge equations are defined for two channels");
    }
    GaugeEquationData data;
    data.grid = grid;
    const Eigen::Index n = grid.n_points;
    std::vector<Eigen::Matrix2d> shifted(static_cast<std::size_t>(n));
    data.q.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto sample = potential_matrix(spec, grid.x(i));
        data.q[i] = sample.q;
        Eigen::Matrix2d v = sample.V;
        v(0, 0) += shift;
        v(1, 1) -= shift;
        shifted[static_cast<std::size_t>(i)] = v;
    }
    const auto profile = decompose_profile<double>(shifted);
    data.magnitude.resize(n);
    data.theta.resize(n);
    data.theta_prime.resize(n);
    data.theta_second.resize(n);
    data.degenerate.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& d = profile[static_cast<std::size_t>(i)];
        const double x = grid.x(i);
        data.magnitude[i] = d.field.magnitude;
        data.theta[i] = d.field.angle;
        data.degenerate[static_cast<std::size_t>(i)] = d.field.degenerate;
        if (d.field.degenerate) {
            data.theta_prime[i] = 0.0;
            data.theta_second[i] = 0.0;
        } else {
            data.theta_prime[i] = angle_derivative(spec, x, shift);
            data.theta_second[i] = stencil::first([&](double y) { return angle_derivative(spec, y, shift); }, x);
        }
    }
    return data;
}

} // namespace

GaugeEquationData stationary_gauge_data(const SpectralData<double>& spec, const Grid& grid, double energy) {
    auto data = gauge_data(spec, grid, 0.0);
    data.energy = energy;
    return data;
}

GaugeEquationData dressed_gauge_data(const SpectralData<double>& spec, const Grid& grid, double omega) {
    return gauge_data(spec, grid, omega);
}

SpinorField apply_gauge_operator(const SpinorField& state_prime, const GaugeEquationData& data) {
    require_same_grid(state_prime.grid, data.grid);
    const double h = data.grid.step();
    const Eigen::MatrixXcd d1 = stencil::first_on_grid(state_prime.values, h);
    const Eigen::MatrixXcd d2 = stencil::second_on_grid(state_prime.values, h);

    Eigen::Matrix2d J;
    J << 0.0, -1.0, 1.0, 0.0;
    SpinorField out(state_prime.grid, 2);
    for (Eigen::Index i = 2; i + 2 < state_prime.size(); ++i) {
        // (d + A)^2 = d^2 + 2 A d + A' + A^2 with A = (theta'/2) J, J^2 = -1
        const Eigen::Matrix2cd A = (0.5 * data.theta_prime[i] * J).cast<std::complex<double>>();
        const Eigen::Matrix2cd dA = (0.5 * data.theta_second[i] * J).cast<std::complex<double>>();
        const Eigen::Matrix2cd A2 = A * A;
        const Eigen::Vector2cd phi = state_prime.values.row(i).transpose();
        const Eigen::Vector2cd covariant_laplacian =
            d2.row(i).transpose() + 2.0 * A * d1.row(i).transpose() + (dA + A2) * phi;
        Eigen::Vector2cd result = -covariant_laplacian + data.q[i] * phi;
        result[0] += data.magnitude[i] * phi[0];
        result[1] -= data.magnitude[i] * phi[1];
        out.values.row(i) = result.transpose();
    }
    return out;
}

double gauge_residual(const SpinorField& state_prime, const GaugeEquationData& data) {
    SpinorField r = apply_gauge_operator(state_prime, data);
    for (Eigen::Index i = 2; i + 2 < r.size(); ++i) {
        r.values.row(i) -= data.energy * state_prime.values.row(i);
    }
    return l2_norm(r) / l2_norm(state_prime);
}

double stationary_residual_on_grid(const SpinorField& state, const std::vector<Eigen::Matrix2d>& potential,
                                   double energy) {
    if (static_cast<Eigen::Index>(potential.size()) != state.size()) {
        throw GridMismatchError("stationary_residual_on_grid: potential samples do not match the grid");
    }
    const Eigen::MatrixXcd d2 = stencil::second_on_grid(state.values, state.grid.step());
    SpinorField r(state.grid, state.components());
    for (Eigen::Index i = 2; i + 2 < state.size(); ++i) {
        const Eigen::Vector2cd phi = state.values.row(i).transpose();
        r.values.row(i) = (-d2.row(i).transpose() +
                           potential[static_cast<std::size_t>(i)].cast<std::complex<double>>() * phi - energy * phi)
                              .transpose();
    }
    return l2_norm(r) / l2_norm(state);
}

} // namespace rotframe
