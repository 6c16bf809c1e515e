#include <doctest.h>

#include "rotframe/evolution.hpp"
#include "rotframe/gauge.hpp"
#include "rotframe/stencil.hpp"
#include "rotframe/verify.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace rotframe;
using std::numbers::pi;

TEST_CASE("rotation_matrix: spin 1/2 example and the transpose used on states") {
    const auto R = rotation_matrix(pi / 2);
    const double r = std::sqrt(2.0) / 2;
    Eigen::Matrix2d expect;
    expect << r, -r, r, r;
    CHECK((R - expect).cwiseAbs().maxCoeff() < 1e-15);

    // states map with exp(+i theta j_2) = R^T
    SpinorField up(Grid{0.0, 1.0, 3}, 2);
    up.values.col(0).setOnes();
    const auto rotated = gauge_rotate(up, GaugeRotation{Eigen::VectorXd::Constant(3, pi / 2), Spin::half()});
    CHECK(std::abs(rotated.values(1, 0) - r) < 1e-15);
    CHECK(std::abs(rotated.values(1, 1) + r) < 1e-15);
}

TEST_CASE("rotation_matrix: orthogonal, unit determinant, composition, for several spins") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> ang(-7.0, 7.0);
    for (int twice_j = 1; twice_j <= 4; ++twice_j) {
        const Spin s{twice_j};
        for (int i = 0; i < 10; ++i) {
            const double a = ang(rng), b = ang(rng);
            const auto Ra = rotation_matrix(a, s);
            const auto I = Eigen::MatrixXd::Identity(s.dim(), s.dim());
            CHECK((Ra.transpose() * Ra - I).cwiseAbs().maxCoeff() < 1e-13);
            CHECK(Ra.determinant() == doctest::Approx(1.0).epsilon(1e-12));
            CHECK((Ra * rotation_matrix(b, s) - rotation_matrix(a + b, s)).cwiseAbs().maxCoeff() < 1e-12);
        }
        // full turn: (-1)^{2j}
        const double sign = twice_j % 2 ? -1.0 : 1.0;
        CHECK((rotation_matrix(2 * pi, s) - sign * Eigen::MatrixXd::Identity(s.dim(), s.dim())).cwiseAbs().maxCoeff() <
              1e-12);
    }
    // the dense path agrees with the closed form at j = 1/2 structure: j = 1 rotates vectors about y
    const auto R1 = rotation_matrix(0.4, Spin{2});
    CHECK(R1(0, 0) == doctest::Approx(0.5 * (1 + std::cos(0.4))));
    CHECK(R1(1, 1) == doctest::Approx(std::cos(0.4)));
}

TEST_CASE("Spin: validation") {
    CHECK(Spin::from_double(1.5).twice_j == 3);
    CHECK_THROWS_AS(Spin::from_double(0.3), ConfigError);
    CHECK_THROWS_AS(Spin::from_double(0.0), ConfigError);
    CHECK_THROWS_AS(Spin::from_double(-1.0), ConfigError);
    CHECK_THROWS_AS(rotation_matrix(0.1, Spin{0}), ConfigError);
}

TEST_CASE("angular momentum matrices obey [j_x, j_y] = i j_z") {
    const std::complex<double> I(0, 1);
    for (int twice_j = 1; twice_j <= 4; ++twice_j) {
        const Spin s{twice_j};
        const auto jx = jx_matrix(s), jy = jy_matrix(s), jz = jz_matrix(s);
        CHECK((jx * jy - jy * jx - I * jz).cwiseAbs().maxCoeff() < 1e-13);
        const auto casimir = jx * jx + jy * jy + jz * jz;
        const double jj = s.j() * (s.j() + 1);
        CHECK((casimir - jj * Eigen::MatrixXcd::Identity(s.dim(), s.dim())).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("conjugation identity B.sigma = Omega R sigma_3 R^T") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> mag(0.0, 3.0), ang(-6.0, 6.0);
    for (int i = 0; i < 100; ++i) {
        CHECK(conjugation_identity_check(PolarField<double>{mag(rng), ang(rng), false}) < 1e-14);
    }
}

TEST_CASE("vector_potential: closed form against finite differences") {
    for (int twice_j = 1; twice_j <= 3; ++twice_j) {
        const Spin s{twice_j};
        auto theta = [](double x) { return x; };
        const auto A = vector_potential(1.0, s);
        const auto fd = vector_potential_fd(theta, 0.3, s, 1e-5);
        CHECK((A - fd).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((A + A.transpose()).cwiseAbs().maxCoeff() == 0.0);

        auto wavy = [](double x) { return 0.7 * std::sin(2 * x) + x * x; };
        for (double x : {-1.0, 0.2, 1.4}) {
            const double dtheta = 1.4 * std::cos(2 * x) + 2 * x;
            CHECK((vector_potential(dtheta, s) - vector_potential_fd(wavy, x, s)).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
    // spin 1/2: A = (theta'/2) [[0, -1], [1, 0]]
    const auto A = vector_potential(2.0);
    CHECK(A(0, 1) == doctest::Approx(-1.0));
    CHECK(A(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("gauge_rotate: norm preserving, inverse and mismatch errors") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> n01;
    const Grid g{-3.0, 3.0, 61};
    for (int twice_j = 1; twice_j <= 3; ++twice_j) {
        const Spin s{twice_j};
        SpinorField f(g, s.dim());
        for (Eigen::Index i = 0; i < f.values.size(); ++i) f.values.data()[i] = {n01(rng), n01(rng)};
        Eigen::VectorXd theta(g.n_points);
        for (Eigen::Index i = 0; i < g.n_points; ++i) theta[i] = 3.0 * n01(rng);
        const GaugeRotation rot{theta, s};
        const auto r = gauge_rotate(f, rot);
        CHECK(l2_norm(r) == doctest::Approx(l2_norm(f)).epsilon(1e-13));
        CHECK((gauge_rotate(r, rot.inverse()).values - f.values).cwiseAbs().maxCoeff() < 1e-13);
    }
    SpinorField two(g, 2);
    CHECK_THROWS_AS(gauge_rotate(two, GaugeRotation{Eigen::VectorXd::Zero(5), Spin::half()}), GridMismatchError);
    CHECK_THROWS_AS(gauge_rotate(two, GaugeRotation{Eigen::VectorXd::Zero(61), Spin{2}}), GridMismatchError);
}

TEST_CASE("gauge-type equation: coupled soliton has a constant angle and a small residual") {
    const auto spec = coupled_soliton();
    const Grid grid = default_grid(spec);
    const auto data = stationary_gauge_data(spec, grid, -1.0);
    const auto sample = bound_state(spec, 0, grid);
    const auto prime = gauge_rotate(sample.state, data.rotation());
    CHECK(gauge_residual(prime, data) < 1e-5);

    // equal negative entries: theta_bar = -pi/2 wherever the field is resolved
    const Eigen::Index mid = grid.n_points / 2;
    CHECK(data.theta[mid] == doctest::Approx(-pi / 2));
    CHECK(std::abs(data.theta_prime[mid]) < 1e-12);

    auto wrong = data;
    wrong.energy += 0.1;
    CHECK(gauge_residual(prime, wrong) > 1e-2);
}

namespace {

struct PointwiseResiduals {
    double gauge = 0.0;
    double plain = 0.0;
};

/// Largest pointwise residuals of both stationary forms, skipping the tails where the field
/// is below 1e-3 of its peak. On the left the field comes out of a cancellation between O(1)
/// terms, so its angle carries rounding noise that the stencils amplify once h is small.
PointwiseResiduals resolved_residuals(const SpectralData<double>& spec, Eigen::Index nu, double spacing) {
    const Grid grid = default_grid(spec, spacing);
    const double E = spec.states[static_cast<std::size_t>(nu)].energy;
    const auto data = stationary_gauge_data(spec, grid, E);
    const auto sample = bound_state(spec, nu, grid);
    const auto prime = gauge_rotate(sample.state, data.rotation());
    const SpinorField applied = apply_gauge_operator(prime, data);
    const Eigen::MatrixXcd d2 = stencil::second_on_grid(sample.state.values, grid.step());
    const double peak = data.magnitude.maxCoeff();
    PointwiseResiduals out;
    for (Eigen::Index i = 2; i + 2 < grid.n_points; ++i) {
        if (data.magnitude[i] < 1e-3 * peak) continue;
        const Eigen::Vector2cd phi = sample.state.values.row(i).transpose();
        const Eigen::Matrix2cd V = potential_matrix(spec, grid.x(i)).V.cast<std::complex<double>>();
        out.plain = std::max(out.plain, (-d2.row(i).transpose() + V * phi - E * phi).norm());
        out.gauge = std::max(out.gauge, (applied.values.row(i) - E * prime.values.row(i)).norm());
    }
    return out;
}

} // namespace

TEST_CASE("gauge-type equation: small residual with fourth-order convergence where the field is resolved") {
    const auto spec = two_state_coupled();
    for (Eigen::Index nu = 0; nu < spec.n_states(); ++nu) {
        const auto coarse = resolved_residuals(spec, nu, 0.04);
        const auto fine = resolved_residuals(spec, nu, 0.02);
        CHECK(fine.plain < 1e-6);
        CHECK(fine.gauge < 1e-6);
        CHECK(coarse.gauge / fine.gauge > 8.0);
        CHECK(coarse.plain / fine.plain > 8.0);
        CHECK(fine.gauge <= 10.0 * fine.plain);
    }
}

TEST_CASE("gauge-type equation: uncoupled data reduces to the plain equation") {
    const auto spec =
        make_spectral<double>(2, {degenerate_state<double>(1.0, Eigen::VectorXd{{std::sqrt(2.0), 0.0}})});
    const Grid grid = default_grid(spec);
    const auto data = stationary_gauge_data(spec, grid, -1.0);
    CHECK(data.theta_prime.cwiseAbs().maxCoeff() == 0.0);
    const auto sample = bound_state(spec, 0, grid);
    std::vector<Eigen::Matrix2d> V;
    for (Eigen::Index i = 0; i < grid.n_points; ++i) V.emplace_back(potential_matrix(spec, grid.x(i)).V);
    const auto prime = gauge_rotate(sample.state, data.rotation());
    CHECK(std::abs(gauge_residual(prime, data) - stationary_residual_on_grid(sample.state, V, -1.0)) < 1e-12);
}

TEST_CASE("dressed gauge data: angle follows the dressed field") {
    const auto spec = two_state_coupled();
    const Grid grid{-6.0, 6.0, 241};
    const auto bar = stationary_gauge_data(spec, grid, 0.0);
    const auto dressed = dressed_gauge_data(spec, grid, 0.5);
    for (Eigen::Index i = 0; i < grid.n_points; i += 20) {
        const auto d = dress(PolarField<double>{bar.magnitude[i], bar.theta[i], false}, 0.5);
        CHECK(dressed.magnitude[i] == doctest::Approx(d.magnitude).epsilon(1e-12));
        CHECK(std::remainder(dressed.theta[i] - d.angle, 2 * pi) == doctest::Approx(0.0).epsilon(1e-10));
    }
    CHECK_THROWS_AS(stationary_gauge_data(one_soliton(), grid, -1.0), ConfigError);
}
