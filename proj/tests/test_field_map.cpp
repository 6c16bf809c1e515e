#include <doctest.h>

#include "rotframe/bargmann.hpp"
#include "rotframe/field_map.hpp"
#include "rotframe/verify.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace rotframe;
using std::numbers::pi;

namespace {

Eigen::Matrix2d sym(double a, double b, double d) {
    Eigen::Matrix2d V;
    V << a, b, b, d;
    return V;
}

Eigen::Matrix2d rebuild(const Decomposition<double>& d) {
    const double c = d.field.magnitude * d.field.cos(), s = d.field.magnitude * d.field.sin();
    return sym(d.q + c, s, d.q - c);
}

} // namespace

TEST_CASE("decompose: worked examples") {
    auto d = decompose<double>(sym(1.0, 0.0, -1.0));
    CHECK(d.q == 0.0);
    CHECK(d.field.magnitude == doctest::Approx(1.0));
    CHECK(d.field.angle == doctest::Approx(0.0));

    d = decompose<double>(sym(0.0, 1.0, 0.0));
    CHECK(d.field.magnitude == doctest::Approx(1.0));
    CHECK(d.field.angle == doctest::Approx(pi / 2));

    d = decompose<double>(sym(3.0, 0.0, 3.0));
    CHECK(d.q == 3.0);
    CHECK(d.field.degenerate);
    CHECK(d.field.magnitude == 0.0);

    d = decompose<double>(sym(-1.0, 0.0, 1.0));
    CHECK(std::abs(d.field.angle) == doctest::Approx(pi));
}

TEST_CASE("decompose: round trip on random symmetric matrices") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const Eigen::Matrix2d V = sym(u(rng), u(rng), u(rng));
        const auto d = decompose<double>(V);
        CHECK((rebuild(d) - V).cwiseAbs().maxCoeff() < 1e-13);
        CHECK(d.field.magnitude >= 0.0);
    }
}

TEST_CASE("decompose_profile: continuous angle and degenerate continuation") {
    std::vector<Eigen::Matrix2d> samples;
    for (int i = 0; i <= 40; ++i) {
        const double th = 0.3 * i; // winds past pi
        samples.push_back(sym(std::cos(th), std::sin(th), -std::cos(th)));
    }
    samples[10] = sym(2.0, 0.0, 2.0);
    const auto p = decompose_profile<double>(samples);
    for (std::size_t i = 1; i < p.size(); ++i) {
        if (i == 10) continue;
        CHECK(std::abs(p[i].field.angle - 0.3 * static_cast<double>(i)) < 1e-12);
    }
    CHECK(p[10].field.degenerate);
    CHECK(p[10].field.angle == p[9].field.angle); // tie goes left

    std::vector<Eigen::Matrix2d> flat(5, sym(1.0, 0.0, 1.0));
    for (const auto& d : decompose_profile<double>(flat)) {
        CHECK(d.field.degenerate);
        CHECK(d.field.angle == 0.0);
    }
}

TEST_CASE("decompose_profile on a Bargmann potential stays continuous") {
    const auto spec = two_state_coupled();
    const Grid g = default_grid(spec, 0.05);
    std::vector<Eigen::Matrix2d> samples;
    for (Eigen::Index i = 0; i < g.n_points; ++i) samples.emplace_back(potential_matrix(spec, g.x(i)).V);
    const auto p = decompose_profile<double>(samples);
    for (std::size_t i = 1; i < p.size(); ++i) {
        CHECK(std::abs(p[i].field.angle - p[i - 1].field.angle) <= pi);
    }
}

TEST_CASE("dress: examples and the law of cosines") {
    const PolarField<double> a{1.0, pi / 2, false};
    const auto d = dress(a, 1.0);
    CHECK(d.magnitude == doctest::Approx(std::sqrt(2.0)));
    CHECK(d.angle == doctest::Approx(pi / 4));

    const PolarField<double> anti{1.0, pi, false};
    const auto zero = dress(anti, 1.0);
    CHECK(zero.degenerate);
    CHECK(zero.angle == pi);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> mag(0.1, 3.0), ang(-4.0, 4.0), om(0.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        const PolarField<double> bar{mag(rng), ang(rng), false};
        const double w = om(rng);
        const auto dr = dress(bar, w);
        const double law = bar.magnitude * bar.magnitude + w * w + 2 * w * bar.magnitude * bar.cos();
        CHECK(dr.magnitude * dr.magnitude == doctest::Approx(law).epsilon(1e-12));
        CHECK(std::abs(dr.angle - bar.angle) <= pi);
        // Omega sin(theta) = Omega_bar sin(theta_bar), Omega cos(theta) = Omega_bar cos(theta_bar) + omega
        CHECK(std::abs(dr.magnitude * dr.sin() - bar.magnitude * bar.sin()) < 1e-12);
        CHECK(std::abs(dr.magnitude * dr.cos() - bar.magnitude * bar.cos() - w) < 1e-12);

        const auto back = undress(dr, w);
        CHECK(back.magnitude == doctest::Approx(bar.magnitude).epsilon(1e-12));
        CHECK(std::abs(back.angle - bar.angle) < 1e-10);
    }
}

TEST_CASE("field_at_time: examples and constant magnitude") {
    const PolarField<double> f{1.0, pi / 2, false};
    const auto b0 = field_at_time(f, 1.0, 0.0);
    CHECK(std::abs(b0.x() - 1.0) < 1e-15);
    CHECK(std::abs(b0.y()) < 1e-15);
    CHECK(std::abs(b0.z()) < 1e-15);
    const auto bq = field_at_time(f, 1.0, pi / 4);
    CHECK(std::abs(bq.x()) < 1e-15);
    CHECK(std::abs(bq.y() - 1.0) < 1e-15);

    const PolarField<double> g{1.0, 1.0, false};
    const auto b = field_at_time(g, 1.0, 1.0);
    CHECK(b.x() == doctest::Approx(std::sin(1.0) * std::cos(2.0)));
    CHECK(b.y() == doctest::Approx(std::sin(1.0) * std::sin(2.0)));
    CHECK(b.z() == doctest::Approx(std::cos(1.0)));

    const double T = pi / 0.7;
    for (int k = 0; k <= 16; ++k) {
        const double t = T * k / 16.0;
        CHECK(field_at_time(g, 0.7, t).norm() == doctest::Approx(1.0).epsilon(1e-14));
        // period T: precession at 2 omega
        CHECK((field_at_time(g, 0.7, t + T) - field_at_time(g, 0.7, t)).norm() < 1e-13);
    }
}

TEST_CASE("h_of_t: explicit form equals the conjugated construction") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-2.0, 2.0), pos(0.05, 2.0);
    for (int i = 0; i < 100; ++i) {
        const PolarField<double> bar{pos(rng), u(rng), false};
        const double q = u(rng), w = pos(rng), t = 3.0 * u(rng);
        const auto a = h_of_t(q, bar, w, t);
        const auto b = h_of_t_conjugated(q, bar, w, t);
        CHECK((a.matrix() - b.matrix()).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(hermiticity_defect(a.matrix()) < 1e-15);

        // spin part equals B(t).sigma of the dressed field
        const auto B = field_at_time(dress(bar, w), w, t);
        CHECK((a.spin - pauli::dot<double>(B)).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("h_of_t at omega = 0 is the stationary Hamiltonian") {
    const PolarField<double> bar{1.3, 0.4, false};
    const auto a = h_of_t(0.2, bar, 0.0, 5.0);
    const auto s = h_stationary(0.2, bar);
    CHECK((a.matrix() - s.matrix()).cwiseAbs().maxCoeff() < 1e-15);

    // worked example: Omega_bar = 1, theta_bar = pi/2, omega = 1, t = 0
    const auto h = h_of_t(0.0, PolarField<double>{1.0, pi / 2, false}, 1.0, 0.0);
    CHECK(std::abs(h.spin(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(h.spin(0, 1) - 1.0) < 1e-15);
    CHECK(std::abs(h.spin(1, 1) + 1.0) < 1e-15);
}

TEST_CASE("pauli matrices and rotation frame matrix") {
    const auto s1 = pauli::sigma1<double>(), s2 = pauli::sigma2<double>(), s3 = pauli::sigma3<double>();
    const std::complex<double> I(0, 1);
    CHECK((s1 * s2 - I * s3).cwiseAbs().maxCoeff() == 0.0);
    CHECK((s1 * s1 - pauli::identity<double>()).cwiseAbs().maxCoeff() == 0.0);
    const auto S = rotation_frame_matrix(0.5, 1.2);
    CHECK((S * S.adjoint() - pauli::identity<double>()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(std::abs(S(0, 0) - std::exp(-I * 0.6)) < 1e-15);
}

TEST_CASE("long double instantiation of the field map") {
    const Eigen::Matrix<long double, 2, 2> V = (Eigen::Matrix<long double, 2, 2>() << 1.5L, 0.5L, 0.5L, -0.5L).finished();
    const auto d = decompose<long double>(V);
    const auto dr = dress(d.field, 0.25L);
    const auto back = undress(dr, 0.25L);
    CHECK(std::abs(static_cast<double>(back.magnitude - d.field.magnitude)) < 1e-15);
}
