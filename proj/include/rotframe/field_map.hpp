#pragma once

// Two-channel potential <-> effective magnetic field, rotation-frequency
// dressing, and assembly of the stationary and time-dependent Hamiltonians.
// The kinetic part p^2 is carried symbolically; only the 2x2 spin part and
// the scalar q are stored.

#include "rotframe/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace rotframe {

/// Field magnitudes below this (energy units) are treated as degenerate.
inline constexpr double kDegeneracyTolerance = 1e-12;

template <typename Scalar = double>
struct PolarField {
    Scalar magnitude{}; // Omega >= 0
    Scalar angle{};     // theta, unwrapped (not reduced to a principal value)
    bool degenerate = false; // angle was continued, not computed

    Scalar sin() const { using std::sin; return sin(angle); }
    Scalar cos() const { using std::cos; return cos(angle); }
};

template <typename Scalar = double>
using FieldVec3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar = double>
using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

/// (p_x^2 + q) I + spin, with p_x^2 implicit.
template <typename Scalar = double>
struct HamMatrix {
    Scalar q{};
    Matrix2c<Scalar> spin = Matrix2c<Scalar>::Zero();

    /// The matrix part q I + spin.
    Matrix2c<Scalar> matrix() const { return spin + Matrix2c<Scalar>::Identity() * std::complex<Scalar>(q); }
};

namespace pauli {

template <typename Scalar = double>
Matrix2c<Scalar> identity() { return Matrix2c<Scalar>::Identity(); }

template <typename Scalar = double>
Matrix2c<Scalar> sigma1() {
    Matrix2c<Scalar> s;
    s << 0, 1, 1, 0;
    return s;
}

template <typename Scalar = double>
Matrix2c<Scalar> sigma2() {
    using C = std::complex<Scalar>;
    Matrix2c<Scalar> s;
    s << C(0), C(0, -1), C(0, 1), C(0);
    return s;
}

template <typename Scalar = double>
Matrix2c<Scalar> sigma3() {
    Matrix2c<Scalar> s;
    s << 1, 0, 0, -1;
    return s;
}

/// B . sigma
template <typename Scalar>
Matrix2c<Scalar> dot(const FieldVec3<Scalar>& b) {
    using C = std::complex<Scalar>;
    return C(b.x()) * sigma1<Scalar>() + C(b.y()) * sigma2<Scalar>() + C(b.z()) * sigma3<Scalar>();
}

} // namespace pauli

template <typename Scalar = double>
struct Decomposition {
    Scalar q{};
    PolarField<Scalar> field;
};

/// q = (V11+V22)/2, Omega_bar = sqrt((V11-V22)^2 + 4 V12^2)/2, theta_bar from
/// (sin, cos) = (V12, (V11-V22)/2)/Omega_bar. The angle is the principal value;
/// use decompose_profile for unwrapped angles along a grid.
template <typename Scalar>
Decomposition<Scalar> decompose(const Eigen::Matrix<Scalar, 2, 2>& V) {
    using std::atan2;
    using std::hypot;
    Decomposition<Scalar> d;
    d.q = (V(0, 0) + V(1, 1)) / Scalar(2);
    const Scalar half_split = (V(0, 0) - V(1, 1)) / Scalar(2);
    const Scalar coupling = (V(0, 1) + V(1, 0)) / Scalar(2);
    d.field.magnitude = hypot(half_split, coupling);
    if (d.field.magnitude < Scalar(kDegeneracyTolerance)) {
        d.field.angle = Scalar(0);
        d.field.degenerate = true;
    } else {
        d.field.angle = atan2(coupling, half_split);
    }
    return d;
}

/// Shift `angle` by a multiple of 2 pi to lie within pi of `reference`.
template <typename Scalar>
Scalar unwrap_near(Scalar angle, Scalar reference) {
    using std::remainder;
    const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
    return reference + remainder(angle - reference, two_pi);
}

/// Decompose a sampled potential and make the angle continuous along the samples.
/// Degenerate samples copy the angle of the nearest non-degenerate neighbour.
template <typename Scalar>
std::vector<Decomposition<Scalar>> decompose_profile(std::span<const Eigen::Matrix<Scalar, 2, 2>> samples) {
    std::vector<Decomposition<Scalar>> out;
    out.reserve(samples.size());
    for (const auto& V : samples) out.push_back(decompose(V));

    const std::size_t n = out.size();
    std::size_t first = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (!out[i].field.degenerate) { first = i; break; }
    }
    if (first == n) return out; // fully degenerate: all angles 0, all flagged

    Scalar last = out[first].field.angle;
    for (std::size_t i = first + 1; i < n; ++i) {
        if (!out[i].field.degenerate) {
            out[i].field.angle = unwrap_near(out[i].field.angle, last);
            last = out[i].field.angle;
        }
    }
    // continuation: nearest non-degenerate neighbour (ties go left)
    std::vector<std::ptrdiff_t> left(n, -1), right(n, -1);
    std::ptrdiff_t seen = -1;
    for (std::size_t i = 0; i < n; ++i) {
        if (!out[i].field.degenerate) seen = static_cast<std::ptrdiff_t>(i);
        left[i] = seen;
    }
    seen = -1;
    for (std::size_t i = n; i-- > 0;) {
        if (!out[i].field.degenerate) seen = static_cast<std::ptrdiff_t>(i);
        right[i] = seen;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!out[i].field.degenerate) continue;
        const auto l = left[i];
        const auto r = right[i];
        std::ptrdiff_t src = l;
        if (l < 0 || (r >= 0 && (r - static_cast<std::ptrdiff_t>(i)) < (static_cast<std::ptrdiff_t>(i) - l))) src = r;
        out[i].field.angle = out[static_cast<std::size_t>(src)].field.angle;
    }
    return out;
}

/// Dressed field of the rotating frame: B = B_bar + omega e_z, i.e.
/// Omega^2 = Omega_bar^2 + omega^2 + 2 omega Omega_bar cos(theta_bar).
/// The dressed angle is placed within pi of theta_bar.
template <typename Scalar>
PolarField<Scalar> dress(const PolarField<Scalar>& bar, Scalar omega) {
    using std::atan2;
    using std::hypot;
    const Scalar bx = bar.magnitude * bar.sin();
    const Scalar bz = bar.magnitude * bar.cos() + omega;
    PolarField<Scalar> out;
    out.magnitude = hypot(bx, bz);
    if (out.magnitude < Scalar(kDegeneracyTolerance)) {
        out.angle = bar.angle;
        out.degenerate = true;
    } else {
        out.angle = unwrap_near(atan2(bx, bz), bar.angle);
        out.degenerate = bar.degenerate;
    }
    return out;
}

/// Inverse of dress: the stationary field that dresses to `dressed` at frequency omega.
template <typename Scalar>
PolarField<Scalar> undress(const PolarField<Scalar>& dressed, Scalar omega) {
    using std::atan2;
    using std::hypot;
    const Scalar bx = dressed.magnitude * dressed.sin();
    const Scalar bz = dressed.magnitude * dressed.cos() - omega;
    PolarField<Scalar> out;
    out.magnitude = hypot(bx, bz);
    if (out.magnitude < Scalar(kDegeneracyTolerance)) {
        out.angle = dressed.angle;
        out.degenerate = true;
    } else {
        out.angle = unwrap_near(atan2(bx, bz), dressed.angle);
    }
    return out;
}

/// B(t) = Omega (sin(theta) cos(2 omega t), sin(theta) sin(2 omega t), cos(theta)).
template <typename Scalar>
FieldVec3<Scalar> field_at_time(const PolarField<Scalar>& dressed, Scalar omega, Scalar t) {
    using std::cos;
    using std::sin;
    const Scalar phase = Scalar(2) * omega * t;
    return dressed.magnitude *
           FieldVec3<Scalar>(dressed.sin() * cos(phase), dressed.sin() * sin(phase), dressed.cos());
}

/// Cartesian form of a static field, (sin, 0, cos) * Omega.
template <typename Scalar>
FieldVec3<Scalar> field_vector(const PolarField<Scalar>& f) {
    return f.magnitude * FieldVec3<Scalar>(f.sin(), Scalar(0), f.cos());
}

template <typename Scalar>
HamMatrix<Scalar> h_stationary(Scalar q, const PolarField<Scalar>& bar) {
    HamMatrix<Scalar> h;
    h.q = q;
    const Scalar c = bar.magnitude * bar.cos();
    const Scalar s = bar.magnitude * bar.sin();
    h.spin << c, s, s, -c;
    return h;
}

/// Explicit time-dependent Hamiltonian: diagonal +-(Omega_bar cos + omega),
/// off-diagonal Omega_bar sin e^{-+2 i omega t}.
template <typename Scalar>
HamMatrix<Scalar> h_of_t(Scalar q, const PolarField<Scalar>& bar, Scalar omega, Scalar t) {
    using C = std::complex<Scalar>;
    using std::polar;
    HamMatrix<Scalar> h;
    h.q = q;
    const Scalar diag = bar.magnitude * bar.cos() + omega;
    const Scalar off = bar.magnitude * bar.sin();
    const Scalar phase = Scalar(2) * omega * t;
    h.spin << C(diag), off * polar(Scalar(1), -phase), off * polar(Scalar(1), phase), C(-diag);
    return h;
}

/// S(t) = exp(-i sigma_3 omega t).
template <typename Scalar>
Matrix2c<Scalar> rotation_frame_matrix(Scalar omega, Scalar t) {
    using std::polar;
    Matrix2c<Scalar> s = Matrix2c<Scalar>::Zero();
    s(0, 0) = polar(Scalar(1), -omega * t);
    s(1, 1) = polar(Scalar(1), omega * t);
    return s;
}

/// The same Hamiltonian built as S(t) H_bar S^dagger(t) + omega sigma_3.
template <typename Scalar>
HamMatrix<Scalar> h_of_t_conjugated(Scalar q, const PolarField<Scalar>& bar, Scalar omega, Scalar t) {
    const auto S = rotation_frame_matrix(omega, t);
    HamMatrix<Scalar> h = h_stationary(q, bar);
    h.spin = S * h.spin * S.adjoint() + std::complex<Scalar>(omega) * pauli::sigma3<Scalar>();
    return h;
}

/// Max entrywise |H - H^dagger|.
template <typename Scalar>
Scalar hermiticity_defect(const Matrix2c<Scalar>& h) {
    return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

} // namespace rotframe
