#pragma once

// Closed-form multichannel transparent (Bargmann) potentials, Jost solutions
// and bound states built from spectral data. Header-only, templated on the
// real scalar so that long double can be used as a reference precision.

#include "rotframe/errors.hpp"
#include "rotframe/grid.hpp"
#include "rotframe/quadrature.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace rotframe {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

enum class ThresholdMode {
    degenerate,  // kappa_nu identical in every channel, kappa = sqrt(-E)
    per_channel, // experimental
};

template <typename Scalar = double>
struct BoundState {
    Scalar energy{};
    VectorX<Scalar> kappas; // one decay constant per channel
    VectorX<Scalar> gammas; // normalization vector, one entry per channel

    bool operator==(const BoundState&) const = default;
};

template <typename Scalar = double>
struct SpectralData {
    Eigen::Index n_channels = 1;
    std::vector<BoundState<Scalar>> states;
    ThresholdMode thresholds = ThresholdMode::degenerate;

    Eigen::Index n_states() const { return static_cast<Eigen::Index>(states.size()); }

    Scalar kappa_min() const {
        Scalar k = std::numeric_limits<Scalar>::infinity();
        for (const auto& s : states) k = std::min(k, s.kappas.minCoeff());
        return k;
    }
    Scalar kappa_max() const {
        Scalar k = 0;
        for (const auto& s : states) k = std::max(k, s.kappas.maxCoeff());
        return k;
    }

    bool operator==(const SpectralData&) const = default;
};

/// Degenerate-threshold state: kappa = sqrt(-E) in every channel.
template <typename Scalar>
BoundState<Scalar> degenerate_state(Scalar kappa, const VectorX<Scalar>& gammas) {
    BoundState<Scalar> s;
    s.energy = -kappa * kappa;
    s.kappas = VectorX<Scalar>::Constant(gammas.size(), kappa);
    s.gammas = gammas;
    return s;
}

template <typename Scalar>
SpectralData<Scalar> make_spectral(Eigen::Index channels, std::vector<BoundState<Scalar>> states) {
    SpectralData<Scalar> s;
    s.n_channels = channels;
    s.states = std::move(states);
    return s;
}

/// Every violated invariant, each prefixed with its field path under `prefix`.
template <typename Scalar>
std::vector<std::string> validate(const SpectralData<Scalar>& spec, const std::string& prefix = "spectral") {
    using std::abs;
    using std::sqrt;
    std::vector<std::string> problems;
    if (spec.n_channels < 1) {
        problems.push_back(prefix + ".n_channels: must be >= 1");
    }
    for (std::size_t nu = 0; nu < spec.states.size(); ++nu) {
        const auto& s = spec.states[nu];
        const std::string path = prefix + ".states[" + std::to_string(nu) + "]";
        if (!(s.energy < 0)) {
            problems.push_back(path + ".energy: bound-state energy must be negative");
        }
        if (s.kappas.size() != spec.n_channels) {
            problems.push_back(path + ".kappas: expected " + std::to_string(spec.n_channels) + " entries");
        }
        if (s.gammas.size() != spec.n_channels) {
            problems.push_back(path + ".gammas: expected " + std::to_string(spec.n_channels) + " entries");
        }
        for (Eigen::Index a = 0; a < s.kappas.size(); ++a) {
            const std::string kpath = path + ".kappas[" + std::to_string(a) + "]";
            if (!(s.kappas[a] > 0)) {
                problems.push_back(kpath + ": decay constant must be positive");
            } else if (spec.thresholds == ThresholdMode::degenerate && s.energy < 0 &&
                       abs(s.kappas[a] - sqrt(-s.energy)) > Scalar(1e-12) * sqrt(-s.energy)) {
                problems.push_back(kpath + ": degenerate thresholds require kappa = sqrt(-energy)");
            }
        }
        if (s.gammas.size() > 0 && s.gammas.cwiseAbs().maxCoeff() == Scalar(0)) {
            problems.push_back(path + ".gammas: at least one entry must be nonzero");
        }
        for (std::size_t mu = 0; mu < nu; ++mu) {
            if (spec.states[mu].energy == s.energy) {
                problems.push_back(path + ".energy: duplicates states[" + std::to_string(mu) + "].energy");
            }
        }
    }
    return problems;
}

template <typename Scalar>
void require_valid(const SpectralData<Scalar>& spec) {
    const auto problems = validate(spec);
    if (!problems.empty()) {
        std::string msg = "invalid spectral data:";
        for (const auto& p : problems) msg += "\n  " + p;
        throw ConfigError(msg);
    }
}

namespace detail {

/// U_{a nu}(x) = gamma_a^nu exp(-kappa_a^nu x) and the decay constants K_{a nu}.
template <typename Scalar>
void channel_modes(const SpectralData<Scalar>& spec, Scalar x, MatrixX<Scalar>& U, MatrixX<Scalar>& K) {
    using std::exp;
    const Eigen::Index m = spec.n_channels;
    const Eigen::Index n = spec.n_states();
    U.resize(m, n);
    K.resize(m, n);
    for (Eigen::Index nu = 0; nu < n; ++nu) {
        const auto& s = spec.states[static_cast<std::size_t>(nu)];
        for (Eigen::Index a = 0; a < m; ++a) {
            K(a, nu) = s.kappas[a];
            U(a, nu) = s.gammas[a] * exp(-s.kappas[a] * x);
        }
    }
}

template <typename Scalar>
MatrixX<Scalar> p_matrix_from_modes(const MatrixX<Scalar>& U, const MatrixX<Scalar>& K) {
    const Eigen::Index n = U.cols();
    MatrixX<Scalar> P = MatrixX<Scalar>::Identity(n, n);
    for (Eigen::Index a = 0; a < U.rows(); ++a) {
        for (Eigen::Index nu = 0; nu < n; ++nu) {
            for (Eigen::Index la = 0; la < n; ++la) {
                P(nu, la) += U(a, nu) * U(a, la) / (K(a, nu) + K(a, la));
            }
        }
    }
    return P;
}

template <typename Scalar>
Eigen::LLT<MatrixX<Scalar>> factor(const MatrixX<Scalar>& P, Scalar x) {
    if (!P.allFinite()) {
        throw SingularConfigurationError(static_cast<double>(x));
    }
    Eigen::LLT<MatrixX<Scalar>> llt(P);
    if (llt.info() != Eigen::Success) {
        throw SingularConfigurationError(static_cast<double>(x));
    }
    return llt;
}

template <typename Scalar>
MatrixX<Scalar> symmetrized(const MatrixX<Scalar>& A) {
    return (A + A.transpose()) / Scalar(2);
}

} // namespace detail

/// P_{nu lambda}(x) = delta + sum_a gamma_a^nu gamma_a^lambda e^{-(k^nu_a+k^lambda_a)x}/(k^nu_a+k^lambda_a).
/// Throws SingularConfigurationError when P(x) is not positive definite.
template <typename Scalar>
MatrixX<Scalar> p_matrix(const SpectralData<Scalar>& spec, Scalar x) {
    MatrixX<Scalar> U, K;
    detail::channel_modes(spec, x, U, K);
    MatrixX<Scalar> P = detail::symmetrized(detail::p_matrix_from_modes(U, K));
    detail::factor(P, x);
    return P;
}

template <typename Scalar = double>
struct PotentialSample {
    Scalar q{};        // channel average (V_11 + ... + V_mm)/m; for m = 2 this is (V11+V22)/2
    MatrixX<Scalar> V; // symmetric m x m
};

/// Potential, its first x-derivative and the bracket M(x) = U P^{-1} U^T, all in closed form.
template <typename Scalar = double>
struct PotentialJet {
    Scalar q{};
    MatrixX<Scalar> M;
    MatrixX<Scalar> V;
    MatrixX<Scalar> dV;
};

/// V(x) = 2 d/dx [U P^{-1} U^T] with the derivative taken analytically.
///
/// With U' = -K.U and P' = -U^T U the bracket obeys M' = G + G^T + M^2,
/// G = U' P^{-1} U^T, and differentiating once more gives V' without any
/// numerical differencing.
template <typename Scalar>
PotentialJet<Scalar> potential_jet(const SpectralData<Scalar>& spec, Scalar x) {
    const Eigen::Index m = spec.n_channels;
    PotentialJet<Scalar> jet;
    if (spec.n_states() == 0) {
        jet.M = MatrixX<Scalar>::Zero(m, m);
        jet.V = MatrixX<Scalar>::Zero(m, m);
        jet.dV = MatrixX<Scalar>::Zero(m, m);
        return jet;
    }
    MatrixX<Scalar> U, K;
    detail::channel_modes(spec, x, U, K);
    const MatrixX<Scalar> P = detail::symmetrized(detail::p_matrix_from_modes(U, K));
    const auto llt = detail::factor(P, x);

    const MatrixX<Scalar> dU = -K.cwiseProduct(U);
    const MatrixX<Scalar> ddU = K.cwiseProduct(K).cwiseProduct(U);
    const MatrixX<Scalar> W = llt.solve(U.transpose());

    const MatrixX<Scalar> M = detail::symmetrized<Scalar>(U * W);
    const MatrixX<Scalar> G = dU * W;
    const MatrixX<Scalar> dM = detail::symmetrized<Scalar>(G + G.transpose() + M * M);
    const MatrixX<Scalar> dG = ddU * W + G * M + dU * llt.solve(dU.transpose());
    const MatrixX<Scalar> ddM = detail::symmetrized<Scalar>(dG + dG.transpose() + dM * M + M * dM);

    jet.M = M;
    jet.V = Scalar(2) * dM;
    jet.dV = Scalar(2) * ddM;
    jet.q = jet.V.trace() / Scalar(m);
    if (!jet.V.allFinite() || !jet.dV.allFinite()) {
        throw SingularConfigurationError(static_cast<double>(x));
    }
    return jet;
}

template <typename Scalar>
PotentialSample<Scalar> potential_matrix(const SpectralData<Scalar>& spec, Scalar x) {
    auto jet = potential_jet(spec, x);
    return {jet.q, std::move(jet.V)};
}

enum class JostSign { plus = 1, minus = -1 };

/// Jost matrix F^{+-}_{a a'}(k, x). Column a' solves -F'' + V F = k_{a'}^2 F with
/// F -> exp(+-i k x) e_{a'} as x -> +infinity. The tail integral is taken in closed form.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>
jost_solution(const SpectralData<Scalar>& spec, const Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>& k,
              JostSign sign, Scalar x) {
    using Complex = std::complex<Scalar>;
    using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
    using std::abs;
    using std::exp;
    const Eigen::Index m = spec.n_channels;
    if (k.size() != m) {
        throw ConfigError("jost_solution: expected one momentum per channel");
    }
    const Scalar s = sign == JostSign::plus ? Scalar(1) : Scalar(-1);
    const Complex I(0, 1);

    CMatrix F = CMatrix::Zero(m, m);
    for (Eigen::Index a = 0; a < m; ++a) F(a, a) = exp(s * I * k[a] * x);
    const Eigen::Index n = spec.n_states();
    if (n == 0) return F;

    MatrixX<Scalar> U, K;
    detail::channel_modes(spec, x, U, K);
    const auto llt = detail::factor(detail::symmetrized(detail::p_matrix_from_modes(U, K)), x);

    // C_{lambda a'} = gamma_{a'}^lambda exp(-(kappa - s i k)x) / (kappa - s i k)
    CMatrix C(n, m);
    for (Eigen::Index la = 0; la < n; ++la) {
        const auto& st = spec.states[static_cast<std::size_t>(la)];
        for (Eigen::Index a = 0; a < m; ++a) {
            const Complex rate = Complex(st.kappas[a]) - s * I * k[a];
            if (abs(rate) <= Scalar(64) * std::numeric_limits<Scalar>::epsilon() * (Scalar(1) + st.kappas[a])) {
                throw PoleConfigurationError("jost_solution: kappa -+ ik vanishes for state " + std::to_string(la) +
                                             ", channel " + std::to_string(a));
            }
            C(la, a) = st.gammas[a] * exp(-rate * x) / rate;
        }
    }
    const MatrixX<Scalar> re = llt.solve(C.real());
    const MatrixX<Scalar> im = llt.solve(C.imag());
    F -= U.template cast<Complex>() * (re.template cast<Complex>() + I * im.template cast<Complex>());
    return F;
}

/// Bound-state spinor Phi_a(E_nu, x) = sum_a' F^+_{a a'}(i kappa_nu, x) gamma^nu_a'.
///
/// At k = i kappa_nu the tail sum collapses to P - I, so the spinor equals
/// U(x) P^{-1}(x) e_nu; that form is used here since it has no cancellation
/// on the far left where exp(-kappa x) is large.
template <typename Scalar>
VectorX<Scalar> bound_state_at(const SpectralData<Scalar>& spec, Eigen::Index nu, Scalar x) {
    if (nu < 0 || nu >= spec.n_states()) {
        throw ConfigError("bound_state: state index " + std::to_string(nu) + " out of range");
    }
    MatrixX<Scalar> U, K;
    detail::channel_modes(spec, x, U, K);
    const auto llt = detail::factor(detail::symmetrized(detail::p_matrix_from_modes(U, K)), x);
    const VectorX<Scalar> col = llt.solve(VectorX<Scalar>::Unit(spec.n_states(), nu));
    return U * col;
}

/// Single-soliton center ln(c)/(2 kappa), c = |gamma|^2/(2 kappa).
template <typename Scalar>
Scalar soliton_center(const BoundState<Scalar>& s) {
    using std::log;
    const Scalar kappa = s.kappas.minCoeff();
    return log(s.gammas.squaredNorm() / (Scalar(2) * kappa)) / (Scalar(2) * kappa);
}

/// Grid wide enough that every bound state has decayed to ~1e-10 of its peak
/// (so exp(-2 kappa_min |x_edge - x0|) ~ 1e-20), with spacing <= `spacing`.
template <typename Scalar>
Grid default_grid(const SpectralData<Scalar>& spec, double spacing = 0.01) {
    using std::abs;
    if (spec.n_states() == 0) {
        return Grid{-10.0, 10.0, static_cast<Eigen::Index>(2 * std::ceil(10.0 / spacing) + 1)};
    }
    const double kmin = static_cast<double>(spec.kappa_min());
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    if (spec.n_states() == 1) {
        lo = hi = static_cast<double>(soliton_center(spec.states.front()));
    } else {
        double scan_lo = std::numeric_limits<double>::infinity();
        double scan_hi = -scan_lo;
        for (const auto& s : spec.states) {
            scan_lo = std::min(scan_lo, static_cast<double>(soliton_center(s)));
            scan_hi = std::max(scan_hi, static_cast<double>(soliton_center(s)));
        }
        scan_lo -= 20.0 / kmin;
        scan_hi += 20.0 / kmin;
        const int n_scan = 4001;
        for (Eigen::Index nu = 0; nu < spec.n_states(); ++nu) {
            double best = -1.0;
            double where = 0.0;
            for (int i = 0; i < n_scan; ++i) {
                const double x = scan_lo + (scan_hi - scan_lo) * i / (n_scan - 1);
                const double amp = static_cast<double>(bound_state_at(spec, nu, Scalar(x)).norm());
                if (amp > best) {
                    best = amp;
                    where = x;
                }
            }
            lo = std::min(lo, where);
            hi = std::max(hi, where);
        }
    }
    const double half_width = std::log(1e10) / kmin + 2.0 / kmin;
    const double x_min = lo - half_width;
    const double x_max = hi + half_width;
    Eigen::Index intervals = static_cast<Eigen::Index>(std::ceil((x_max - x_min) / spacing));
    intervals += intervals % 2;
    return Grid{x_min, x_max, intervals + 1};
}

/// Bound state sampled on a grid together with its normalization bookkeeping.
struct BoundStateSample {
    SpinorField state;
    double quadrature_norm = 1.0; // Simpson norm before any renormalization
    bool renormalized = false;    // set when |norm - 1| > 1e-6
};

inline constexpr double kNormalizationTolerance = 1e-6;
inline constexpr double kTruncationTolerance = 1e-8;

template <typename Scalar>
BoundStateSample bound_state(const SpectralData<Scalar>& spec, Eigen::Index nu, const Grid& grid) {
    BoundStateSample out;
    out.state = SpinorField(grid, spec.n_channels);
    for (Eigen::Index i = 0; i < grid.n_points; ++i) {
        out.state.values.row(i) =
            bound_state_at(spec, nu, Scalar(grid.x(i))).template cast<double>().template cast<std::complex<double>>().transpose();
    }
    const Eigen::VectorXd amp = out.state.values.rowwise().norm();
    const double peak = amp.maxCoeff();
    const double edge = std::max(amp[0], amp[grid.n_points - 1]);
    if (edge > kTruncationTolerance * peak) {
        throw TruncationError("bound_state: grid [" + std::to_string(grid.x_min) + ", " + std::to_string(grid.x_max) +
                              "] too narrow, edge amplitude " + std::to_string(edge / peak) + " of peak");
    }
    out.quadrature_norm = l2_norm(out.state);
    if (std::abs(out.quadrature_norm - 1.0) > kNormalizationTolerance) {
        out.state.values /= out.quadrature_norm;
        out.renormalized = true;
    }
    return out;
}

} // namespace rotframe
