#include "rotframe/oracle.hpp"

#include "rotframe/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace rotframe::oracle {

namespace {

constexpr std::complex<double> I(0.0, 1.0);

Eigen::VectorXd simpson_weights_local(int n_intervals, double h) {
    Eigen::VectorXd w(n_intervals + 1);
    for (int i = 0; i <= n_intervals; ++i) w[i] = (i % 2 == 1) ? 4.0 : 2.0;
    w[0] = 1.0;
    w[n_intervals] = 1.0;
    return w * (h / 3.0);
}

void check_steps(const PropagationConfig& cfg) {
    if (cfg.t_steps < 128) {
        throw ConfigError("propagation needs at least 128 time steps, got " + std::to_string(cfg.t_steps));
    }
}

} // namespace

SpinPropagation propagate_spin(const std::function<Eigen::MatrixXcd(double)>& hamiltonian,
                               const Eigen::VectorXcd& psi0, double T, const PropagationConfig& cfg) {
    check_steps(cfg);
    const int n = cfg.t_steps + (cfg.t_steps % 2);
    const double dt = T / n;
    const double norm0 = psi0.squaredNorm();

    auto rhs = [&](double t, const Eigen::VectorXcd& psi) -> Eigen::VectorXcd { return -I * (hamiltonian(t) * psi); };

    Eigen::VectorXd energy(n + 1);
    energy[0] = std::real(psi0.dot(hamiltonian(0.0) * psi0)) / norm0;

    SpinPropagation out;
    Eigen::VectorXcd psi = psi0;
    std::complex<double> previous = psi0.squaredNorm();
    double accumulated = 0.0;
    bool winding_defined = true;
    for (int k = 0; k < n; ++k) {
        const double t = dt * k;
        const Eigen::VectorXcd k1 = rhs(t, psi);
        const Eigen::VectorXcd k2 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k1);
        const Eigen::VectorXcd k3 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k2);
        const Eigen::VectorXcd k4 = rhs(t + dt, psi + dt * k3);
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const std::complex<double> z = psi0.dot(psi) / norm0;
        out.min_overlap = std::min(out.min_overlap, std::abs(z));
        if (std::abs(z) < 1e-3) {
            winding_defined = false;
        } else if (winding_defined) {
            const double step = std::arg(z / previous);
            if (std::abs(step) >= std::numbers::pi / 4) {
                throw ResolutionError("propagate_spin: phase increment " + std::to_string(step) +
                                      " per step; increase t_steps");
            }
            accumulated += step;
        }
        previous = z;
        energy[k + 1] = std::real(psi.dot(hamiltonian(t + dt) * psi)) / psi.squaredNorm();
    }

    out.norm_drift = std::abs(std::sqrt(psi.squaredNorm()) - std::sqrt(norm0));
    if (out.norm_drift > 1e-6) {
        throw ResolutionError("propagate_spin: norm drift " + std::to_string(out.norm_drift) + "; increase t_steps");
    }
    const std::complex<double> overlap = psi0.dot(psi);
    out.psi_T = psi;
    out.overlap_phase = std::arg(overlap);
    out.fidelity = std::abs(overlap) / norm0;
    if (winding_defined) out.tracked_phase = accumulated;
    out.energy_integral = simpson_weights_local(n, dt).dot(energy);
    return out;
}

SpinorField propagate_grid(const GridHamiltonian& h, const SpinorField& psi0, double t0, double duration,
                           const PropagationConfig& cfg) {
    check_steps(cfg);
    if (psi0.components() != 2 || !(psi0.grid == h.grid)) {
        throw GridMismatchError("propagate_grid: initial state must be a two-component field on the Hamiltonian grid");
    }
    const Eigen::Index n = h.grid.n_points;
    const double dx = h.grid.step();
    const double dt = duration / cfg.t_steps;
    const double kinetic_diag = 2.0 / (dx * dx);
    const std::complex<double> c = -I * (0.5 * dt) / (dx * dx); // off-diagonal block of (1 + i dt/2 H)

    std::vector<Eigen::Matrix2cd> inv_pivot(static_cast<std::size_t>(n));
    std::vector<Eigen::Vector2cd> rhs(static_cast<std::size_t>(n));
    std::vector<Eigen::Vector2cd> psi(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) psi[static_cast<std::size_t>(i)] = psi0.values.row(i).transpose();

    auto edge_check = [&](int step) {
        const double edge = std::max(psi.front().norm(), psi.back().norm());
        if (edge > 1e-6) {
            throw BoundaryLeakError("propagate_grid: edge amplitude " + std::to_string(edge) + " at step " +
                                    std::to_string(step));
        }
    };
    edge_check(0);

    for (int step = 0; step < cfg.t_steps; ++step) {
        const double t_mid = t0 + dt * (step + 0.5);
        // block Thomas elimination of (1 + i dt/2 H) psi' = (1 - i dt/2 H) psi
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto u = static_cast<std::size_t>(i);
            const Eigen::Matrix2cd H_local =
                h.spin(i, t_mid) + Eigen::Matrix2cd::Identity() * std::complex<double>(kinetic_diag + h.q[i]);
            const Eigen::Matrix2cd half = (I * 0.5 * dt) * H_local;
            Eigen::Vector2cd b = psi[u] - half * psi[u];
            if (i > 0) b -= c * psi[u - 1];
            if (i + 1 < n) b -= c * psi[u + 1];

            Eigen::Matrix2cd pivot = Eigen::Matrix2cd::Identity() + half;
            if (i > 0) {
                pivot -= (c * c) * inv_pivot[u - 1];
                b -= c * (inv_pivot[u - 1] * rhs[u - 1]);
            }
            inv_pivot[u] = pivot.inverse();
            rhs[u] = b;
        }
        psi[static_cast<std::size_t>(n - 1)] = inv_pivot.back() * rhs.back();
        for (Eigen::Index i = n - 2; i >= 0; --i) {
            const auto u = static_cast<std::size_t>(i);
            psi[u] = inv_pivot[u] * (rhs[u] - c * psi[u + 1]);
        }
        edge_check(step + 1);
    }

    SpinorField out(psi0.grid, 2);
    for (Eigen::Index i = 0; i < n; ++i) out.values.row(i) = psi[static_cast<std::size_t>(i)].transpose();
    return out;
}

PotentialTable tabulate(const std::function<Eigen::MatrixXd(double)>& V, double x_min, double x_max,
                        Eigen::Index n_samples) {
    if (n_samples < 3 || n_samples % 2 == 0) {
        throw ConfigError("tabulate: need an odd number of samples >= 3");
    }
    PotentialTable table;
    table.x_min = x_min;
    table.h = (x_max - x_min) / static_cast<double>(n_samples - 1);
    table.values.reserve(static_cast<std::size_t>(n_samples));
    for (Eigen::Index i = 0; i < n_samples; ++i) table.values.push_back(V(x_min + table.h * static_cast<double>(i)));
    return table;
}

Eigen::MatrixXcd reflection_matrix(const PotentialTable& V, double k) {
    if (!(k > 0.0)) throw ConfigError("reflection_amplitudes: k must be positive");
    if (V.values.size() < 3 || V.values.size() % 2 == 0) {
        throw ConfigError("reflection_amplitudes: table needs an odd number of samples >= 3");
    }
    const Eigen::Index m = V.values.front().rows();
    const double edge = std::max(V.values.front().cwiseAbs().maxCoeff(), V.values.back().cwiseAbs().maxCoeff());
    if (edge > 1e-12) {
        throw TruncationError("reflection_amplitudes: potential has not decayed at the table edges (|V| = " +
                              std::to_string(edge) + ")");
    }

    // state Y = [psi; psi'] for m independent solutions, Y' = [psi'; (V - k^2) psi]
    auto deriv = [&](std::size_t sample, const Eigen::MatrixXcd& Y) {
        Eigen::MatrixXcd dY(2 * m, m);
        const Eigen::MatrixXcd shifted =
            (V.values[sample] - k * k * Eigen::MatrixXd::Identity(m, m)).cast<std::complex<double>>();
        dY.topRows(m) = Y.bottomRows(m);
        dY.bottomRows(m) = shifted * Y.topRows(m);
        return dY;
    };

    const double x_left = V.x_min;
    Eigen::MatrixXcd Y(2 * m, m);
    const std::complex<double> left_wave = std::exp(-I * k * x_left);
    Y.topRows(m) = left_wave * Eigen::MatrixXcd::Identity(m, m);
    Y.bottomRows(m) = (-I * k * left_wave) * Eigen::MatrixXcd::Identity(m, m);

    const double step = 2.0 * V.h;
    for (std::size_t s = 0; s + 2 < V.values.size(); s += 2) {
        const Eigen::MatrixXcd k1 = deriv(s, Y);
        const Eigen::MatrixXcd k2 = deriv(s + 1, Y + 0.5 * step * k1);
        const Eigen::MatrixXcd k3 = deriv(s + 1, Y + 0.5 * step * k2);
        const Eigen::MatrixXcd k4 = deriv(s + 2, Y + step * k3);
        Y += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    const double x_right = V.x_max();
    const Eigen::MatrixXcd psi = Y.topRows(m);
    const Eigen::MatrixXcd dpsi = Y.bottomRows(m);
    const Eigen::MatrixXcd incoming = 0.5 * std::exp(I * k * x_right) * (psi - dpsi / (I * k));
    const Eigen::MatrixXcd outgoing = 0.5 * std::exp(-I * k * x_right) * (psi + dpsi / (I * k));
    return outgoing * incoming.partialPivLu().inverse();
}

Eigen::VectorXcd reflection_amplitudes(const PotentialTable& V, double k, Eigen::Index incident_channel) {
    if (V.values.empty()) throw ConfigError("reflection_amplitudes: empty table");
    if (incident_channel < 0 || incident_channel >= V.values.front().rows()) {
        throw ConfigError("reflection_amplitudes: bad channel");
    }
    return reflection_matrix(V, k).col(incident_channel);
}

} // namespace rotframe::oracle
