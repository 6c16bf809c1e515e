#include "rotframe/spin_model.hpp"

#include "rotframe/phases.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace rotframe {

namespace {

constexpr double pi = std::numbers::pi;

Eigen::Index label_index(Spin s, int m) {
    if (std::abs(m) > s.twice_j || (s.twice_j - m) % 2 != 0) {
        throw ConfigError("state label m = " + std::to_string(m) + " is not a Sigma_3 eigenvalue for j = " +
                          std::to_string(s.j()));
    }
    return (s.twice_j - m) / 2;
}

} // namespace

double CrankedModel::period() const {
    return pi / omega;
}

CrankedModel make_cranked_model(Spin spin, double omega_bar, double theta_bar, double omega) {
    std::string problems;
    if (!(omega_bar > 0.0)) problems += " omega_bar must be positive;";
    if (!(theta_bar >= 0.0 && theta_bar <= pi)) problems += " theta_bar must lie in [0, pi];";
    if (!(omega >= 0.0)) problems += " omega must be non-negative;";
    if (spin.twice_j < 1) problems += " spin must be >= 1/2;";
    if (!problems.empty()) throw ConfigError("cranked model:" + problems);
    return CrankedModel{spin, omega_bar, theta_bar, omega};
}

Eigen::MatrixXcd sigma3_analog(Spin s) {
    return 2.0 * jz_matrix(s);
}

std::vector<int> state_labels(Spin s) {
    std::vector<int> labels;
    for (int m = s.twice_j; m >= -s.twice_j; m -= 2) labels.push_back(m);
    return labels;
}

Eigen::MatrixXcd frame_rotation(const CrankedModel& model, double t) {
    const Eigen::MatrixXcd sigma3 = sigma3_analog(model.spin);
    Eigen::VectorXcd diag(sigma3.rows());
    for (Eigen::Index k = 0; k < diag.size(); ++k) {
        diag[k] = std::polar(1.0, -std::real(sigma3(k, k)) * model.omega * t);
    }
    return diag.asDiagonal();
}

SpinMatrices build_matrices(const CrankedModel& model, double t) {
    const Eigen::MatrixXcd U = rotation_matrix(model.theta_bar, model.spin).cast<std::complex<double>>();
    const Eigen::MatrixXcd sigma3 = sigma3_analog(model.spin);
    SpinMatrices out;
    out.hbar = model.omega_bar * U * sigma3 * U.adjoint();
    out.h0 = out.hbar + model.omega * sigma3;
    const Eigen::MatrixXcd S = frame_rotation(model, t);
    out.ht = S * out.h0 * S.adjoint();
    return out;
}

Eigen::VectorXcd rotated_eigenvector(const CrankedModel& model, int m) {
    const Eigen::Index k = label_index(model.spin, m);
    return rotation_matrix(model.theta_bar, model.spin).col(k).cast<std::complex<double>>();
}

double spin_alignment(const CrankedModel& model, int m) {
    label_index(model.spin, m);
    return m * std::cos(model.theta_bar);
}

double spin_alignment_matrix(const CrankedModel& model, int m) {
    const Eigen::Index k = label_index(model.spin, m);
    const Eigen::MatrixXcd U = rotation_matrix(model.theta_bar, model.spin).cast<std::complex<double>>();
    const Eigen::MatrixXcd rotated = U.adjoint() * sigma3_analog(model.spin) * U;
    return std::real(rotated(k, k));
}

SpinPhaseReport spin_phases(const CrankedModel& model, int m) {
    if (!(model.omega > 0.0)) {
        throw ConfigError("spin_phases: cranking frequency must be positive (T = pi / omega)");
    }
    const Eigen::VectorXcd target = rotated_eigenvector(model, m);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(build_matrices(model, 0.0).hbar);
    Eigen::Index best = 0;
    double best_overlap = -1.0;
    for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
        const double overlap = std::abs(eig.eigenvectors().col(k).dot(target));
        if (overlap > best_overlap) {
            best_overlap = overlap;
            best = k;
        }
    }

    SpinPhaseReport r;
    r.m = m;
    r.energy = eig.eigenvalues()[best];
    r.alignment = spin_alignment(model, m);
    const double T = model.period();
    r.geometric = m * pi * (1.0 - std::cos(model.theta_bar));
    r.dynamical = r.energy * T + m * pi * std::cos(model.theta_bar);
    r.total = r.dynamical + r.geometric;
    r.total_mod = principal_value(r.total);
    r.geometric_mod = principal_value(r.geometric);
    return r;
}

double berry_limit(double theta, double m) {
    return m * pi * (1.0 - std::cos(theta));
}

std::vector<SweepRow> adiabatic_sweep(Spin spin, int m, const PolarField<double>& lab_field,
                                      std::span<const double> omegas) {
    label_index(spin, m);
    if (!(lab_field.magnitude > 0.0)) {
        throw ConfigError("adiabatic_sweep: lab field magnitude must be positive");
    }
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        if (!(omegas[i] >= 0.0) || (i > 0 && !(omegas[i] < omegas[i - 1]))) {
            throw ConfigError("adiabatic_sweep: omegas must be non-negative and strictly decreasing");
        }
    }
    const double berry = berry_limit(lab_field.angle, m);
    std::vector<SweepRow> rows;
    for (double omega : omegas) {
        SweepRow row;
        row.omega = omega;
        row.omega_ratio = omega / lab_field.magnitude;
        row.berry = berry;
        const PolarField<double> bar = undress(lab_field, omega);
        if (bar.degenerate) {
            row.flagged = true;
            row.geometric = std::numeric_limits<double>::quiet_NaN();
            row.deviation = std::numeric_limits<double>::quiet_NaN();
            rows.push_back(row);
            continue;
        }
        if (omega == 0.0) {
            row.geometric = m * pi * (1.0 - std::cos(bar.angle));
        } else {
            const auto model = make_cranked_model(spin, bar.magnitude, bar.angle, omega);
            row.geometric = spin_phases(model, m).geometric;
        }
        row.deviation = std::abs(row.geometric - berry);
        rows.push_back(row);
    }
    return rows;
}

} // namespace rotframe
