#include "rotframe/tables.hpp"

#include "rotframe/errors.hpp"
#include "rotframe/field_map.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

namespace rotframe {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_csv(const Table& table) {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(table.header);
    for (const auto& r : table.rows) line(r);
    return out;
}

std::filesystem::path write_table(const std::filesystem::path& dir, const std::string& name, const Table& table) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw OutputError("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
    }
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot write " + path.string());
    out << to_csv(table);
    out.flush();
    if (!out) throw OutputError("write failed for " + path.string());
    return path;
}

namespace {

std::vector<Decomposition<double>> profile(const SpectralData<double>& spec, const Grid& grid) {
    if (spec.n_channels != 2) throw ConfigError("field tables need two channels");
    std::vector<Eigen::Matrix2d> samples;
    samples.reserve(static_cast<std::size_t>(grid.n_points));
    for (Eigen::Index i = 0; i < grid.n_points; ++i) samples.emplace_back(potential_matrix(spec, grid.x(i)).V);
    return decompose_profile<double>(samples);
}

std::vector<PolarField<double>> dressed_profile(const std::vector<Decomposition<double>>& bar, double omega) {
    std::vector<PolarField<double>> out;
    out.reserve(bar.size());
    for (std::size_t i = 0; i < bar.size(); ++i) {
        PolarField<double> d = dress(bar[i].field, omega);
        if (i > 0) d.angle = unwrap_near(d.angle, out.back().angle);
        out.push_back(d);
    }
    return out;
}

} // namespace

Table potential_table(const SpectralData<double>& spec, const Grid& grid) {
    Table t;
    t.header = {"x", "q", "V11", "V12", "V22"};
    require_valid(spec);
    for (Eigen::Index i = 0; i < grid.n_points; ++i) {
        const double x = grid.x(i);
        const auto p = potential_matrix(spec, x);
        const double v12 = spec.n_channels > 1 ? p.V(0, 1) : 0.0;
        const double v22 = spec.n_channels > 1 ? p.V(1, 1) : 0.0;
        t.rows.push_back({format_double(x), format_double(p.q), format_double(p.V(0, 0)), format_double(v12),
                          format_double(v22)});
    }
    return t;
}

Table field_table(const SpectralData<double>& spec, const Grid& grid, double omega) {
    Table t;
    t.header = {"x", "omega_bar", "theta_bar", "omega_dressed", "theta_dressed"};
    require_valid(spec);
    const auto bar = profile(spec, grid);
    const auto dressed = dressed_profile(bar, omega);
    for (Eigen::Index i = 0; i < grid.n_points; ++i) {
        const auto u = static_cast<std::size_t>(i);
        t.rows.push_back({format_double(grid.x(i)), format_double(bar[u].field.magnitude),
                          format_double(bar[u].field.angle), format_double(dressed[u].magnitude),
                          format_double(dressed[u].angle)});
    }
    return t;
}

Table bfield_table(const SpectralData<double>& spec, const Grid& grid, double omega, int n_times, Eigen::Index max_x) {
    if (n_times < 2 || max_x < 2) throw ConfigError("bfield_table: need at least two times and two positions");
    if (!(omega > 0.0)) throw ConfigError("bfield_table: rotation frequency must be positive");
    Table t;
    t.header = {"t", "x", "B1", "B2", "B3"};
    require_valid(spec);
    const auto dressed = dressed_profile(profile(spec, grid), omega);
    const Eigen::Index stride = std::max<Eigen::Index>(1, (grid.n_points - 1 + max_x - 2) / (max_x - 1));
    const double T = std::numbers::pi / omega;
    for (int k = 0; k < n_times; ++k) {
        const double time = T * k / (n_times - 1);
        for (Eigen::Index i = 0; i < grid.n_points; i += stride) {
            const auto B = field_at_time(dressed[static_cast<std::size_t>(i)], omega, time);
            t.rows.push_back({format_double(time), format_double(grid.x(i)), format_double(B.x()),
                              format_double(B.y()), format_double(B.z())});
        }
    }
    return t;
}

Table phases_table(std::span<const PhaseReport> reports) {
    Table t;
    t.header = {"state", "branch", "total", "dynamical", "geometric", "aa", "sigma3"};
    for (const auto& r : reports) {
        t.rows.push_back({std::to_string(r.state), r.branch == Branch::upper ? "upper" : "lower",
                          format_double(r.total), format_double(r.dynamical), format_double(r.geometric),
                          format_double(r.aa_integral), format_double(r.spin_expectation)});
    }
    return t;
}

Table sweep_table(std::span<const SweepRow> rows) {
    Table t;
    t.header = {"omega_ratio", "geometric", "berry", "deviation"};
    for (const auto& r : rows) {
        t.rows.push_back({format_double(r.omega_ratio), format_double(r.geometric), format_double(r.berry),
                          format_double(r.deviation)});
    }
    return t;
}

} // namespace rotframe
