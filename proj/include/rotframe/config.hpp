#pragma once

#include "rotframe/bargmann.hpp"
#include "rotframe/grid.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rotframe {

struct FrameConfig {
    double omega = 0.5;
    bool operator==(const FrameConfig&) const = default;
};

struct TimeConfig {
    int periods = 1;
    int steps_per_period = 2048;
    bool operator==(const TimeConfig&) const = default;
};

/// Adiabatic sweep at a fixed lab field (Omega, theta) of H_0.
struct SweepConfig {
    double lab_magnitude = 1.0;
    double lab_theta = 1.5707963267948966;
    std::vector<double> omegas{0.1, 0.01, 0.001};
    bool operator==(const SweepConfig&) const = default;
};

struct SpinModelConfig {
    double j = 0.5;
    int m = 1; // Sigma_3 = 2 j_z eigenvalue
    double omega_bar = 1.0;
    double theta_bar = 1.0471975511965976;
    double omega = 0.5;
    std::optional<SweepConfig> sweep;
    bool operator==(const SpinModelConfig&) const = default;
};

struct OutputConfig {
    std::string directory = "out";
    std::vector<std::string> formats{"csv"};
    bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
    SpectralData<double> spectral;
    FrameConfig frame;
    std::optional<Grid> grid; // empty: sized automatically from the spectral data
    TimeConfig time;
    std::optional<SpinModelConfig> spin_model;
    OutputConfig output;

    bool operator==(const RunConfig&) const = default;
};

/// Parses and validates a JSON run configuration. On failure throws ConfigError
/// whose message lists every violated constraint with its field path.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::filesystem::path& path);

/// JSON text that parse_config maps back to an equal RunConfig.
std::string serialize_config(const RunConfig& config);

/// Grid of the run: the configured one or default_grid(spectral).
Grid resolve_grid(const RunConfig& config);

} // namespace rotframe
