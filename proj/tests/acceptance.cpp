// One PASS/FAIL line per acceptance criterion. Criteria 1-9 run in process,
// criterion 10 drives the command-line tool.

#include "rotframe/verify.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#ifndef ROTFRAME_CLI
#error "ROTFRAME_CLI must name the rotframe executable"
#endif

namespace {

constexpr std::array<const char*, 10> kTitles{
    "one-soliton golden values",
    "transparency against the scattering oracle",
    "stationary eigen-residuals",
    "frame stationarity and dual construction",
    "exact TDSE residual and grid oracle",
    "phase identities",
    "cranked spin against RK4",
    "adiabatic (Berry) limit",
    "unitarity, orthogonality, vector potential",
    "verify subcommand exit codes",
};

int exit_status(const std::string& command) {
    const int raw = std::system(command.c_str());
    if (raw == -1) return -1;
#ifdef WEXITSTATUS
    return WEXITSTATUS(raw);
#else
    return raw;
#endif
}

bool report(int criterion, bool pass, double seconds) {
    std::printf("criterion %2d %s  %s  (%.1f s)\n", criterion, pass ? "PASS" : "FAIL",
                kTitles[static_cast<std::size_t>(criterion - 1)], seconds);
    std::fflush(stdout);
    return pass;
}

} // namespace

int main() {
    using clock = std::chrono::steady_clock;
    bool ok = true;

    for (int c = 1; c <= 9; ++c) {
        const auto start = clock::now();
        const auto checks = rotframe::run_criterion(c);
        for (const auto& r : checks) {
            std::printf("    %s%-28s %.3e\n", r.pass ? "" : "[FAIL] ", r.name.c_str(), r.value);
        }
        const double secs = std::chrono::duration<double>(clock::now() - start).count();
        ok &= report(c, rotframe::all_passed(checks), secs);
    }

    const auto start = clock::now();
    const auto out = std::filesystem::temp_directory_path() / "rotframe_acceptance";
    std::filesystem::remove_all(out);
    const std::string base = std::string("\"") + ROTFRAME_CLI + "\" verify --out \"" + out.string() + "\"";
    const int clean = exit_status(base + " > \"" + (out.string() + ".log") + "\" 2>&1");
    const int perturbed = exit_status(base + " --perturb > \"" + (out.string() + ".perturb.log") + "\" 2>&1");
    std::printf("    verify exit %d (expect 0), verify --perturb exit %d (expect 2)\n", clean, perturbed);
    const bool csv = std::filesystem::exists(out / "verify.csv");
    if (!csv) std::printf("    [FAIL] verify.csv missing\n");
    ok &= report(10, clean == 0 && perturbed == 2 && csv,
                 std::chrono::duration<double>(clock::now() - start).count());

    std::printf("%s\n", ok ? "all acceptance criteria PASS" : "acceptance FAILED");
    return ok ? 0 : 1;
}
