#include "pfx/pfx.h"

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

namespace {

constexpr int kExitError = 1;
constexpr int kExitValidity = 2;

int report_failure(pfx_status s) {
    std::fprintf(stderr, "pfx: %s: %s\n", pfx_status_name(s), pfx_last_error());
    return s == PFX_E_VALIDITY ? kExitValidity : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Past-future vacuum correlation calculator"};
    app.set_version_flag("--version", std::string(pfx_version()));
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    int workers = -1;
    bool strict = false;
    std::string out_dir;
    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--set", overrides, "Override a config value, dotted.path=value (repeatable)");
    app.add_option("--workers", workers, "Worker threads for sweeps; 0 = all cores")->check(CLI::NonNegativeNumber);
    app.add_flag("--strict", strict, "Fail with exit code 2 when the perturbative validity margin is exceeded");
    app.add_option("--out", out_dir, "Output directory");

    const char* commands[][2] = {
        {"point", "Amplitudes, concurrence and fidelity bound at one schedule"},
        {"sweep", "Parameter sweep over sweep.axis1 (and sweep.axis2)"},
        {"regions", "Region boundary lines and a region map"},
        {"circuit", "Coupler tables: alpha_eff(f3), potential surface, switch profile"},
        {"oracle", "Truncated Fock space run compared with the perturbative result"},
    };
    for (const auto& c : commands) app.add_subcommand(c[0], c[1])->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }
    const std::string name = app.get_subcommands().front()->get_name();

    std::vector<const char*> raw;
    raw.reserve(overrides.size());
    for (const auto& o : overrides) raw.push_back(o.c_str());

    pfx_config* config = nullptr;
    const pfx_status loaded = config_path.empty()
                                  ? pfx_config_parse("{}", raw.data(), raw.size(), &config)
                                  : pfx_config_load(config_path.c_str(), raw.data(), raw.size(), &config);
    if (loaded != PFX_OK) return report_failure(loaded);

    pfx_status s = PFX_OK;
    if (workers >= 0) s = pfx_config_set_workers(config, static_cast<unsigned>(workers));
    if (s == PFX_OK && strict) s = pfx_config_set_strict(config, 1);
    if (s == PFX_OK && !out_dir.empty()) s = pfx_config_set_output(config, out_dir.c_str());

    int exit_code = 0;
    char* report = nullptr;
    if (s == PFX_OK) s = pfx_run_command(config, name.c_str(), &exit_code, &report);
    pfx_config_free(config);
    if (s != PFX_OK) return report_failure(s);
    if (report) std::fputs(report, stdout);
    pfx_string_free(report);
    if (exit_code == kExitValidity) std::fprintf(stderr, "pfx: validity margin exceeded (strict mode)\n");
    return exit_code;
}
