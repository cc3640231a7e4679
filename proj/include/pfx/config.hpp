#pragma once

#include "pfx/circuit.hpp"
#include "pfx/model.hpp"
#include "pfx/oracle.hpp"
#include "pfx/perturbation.hpp"
#include "pfx/sweep.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pfx {

// Run configuration in lab units, read from a JSON file. Every key is
// optional; unknown keys are rejected. Defaults:
//
//   qubit_p, qubit_f      {"omega_ghz": 1.0, "g_over_omega": 0.19}
//   r_over_lambda         0.125       separation in units of P's wavelength
//   t_on_ns, t_off_ns     0.02, 0.0
//   cutoff_multiplier     1000        omega_c / Omega_P
//   switching             {"profile": "sharp" | "linear" | "gaussian", "ramp_ns": 0}
//   speed_m_per_s         1.0e8       only sets the length scale in reports
//   validity_threshold    0.1
//   strict                false
//   workers               1           0 = hardware concurrency
//   output                "out"
//   quadrature            {"relative_tolerance": 1e-9, "max_subdivisions": 400000, "tail_factor": 20}
//   sweep                 {"axis1": {"path", "min", "max", "n"}, "axis2": {...}, "outputs": [...]}
//   oracle                {"g_over_omega": null, "cutoff_multiplier": 5, "n_modes": 128,
//                          "k_max_over_cutoff": 12, "photon_truncation": 2, "time_step": 0,
//                          "integrator_order": 4, "convergence_modes": [32, 64, 128]}
//   regions               {"t_on_max_ns": 0.15, "t_off_max_ns": 0.15, "grid": 61}
//   circuit               {"e_j": 1, "alpha": 0.8, "alpha4": 0.1, "f1": 0.5, "f2": 0.75, "f3": 1,
//                          "f3_points": 101, "potential_points": 41, "field_value": 0,
//                          "switch_start": 1, "switch_end": 0.5, "switch_ns": 0.1,
//                          "switch_samples": 201}
//
// Sweep axis paths are lab names: t_on_ns, t_off_ns, g_over_omega,
// qubit_p.g_over_omega, qubit_f.g_over_omega, qubit_f.omega_ghz,
// r_over_lambda, cutoff_multiplier, ramp_ns.

struct LabQubit {
    double omega_ghz = 1.0;  // Omega / 2 pi
    double g_over_omega = 0.19;
};

struct LabAxis {
    std::string path;
    double min = 0;
    double max = 1;
    std::size_t n = 2;
};

struct QuadratureSection {
    double relative_tolerance = 1e-9;
    std::size_t max_subdivisions = 400000;
    double tail_factor = 20.0;
};

struct SweepSection {
    std::optional<LabAxis> axis1;
    std::optional<LabAxis> axis2;
    std::vector<std::string> outputs;
};

struct OracleSection {
    std::optional<double> g_over_omega;  // overrides both qubits for the oracle run
    double cutoff_multiplier = 5.0;
    std::size_t n_modes = 128;
    double k_max_over_cutoff = 12.0;
    int photon_truncation = 2;
    double time_step = 0.0;  // natural units; 0 = automatic
    int integrator_order = 4;
    std::vector<std::size_t> convergence_modes = {32, 64, 128};
};

struct RegionsSection {
    double t_on_max_ns = 0.15;
    double t_off_max_ns = 0.15;
    std::size_t grid = 61;
};

struct CircuitSection {
    CircuitParams params{};
    std::size_t f3_points = 101;
    std::size_t potential_points = 41;
    double field_value = 0.0;
    double switch_start = 1.0;
    double switch_end = 0.5;
    double switch_ns = 0.1;
    std::size_t switch_samples = 201;
};

struct RunConfig {
    LabQubit qubit_p{};
    LabQubit qubit_f{};
    double r_over_lambda = 0.125;
    double t_on_ns = 0.02;
    double t_off_ns = 0.0;
    double cutoff_multiplier = 1000.0;
    std::string profile = "sharp";
    double ramp_ns = 0.0;
    double speed_m_per_s = 1.0e8;
    double validity_threshold = kDefaultValidityThreshold;
    bool strict = false;
    unsigned workers = 1;
    std::string output = "out";
    QuadratureSection quadrature{};
    SweepSection sweep{};
    OracleSection oracle{};
    RegionsSection regions{};
    CircuitSection circuit{};
};

// All parsers throw ConfigError.
RunConfig parse_config(std::string_view json_text, const std::vector<std::string>& overrides = {});
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

// Fully resolved configuration as canonical JSON (sorted keys, defaults
// filled in).
std::string to_json(const RunConfig& config);

// FNV-1a over to_json with `workers` and `output` removed, so that neither
// changes emitted files.
std::string config_hash(const RunConfig& config);

// Lab to natural units (hbar = v = Omega_P = 1) for the point described by
// the top-level fields.
ModelParams natural_params(const RunConfig& config);
AmplitudeOptions amplitude_options(const RunConfig& config);

// Maps a lab axis to the natural sweep path and the factor with
// natural = factor * lab. Throws ConfigError for unknown paths.
struct AxisMapping {
    std::string natural_path;
    double factor;
};
AxisMapping map_axis(const RunConfig& config, std::string_view lab_path);

// Natural model and lattice used by the oracle command.
ModelParams oracle_params(const RunConfig& config);
LatticeConfig oracle_lattice(const RunConfig& config, std::size_t n_modes);

}  // namespace pfx
