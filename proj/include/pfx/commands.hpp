#pragma once

#include "pfx/config.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pfx {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitValidity = 2;

struct CommandOutcome {
    int exit_code = kExitOk;
    std::string report;              // human-readable summary
    std::vector<std::string> files;  // paths written, in order
};

// Sweep described by config.sweep, evaluated at natural-unit axis values.
// `lab` holds the same rows with axis values in configured units.
struct LabSweep {
    SweepResult natural;
    SweepResult lab;
    AxisMapping axis1{};
    std::optional<AxisMapping> axis2;
};

LabSweep run_lab_sweep(const RunConfig& config);

// Each command writes into config.output (created if missing) and throws
// pfx::Error on configuration, numerical or I/O failure. Strict-mode validity
// breaches surface as ValidityBreach (point, oracle) or as exit_code 2 after
// the files are written (sweep).
//
//   point    point.csv
//   sweep    sweep.csv, sweep_long.csv, plus peaks.csv (1D) or boundaries.csv
//            (t_on_ns x t_off_ns grids)
//   regions  boundaries.csv, regions.csv
//   circuit  circuit_f3.csv, circuit_potential.csv, circuit_switch.csv
//   oracle   oracle.csv, oracle_reference.csv, convergence.csv
CommandOutcome cmd_point(const RunConfig& config);
CommandOutcome cmd_sweep(const RunConfig& config);
CommandOutcome cmd_regions(const RunConfig& config);
CommandOutcome cmd_circuit(const RunConfig& config);
CommandOutcome cmd_oracle(const RunConfig& config);

// Dispatch by subcommand name; throws InvalidArgument for unknown names.
CommandOutcome run_command(std::string_view name, const RunConfig& config);

}  // namespace pfx
