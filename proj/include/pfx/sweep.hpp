#pragma once

#include "pfx/model.hpp"
#include "pfx/perturbation.hpp"
#include "pfx/regions.hpp"

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace pfx {

// Paths address natural-unit fields of ModelParams:
//   schedule.t_on, schedule.t_off, coupling_ratio (both qubits),
//   qubit_p.coupling_ratio, qubit_f.coupling_ratio, qubit_f.gap,
//   qubit_p.position, qubit_f.position, separation (moves F), field.uv_cutoff,
//   field.ramp
struct SweepAxis {
    std::string path;
    double min = 0;
    double max = 1;
    std::size_t n_points = 2;

    // Endpoints are reproduced exactly.
    double value(std::size_t i) const;
};

bool is_sweep_path(std::string_view path);
void apply_path(ModelParams& params, std::string_view path, double value);
double read_path(const ModelParams& params, std::string_view path);

// Column names in their fixed order; `axis1` and `axis2` are always written.
const std::vector<std::string>& sweep_columns();

struct SweepSpec {
    ModelParams base{};
    SweepAxis axis1{};
    std::optional<SweepAxis> axis2;
    std::vector<std::string> outputs;  // subset of sweep_columns(); empty = all
    AmplitudeOptions options{};
};

// Throws InvalidArgument.
void validate(const SweepSpec& spec);

struct SweepRow {
    double axis1 = 0;
    double axis2 = 0;  // NaN for 1D sweeps
    RegionLabel region = RegionLabel::I;
    bool on_boundary = false;
    double p_a = 0;
    double p_b = 0;
    double x_abs = 0;
    double raw_excess = 0;
    double concurrence = 0;
    bool valid_p = true;
    bool valid_f = true;
    double err_bound = 0;
    std::string error;  // empty unless this point failed
};

struct Provenance {
    std::string spec_hash;  // FNV-1a 64 over the canonical spec text, hex
    std::string version;
};

struct SweepResult {
    SweepSpec spec;
    std::size_t n1 = 0;
    std::size_t n2 = 1;
    std::vector<SweepRow> rows;  // row-major: index = i1 * n2 + i2
    Provenance provenance;

    const SweepRow& at(std::size_t i1, std::size_t i2 = 0) const { return rows[i1 * n2 + i2]; }
};

// Values depend only on the sweep definition; `workers` (0 = hardware concurrency) only
// changes wall time.
SweepResult run_sweep(const SweepSpec& spec, unsigned workers = 1);

std::string canonical_text(const SweepSpec& spec);
std::string fnv1a_hex(std::string_view text);

struct Peak {
    std::size_t index = 0;   // grid index of the local maximum
    double position = 0;     // parabolic refinement, clamped to neighbouring nodes
    double value = 0;        // refined raw_excess
    // Distance along the cut to the nearest region edge, and its name; the
    // distance is +inf when no edge line crosses the cut direction.
    double boundary_distance = 0;
    std::string nearest_boundary;
};

// Strict three-point local maxima of y on an increasing grid x. Throws
// NoPeaks when none exist.
std::vector<Peak> locate_peaks(const std::vector<double>& x, const std::vector<double>& y);

enum class SweepDim { Axis1, Axis2 };

// Peaks of raw_excess along one axis with the other held at `fixed_index`.
// Boundary distances are filled in from the region slacks.
std::vector<Peak> locate_peaks(const SweepResult& result, SweepDim along, std::size_t fixed_index = 0);

// Locale-independent, 12 significant digits; "nan", "inf", "-inf".
std::string format_number(double value);

// Header line plus one line per row in the fixed column order, restricted to
// `outputs` (empty = all). The axis2 field is left empty when !has_axis2.
void write_rows_csv(std::ostream& os, const std::vector<SweepRow>& rows, bool has_axis2,
                    const std::vector<std::string>& outputs);

// Comment lines are written first, each prefixed with "# ".
void write_sweep_csv(std::ostream& os, const SweepResult& result, const std::vector<std::string>& comments);
// axis1,axis2,variable,value for every selected numeric column.
void write_sweep_long_csv(std::ostream& os, const SweepResult& result, const std::vector<std::string>& comments);

}  // namespace pfx
