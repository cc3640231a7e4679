#pragma once

#include <utility>

namespace pfx {

enum class ProfileKind { Sharp, LinearRamp, GaussianRamp };

// Envelope applied inside each interaction window. `ramp` is the edge
// duration for the ramped kinds and is ignored for Sharp.
struct SwitchingProfile {
    ProfileKind kind = ProfileKind::Sharp;
    double ramp = 0.0;

    static SwitchingProfile sharp() { return {}; }
    static SwitchingProfile linear(double ramp) { return {ProfileKind::LinearRamp, ramp}; }
    static SwitchingProfile gaussian(double ramp) { return {ProfileKind::GaussianRamp, ramp}; }
};

struct QubitParams {
    double gap = 1.0;             // Omega_J, angular frequency
    double coupling_ratio = 0.0;  // g_J / Omega_J
    double position = 0.0;        // x_J

    // K_J = 4 d_J^2 N / (hbar^2 v) = 2 (g_J/Omega_J)^2
    double dimensionless_coupling() const { return 2.0 * coupling_ratio * coupling_ratio; }
};

struct FieldParams {
    double speed = 1.0;
    double uv_cutoff = 1000.0;
    SwitchingProfile profile{};
};

// P is active on [-t2, -t1], F on [t1, t2].
struct Schedule {
    double t_on = 1.0;
    double t_off = 0.0;

    double t1() const { return 0.5 * t_off; }
    double t2() const { return 0.5 * t_off + t_on; }
};

struct ModelParams {
    QubitParams qubit_p{};
    QubitParams qubit_f{};
    FieldParams field{};
    Schedule schedule{};

    double separation() const;
    double wavelength_p() const;
    double wavelength_f() const;
    // v T_on / r and v T_off / r; +infinity when r == 0.
    double xi_on() const;
    double xi_off() const;
};

// Scale factors recorded by to_natural_units: one natural time unit is
// `time` seconds (1/Omega_P) and one natural length unit is `length` metres.
struct UnitScale {
    double time = 1.0;
    double length = 1.0;
};

struct NaturalModel {
    ModelParams params;
    UnitScale scale;
};

// Throws InvalidArgument on non-finite entries or violated invariants.
void validate(const ModelParams& params);

// hbar = v = Omega_P = 1.
NaturalModel to_natural_units(const ModelParams& lab);
ModelParams from_natural_units(const ModelParams& natural, const UnitScale& scale);

// True when v == 1 and Omega_P == 1 to rounding.
bool is_natural(const ModelParams& params);

struct ValidityMargin {
    double p = 0.0;
    double f = 0.0;

    bool breaches(double threshold) const { return p > threshold || f > threshold; }
};

inline constexpr double kDefaultValidityThreshold = 0.1;

// m_J = 2 K_J Omega_J t2.
ValidityMargin validity_margin(const ModelParams& params);

}  // namespace pfx
