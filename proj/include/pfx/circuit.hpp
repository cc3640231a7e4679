#pragma once

#include "pfx/model.hpp"

#include <array>
#include <vector>

namespace pfx {

// Three-loop switchable coupler: a flux qubit (junctions 1-3) galvanically
// attached to the line through a SQUID (junctions 4, 5). Charging energies
// are neglected. Junction energies are E_J, E_J, alpha E_J, alpha4 E_J,
// alpha4 E_J. Frustrations are in flux quanta and only matter mod 1.
struct CircuitParams {
    double e_j = 1.0;
    double alpha = 0.8;
    double alpha4 = 0.1;
    double f1 = 0.5;
    double f2 = 0.75;
    double f3 = 1.0;
};

void validate(const CircuitParams& c);

struct EffectiveCoupling {
    double alpha_eff;  // 2 alpha4 cos(pi f3); signed
    double f_eff;      // f1 - f2 + f3/2
};

EffectiveCoupling effective_coupling(const CircuitParams& c);

// -E_J[cos phi1 + cos phi2 + alpha cos(2 pi f1 + phi1 + phi2)]
//   - alpha_eff E_J cos(2 pi f_eff - dpsi + phi1 + phi2)
double josephson_potential(const CircuitParams& c, double phi1, double phi2, double field_value);

using JunctionPhases = std::array<double, 5>;

// Loop constraints used to reduce the five-junction sum:
//   phi1 + phi2 + phi3       = -2 pi f1
//   phi3 + phi5 + dpsi       = -2 pi f2
//   phi4 - phi5              =  2 pi f3
JunctionPhases eliminate_phases(const CircuitParams& c, double phi1, double phi2, double field_value);

// Residuals of the three loop equations (zero mod 2 pi when satisfied).
std::array<double, 3> loop_residuals(const CircuitParams& c, const JunctionPhases& phases, double field_value);

// -sum_j E_Jj cos phi_j
double junction_energy_sum(const CircuitParams& c, const JunctionPhases& phases);

struct F3Sample {
    double time;
    double f3;
};

struct SwitchReport {
    std::vector<double> times;
    std::vector<double> envelope;  // |alpha_eff(f3(t))| / (2 alpha4) in [0, 1]
    bool has_transition = false;
    double t10 = 0;  // first crossing of 0.1
    double t90 = 0;  // first crossing of 0.9
    double ramp_duration = 0;  // |t90 - t10|

    // Window profiles with the same 10-90 duration.
    SwitchingProfile linear_equivalent() const;
    SwitchingProfile gaussian_equivalent() const;
};

// Requires at least 10 samples with increasing times.
SwitchReport switch_profile(const std::vector<F3Sample>& trajectory, const CircuitParams& c);

}  // namespace pfx
