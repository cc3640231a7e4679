#pragma once

#include "pfx/model.hpp"
#include "pfx/perturbation.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace pfx {

// Finite-mode realization of the line. Wavenumbers sit at the midpoints
// k_n = (n + 1/2) k_max / n_modes. Each |k_n| carries two standing-wave
// oscillators (even and odd about the qubit midpoint) so that the +k and -k
// continua are both represented; couplings carry sqrt(dk e^{-k/k_c}), which
// makes the first-order mode sums midpoint-rule versions of the continuum
// integrals at the same exponential cutoff.
struct LatticeConfig {
    std::size_t n_modes = 128;
    double k_max = 60.0;
    int photon_truncation = 2;  // keep sectors 0..photon_truncation
    double time_step = 0.0;     // <= 0: pick 0.05 / k_max
    int integrator_order = 4;   // 2 (explicit midpoint) or 4 (classic RK4)

    // Step actually used before it is shrunk to fit each window exactly.
    double effective_time_step() const { return time_step > 0.0 ? time_step : 0.05 / k_max; }
};

void validate(const LatticeConfig& lattice, const ModelParams& params);

inline constexpr double kMaxNormDrift = 1e-6;
inline constexpr double kMaxTopSectorWeight = 1e-4;

using DensityMatrix = std::array<std::array<Complex, 4>, 4>;

struct OracleResult {
    // Basis index 2*bP + bF with b = 1 for excited: gg, ge, eg, ee.
    DensityMatrix rho{};
    XStateDensity state{};             // populations and eg<->ge coherence from rho
    double norm_drift = 0;             // | ||psi|| - 1 |
    double top_sector_population = 0;  // weight in the highest kept photon sector
    std::size_t steps = 0;
    std::size_t dimension = 0;
};

// Direct integration of the interaction-picture Schroedinger equation from
// |eg0> at -t2: P window, free interval (identity in this picture), F window.
// Ramped profiles are sampled on the nominal windows only. Throws
// TruncationBreach or StepSizeRejected when the run cannot be trusted.
OracleResult simulate(const ModelParams& params, const LatticeConfig& lattice);

struct ConvergenceRow {
    LatticeConfig lattice;
    double p_emit_p = 0;
    double p_emit_f = 0;
    double coherence = 0;
    double norm_drift = 0;
    std::string error;  // empty when the run succeeded
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    // Richardson estimates from the last successful levels; NaN when fewer
    // than two levels succeeded.
    double extrapolated_p_emit_p = 0;
    double extrapolated_p_emit_f = 0;
    double extrapolated_coherence = 0;
    double observed_order = 0;  // from the last three levels of P_A, NaN if unavailable
};

// Runs each lattice (levels are independent and run on up to `workers`
// threads) and extrapolates assuming successive levels refine by 2.
ConvergenceTable convergence_sweep(const ModelParams& params, const std::vector<LatticeConfig>& series,
                                   unsigned workers = 1);

}  // namespace pfx
