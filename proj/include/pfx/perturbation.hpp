#pragma once

#include "pfx/field.hpp"
#include "pfx/model.hpp"

#include <string>

namespace pfx {

enum class QubitId { P, F };

struct AmplitudeOptions {
    double relative_tolerance = 1e-9;
    std::size_t max_subdivisions = 400000;
    // The k integrals stop at tail_factor * uv_cutoff, where e^{-k/k_c} has
    // dropped below ~2e-9.
    double tail_factor = 20.0;
    double validity_threshold = kDefaultValidityThreshold;
    // Throw ValidityBreach instead of flagging.
    bool strict = false;
};

struct AmplitudeSet {
    Complex exchange{};           // X
    double exchange_modulus = 0;  // |X|
    double p_emit_p = 0;          // P_A = sum_k |A_1k|^2
    double p_emit_f = 0;          // P_B = sum_k |B_1k|^2
    double err_exchange = 0;
    double err_emit_p = 0;
    double err_emit_f = 0;
    // Absolute bound on 2(|X| - sqrt(P_A P_B)) propagated from the three
    // quadratures.
    double quadrature_error_bound = 0;
    double cutoff_used = 0;
    ValidityMargin margin{};
    bool valid_p = true;
    bool valid_f = true;
    // Set when a quadrature missed tolerance; the values above are then the
    // best available estimates.
    bool converged = true;
    std::string error;
};

// Two-qubit reduced state, basis ordered (P, F). Only the eg<->ge coherence
// is populated at this order.
struct XStateDensity {
    double pop_eg = 1;
    double pop_ge = 0;
    double pop_gg1 = 0;
    double pop_ee1 = 0;
    Complex coh_eg_ge{};  // <eg|rho|ge>
    double trace_deviation = 0;
    bool valid_p = true;
    bool valid_f = true;

    double trace() const { return pop_eg + pop_ge + pop_gg1 + pop_ee1; }
};

struct ProbabilityEstimate {
    double value = 0;
    double error_bound = 0;
};

struct ExchangeEstimate {
    Complex value{};
    double error_bound = 0;
};

// All entry points expect natural units (v = 1, Omega_P = 1) and throw
// InvalidArgument otherwise.

// P: rotating channel |eg0> -> |gg1_k>, detuning k - Omega_P on [-t2, -t1].
// F: counter-rotating channel |eg0> -> |ee1_k>, detuning k + Omega_F on [t1, t2].
//   P_J = (K_J/4) int_0^inf dk k e^{-k/k_c} 2 |W_J|^2
// Propagates NonConvergence.
ProbabilityEstimate emission_probability(QubitId qubit, const ModelParams& params,
                                         const AmplitudeOptions& options = {});

// Second-order exchange amplitude |eg0> -> |ge0> (P emits, F absorbs):
//   X = -(sqrt(K_P K_F)/4) int_0^inf dk k e^{-k/k_c} 2 cos(k r) W_F(Omega_F - k) W_P(k - Omega_P)
// Propagates NonConvergence.
ExchangeEstimate exchange_amplitude(const ModelParams& params, const AmplitudeOptions& options = {});

// Evaluates all three quantities. Quadrature failures are recorded in the
// result (converged = false) rather than thrown; validity breaches throw only
// in strict mode.
AmplitudeSet compute_amplitudes(const ModelParams& params, const AmplitudeOptions& options = {});

XStateDensity reduced_state(const AmplitudeSet& amps);
XStateDensity reduced_state(const ModelParams& params, const AmplitudeOptions& options = {});

}  // namespace pfx
