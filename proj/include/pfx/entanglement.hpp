#pragma once

#include "pfx/perturbation.hpp"

namespace pfx {

struct EntanglementReport {
    double concurrence = 0;
    double raw_excess = 0;  // 2(|X| - sqrt(P_A P_B)) before clamping
    double fully_entangled_fraction = 0;
    double teleport_fidelity_bound = 0;  // (2 FEF + 1) / 3
};

struct ConcurrenceValue {
    double concurrence = 0;
    double raw_excess = 0;
};

ConcurrenceValue concurrence(const AmplitudeSet& amps);
ConcurrenceValue concurrence(Complex exchange, double p_emit_p, double p_emit_f);

// Closed form for an X-state whose only coherence is eg<->ge:
//   FEF = max((pop_eg + pop_ge)/2 + |coh|, (pop_gg + pop_ee)/2)
// after renormalizing by the trace. Throws InvalidState for populations
// below -1e-12 or a trace further than 0.05 from 1.
double fully_entangled_fraction(const XStateDensity& state);

inline double teleport_fidelity_bound(double fef) { return (2.0 * fef + 1.0) / 3.0; }

EntanglementReport entanglement_report(const AmplitudeSet& amps);

}  // namespace pfx
