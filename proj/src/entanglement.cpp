#include "pfx/entanglement.hpp"

#include "pfx/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pfx {

ConcurrenceValue concurrence(Complex exchange, double p_emit_p, double p_emit_f) {
    const double raw = 2.0 * (std::abs(exchange) - std::sqrt(p_emit_p * p_emit_f));
    return {std::max(0.0, raw), raw};
}

ConcurrenceValue concurrence(const AmplitudeSet& a) { return concurrence(a.exchange, a.p_emit_p, a.p_emit_f); }

double fully_entangled_fraction(const XStateDensity& s) {
    constexpr double kNegativeTolerance = -1e-12;
    for (double pop : {s.pop_eg, s.pop_ge, s.pop_gg1, s.pop_ee1})
        if (!(pop >= kNegativeTolerance)) throw InvalidState("negative population in reduced state");
    const double trace = s.trace();
    if (!(std::abs(trace - 1.0) <= 0.05)) throw InvalidState("reduced state trace deviates from 1 by more than 0.05");

    const double odd = 0.5 * (s.pop_eg + s.pop_ge) + std::abs(s.coh_eg_ge);
    const double even = 0.5 * (s.pop_gg1 + s.pop_ee1);
    return std::clamp(std::max(odd, even) / trace, 0.0, 1.0);
}

EntanglementReport entanglement_report(const AmplitudeSet& a) {
    EntanglementReport r;
    const ConcurrenceValue c = concurrence(a);
    r.concurrence = c.concurrence;
    r.raw_excess = c.raw_excess;
    try {
        r.fully_entangled_fraction = fully_entangled_fraction(reduced_state(a));
        r.teleport_fidelity_bound = teleport_fidelity_bound(r.fully_entangled_fraction);
    } catch (const InvalidState&) {
        r.fully_entangled_fraction = std::numeric_limits<double>::quiet_NaN();
        r.teleport_fidelity_bound = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

}  // namespace pfx
