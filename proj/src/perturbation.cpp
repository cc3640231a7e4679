#include "pfx/perturbation.hpp"

#include "pfx/errors.hpp"

#include <cmath>
#include <sstream>

namespace pfx {

namespace {

void require_natural(const ModelParams& p) {
    validate(p);
    if (!is_natural(p)) throw InvalidArgument("amplitude engine expects natural units (v = 1, Omega_P = 1)");
}

ModeQuadratureConfig quadrature_config(const ModelParams& p, const AmplitudeOptions& o) {
    ModeQuadratureConfig cfg;
    cfg.cutoff = o.tail_factor * p.field.uv_cutoff;
    cfg.relative_tolerance = o.relative_tolerance;
    cfg.max_subdivisions = o.max_subdivisions;
    return cfg;
}

}  // namespace

ProbabilityEstimate emission_probability(QubitId qubit, const ModelParams& p, const AmplitudeOptions& o) {
    require_natural(p);
    const QubitParams& q = qubit == QubitId::P ? p.qubit_p : p.qubit_f;
    const double coupling = q.dimensionless_coupling();
    if (coupling == 0.0) return {};

    const double kc = p.field.uv_cutoff;
    const double t1 = p.schedule.t1();
    const double t2 = p.schedule.t2();
    const SwitchingProfile profile = p.field.profile;
    const double gap = q.gap;

    ModeIntegrand integrand;
    ModeGrid grid;
    grid.oscillation_length = p.schedule.t_on;
    if (qubit == QubitId::P) {
        grid.resonances = {gap};
        integrand = [=](double k) {
            const Complex w = window_integral({k - gap, -t2, -t1, profile});
            return Complex{2.0 * k * std::exp(-k / kc) * std::norm(w), 0.0};
        };
    } else {
        integrand = [=](double k) {
            const Complex w = window_integral({k + gap, t1, t2, profile});
            return Complex{2.0 * k * std::exp(-k / kc) * std::norm(w), 0.0};
        };
    }
    const QuadratureResult r = mode_integrate(integrand, quadrature_config(p, o), grid);
    return {0.25 * coupling * r.value.real(), 0.25 * coupling * r.error_bound};
}

ExchangeEstimate exchange_amplitude(const ModelParams& p, const AmplitudeOptions& o) {
    require_natural(p);
    const double kp = p.qubit_p.dimensionless_coupling();
    const double kf = p.qubit_f.dimensionless_coupling();
    if (kp == 0.0 || kf == 0.0) return {};

    const double kc = p.field.uv_cutoff;
    const double r = p.separation();
    const double t1 = p.schedule.t1();
    const double t2 = p.schedule.t2();
    const double gp = p.qubit_p.gap;
    const double gf = p.qubit_f.gap;
    const SwitchingProfile profile = p.field.profile;

    ModeGrid grid;
    grid.resonances = {gp, gf};
    grid.oscillation_length = r + 2.0 * t2;
    auto integrand = [=](double k) {
        const Complex wf = window_integral({gf - k, t1, t2, profile});
        const Complex wp = window_integral({k - gp, -t2, -t1, profile});
        return (2.0 * k * std::exp(-k / kc) * std::cos(k * r)) * wf * wp;
    };
    const QuadratureResult res = mode_integrate(integrand, quadrature_config(p, o), grid);
    const double prefactor = -0.25 * std::sqrt(kp * kf);
    return {prefactor * res.value, std::abs(prefactor) * res.error_bound};
}

AmplitudeSet compute_amplitudes(const ModelParams& p, const AmplitudeOptions& o) {
    require_natural(p);
    AmplitudeSet out;
    out.cutoff_used = p.field.uv_cutoff;
    out.margin = validity_margin(p);
    out.valid_p = !(out.margin.p > o.validity_threshold);
    out.valid_f = !(out.margin.f > o.validity_threshold);
    if (o.strict && (!out.valid_p || !out.valid_f)) {
        std::ostringstream msg;
        msg << "perturbative validity margin exceeded: m_P = " << out.margin.p << ", m_F = " << out.margin.f
            << " (threshold " << o.validity_threshold << ")";
        throw ValidityBreach(msg.str(), std::max(out.margin.p, out.margin.f));
    }

    auto note = [&](const char* what, const NonConvergence& e) {
        out.converged = false;
        if (!out.error.empty()) out.error += "; ";
        out.error += std::string(what) + ": " + e.what();
    };

    try {
        const auto a = emission_probability(QubitId::P, p, o);
        out.p_emit_p = a.value;
        out.err_emit_p = a.error_bound;
    } catch (const NonConvergence& e) {
        const double scale = 0.25 * p.qubit_p.dimensionless_coupling();
        out.p_emit_p = scale * e.best_real();
        out.err_emit_p = scale * e.error_bound();
        note("P_A", e);
    }
    try {
        const auto b = emission_probability(QubitId::F, p, o);
        out.p_emit_f = b.value;
        out.err_emit_f = b.error_bound;
    } catch (const NonConvergence& e) {
        const double scale = 0.25 * p.qubit_f.dimensionless_coupling();
        out.p_emit_f = scale * e.best_real();
        out.err_emit_f = scale * e.error_bound();
        note("P_B", e);
    }
    try {
        const auto x = exchange_amplitude(p, o);
        out.exchange = x.value;
        out.err_exchange = x.error_bound;
    } catch (const NonConvergence& e) {
        const double scale = 0.25 * std::sqrt(p.qubit_p.dimensionless_coupling() * p.qubit_f.dimensionless_coupling());
        out.exchange = -scale * Complex{e.best_real(), e.best_imag()};
        out.err_exchange = scale * e.error_bound();
        note("X", e);
    }
    out.exchange_modulus = std::abs(out.exchange);

    const double geo = std::sqrt(out.p_emit_p * out.p_emit_f);
    const double geo_hi = std::sqrt((out.p_emit_p + out.err_emit_p) * (out.p_emit_f + out.err_emit_f));
    out.quadrature_error_bound = 2.0 * (out.err_exchange + (geo_hi - geo));
    return out;
}

XStateDensity reduced_state(const AmplitudeSet& a) {
    XStateDensity s;
    s.pop_gg1 = a.p_emit_p;
    s.pop_ee1 = a.p_emit_f;
    s.pop_ge = a.exchange_modulus * a.exchange_modulus;
    s.pop_eg = 1.0 - a.p_emit_p - a.p_emit_f;
    // <eg|rho|ge> = c_eg c_ge^* with c_eg = 1 at this order.
    s.coh_eg_ge = std::conj(a.exchange);
    s.trace_deviation = s.trace() - 1.0;
    s.valid_p = a.valid_p;
    s.valid_f = a.valid_f;
    return s;
}

XStateDensity reduced_state(const ModelParams& p, const AmplitudeOptions& o) {
    const AmplitudeSet a = compute_amplitudes(p, o);
    if (!a.converged)
        throw NonConvergence(a.error, a.exchange.real(), a.exchange.imag(), a.quadrature_error_bound);
    return reduced_state(a);
}

}  // namespace pfx
