#include "pfx/pfx.h"

#include "pfx/circuit.hpp"
#include "pfx/commands.hpp"
#include "pfx/config.hpp"
#include "pfx/entanglement.hpp"
#include "pfx/errors.hpp"
#include "pfx/oracle.hpp"
#include "pfx/regions.hpp"
#include "pfx/sweep.hpp"

#include <cstdlib>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

struct pfx_config {
    pfx::RunConfig config;
};

struct pfx_sweep_result {
    pfx::SweepResult lab;
};

namespace {

thread_local std::string g_last_error;

pfx_status fail(pfx_status s, const std::string& message) {
    g_last_error = message;
    return s;
}

// Runs f and converts exceptions to status codes.
template <class F>
pfx_status guarded(F&& f) {
    try {
        g_last_error.clear();
        f();
        return PFX_OK;
    } catch (const pfx::Error& e) {
        return fail(static_cast<pfx_status>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(PFX_E_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(PFX_E_INTERNAL, e.what());
    } catch (...) {
        return fail(PFX_E_INTERNAL, "unknown failure");
    }
}

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::vector<std::string> collect(const char* const* overrides, size_t n) {
    if (n > 0 && !overrides) throw pfx::InvalidArgument("overrides is NULL");
    std::vector<std::string> out;
    for (size_t i = 0; i < n; ++i) {
        if (!overrides[i]) throw pfx::InvalidArgument("override entry is NULL");
        out.emplace_back(overrides[i]);
    }
    return out;
}

void require(const void* p, const char* what) {
    if (!p) throw pfx::InvalidArgument(std::string(what) + " is NULL");
}

pfx_region region_of(pfx::RegionLabel l) { return static_cast<pfx_region>(static_cast<int>(l)); }

}  // namespace

extern "C" {

const char* pfx_version(void) { return PFX_VERSION_STRING; }

const char* pfx_status_name(pfx_status s) {
    switch (s) {
    case PFX_OK: return "ok";
    case PFX_E_INVALID_ARGUMENT: return "invalid_argument";
    case PFX_E_NON_CONVERGENCE: return "non_convergence";
    case PFX_E_TRUNCATION: return "truncation_breach";
    case PFX_E_STEP_SIZE: return "step_size_rejected";
    case PFX_E_INVALID_STATE: return "invalid_state";
    case PFX_E_VALIDITY: return "validity_breach";
    case PFX_E_NO_PEAKS: return "no_peaks";
    case PFX_E_CONFIG: return "config_error";
    case PFX_E_IO: return "io_error";
    case PFX_E_INTERNAL: return "internal_error";
    }
    return "unknown";
}

const char* pfx_last_error(void) { return g_last_error.c_str(); }

void pfx_string_free(char* s) { std::free(s); }

pfx_status pfx_config_parse(const char* json_text, const char* const* overrides, size_t n, pfx_config** out) {
    return guarded([&] {
        require(json_text, "json_text");
        require(out, "out");
        *out = nullptr;
        auto cfg = std::make_unique<pfx_config>();
        cfg->config = pfx::parse_config(json_text, collect(overrides, n));
        *out = cfg.release();
    });
}

pfx_status pfx_config_load(const char* path, const char* const* overrides, size_t n, pfx_config** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = nullptr;
        auto cfg = std::make_unique<pfx_config>();
        cfg->config = pfx::load_config(path, collect(overrides, n));
        *out = cfg.release();
    });
}

void pfx_config_free(pfx_config* c) { delete c; }

pfx_status pfx_config_set_workers(pfx_config* c, unsigned workers) {
    return guarded([&] {
        require(c, "config");
        c->config.workers = workers;
    });
}

pfx_status pfx_config_set_strict(pfx_config* c, int strict) {
    return guarded([&] {
        require(c, "config");
        c->config.strict = strict != 0;
    });
}

pfx_status pfx_config_set_output(pfx_config* c, const char* dir) {
    return guarded([&] {
        require(c, "config");
        require(dir, "dir");
        c->config.output = dir;
    });
}

pfx_status pfx_config_hash(const pfx_config* c, char** out) {
    return guarded([&] {
        require(c, "config");
        require(out, "out");
        *out = dup(pfx::config_hash(c->config));
    });
}

pfx_status pfx_config_json(const pfx_config* c, char** out) {
    return guarded([&] {
        require(c, "config");
        require(out, "out");
        *out = dup(pfx::to_json(c->config));
    });
}

pfx_status pfx_point(const pfx_config* c, pfx_point_result* out) {
    return guarded([&] {
        require(c, "config");
        require(out, "out");
        const pfx::ModelParams p = pfx::natural_params(c->config);
        const pfx::AmplitudeSet a = pfx::compute_amplitudes(p, pfx::amplitude_options(c->config));
        const pfx::EntanglementReport e = pfx::entanglement_report(a);
        const pfx::Region r = pfx::classify(p.schedule, p.separation(), p.field.speed);
        *out = pfx_point_result{region_of(r.label),
                                r.on_boundary ? 1 : 0,
                                a.p_emit_p,
                                a.p_emit_f,
                                a.exchange.real(),
                                a.exchange.imag(),
                                a.exchange_modulus,
                                e.raw_excess,
                                e.concurrence,
                                e.fully_entangled_fraction,
                                e.teleport_fidelity_bound,
                                a.margin.p,
                                a.margin.f,
                                a.quadrature_error_bound,
                                a.valid_p ? 1 : 0,
                                a.valid_f ? 1 : 0,
                                a.converged ? 1 : 0};
    });
}

pfx_status pfx_classify(double t_on, double t_off, double separation, double speed, pfx_region* region,
                        int* on_boundary) {
    return guarded([&] {
        require(region, "region");
        const pfx::Region r = pfx::classify(pfx::Schedule{t_on, t_off}, separation, speed);
        *region = region_of(r.label);
        if (on_boundary) *on_boundary = r.on_boundary ? 1 : 0;
    });
}

pfx_status pfx_effective_coupling(double alpha4, double f1, double f2, double f3, double* alpha_eff, double* f_eff) {
    return guarded([&] {
        pfx::CircuitParams c;
        c.alpha4 = alpha4;
        c.f1 = f1;
        c.f2 = f2;
        c.f3 = f3;
        const pfx::EffectiveCoupling e = pfx::effective_coupling(c);
        if (alpha_eff) *alpha_eff = e.alpha_eff;
        if (f_eff) *f_eff = e.f_eff;
    });
}

pfx_status pfx_sweep_run(const pfx_config* c, pfx_sweep_result** out) {
    return guarded([&] {
        require(c, "config");
        require(out, "out");
        *out = nullptr;
        auto r = std::make_unique<pfx_sweep_result>();
        r->lab = pfx::run_lab_sweep(c->config).lab;
        *out = r.release();
    });
}

size_t pfx_sweep_size(const pfx_sweep_result* r) { return r ? r->lab.rows.size() : 0; }

pfx_status pfx_sweep_get_row(const pfx_sweep_result* r, size_t i, pfx_sweep_row* out) {
    return guarded([&] {
        require(r, "result");
        require(out, "out");
        if (i >= r->lab.rows.size()) throw pfx::InvalidArgument("row index out of range");
        const pfx::SweepRow& row = r->lab.rows[i];
        *out = pfx_sweep_row{row.axis1,
                             r->lab.spec.axis2 ? row.axis2 : std::numeric_limits<double>::quiet_NaN(),
                             region_of(row.region),
                             row.p_a,
                             row.p_b,
                             row.x_abs,
                             row.raw_excess,
                             row.concurrence,
                             row.valid_p ? 1 : 0,
                             row.valid_f ? 1 : 0,
                             row.err_bound,
                             row.error.empty() ? 0 : 1};
    });
}

pfx_status pfx_sweep_csv(const pfx_sweep_result* r, char** out) {
    return guarded([&] {
        require(r, "result");
        require(out, "out");
        std::ostringstream os;
        os.imbue(std::locale::classic());
        pfx::write_sweep_csv(os, r->lab, {});
        *out = dup(os.str());
    });
}

void pfx_sweep_free(pfx_sweep_result* r) { delete r; }

pfx_status pfx_oracle(const pfx_config* c, pfx_oracle_result* out) {
    return guarded([&] {
        require(c, "config");
        require(out, "out");
        const pfx::ModelParams p = pfx::oracle_params(c->config);
        const pfx::OracleResult r = pfx::simulate(p, pfx::oracle_lattice(c->config, c->config.oracle.n_modes));
        *out = pfx_oracle_result{r.state.pop_gg1,  r.state.pop_ee1,         std::abs(r.state.coh_eg_ge),
                                 r.norm_drift,     r.top_sector_population, r.dimension};
    });
}

pfx_status pfx_run_command(const pfx_config* c, const char* name, int* exit_code, char** report) {
    return guarded([&] {
        require(c, "config");
        require(name, "name");
        require(exit_code, "exit_code");
        if (report) *report = nullptr;
        const pfx::CommandOutcome o = pfx::run_command(name, c->config);
        *exit_code = o.exit_code;
        if (report) *report = dup(o.report);
    });
}

}  // extern "C"
