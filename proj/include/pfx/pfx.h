/* C interface to libpfx. All functions are thread-safe on distinct handles;
 * the last error message is kept per thread. Strings returned through char**
 * are owned by the caller and released with pfx_string_free. */
#ifndef PFX_PFX_H
#define PFX_PFX_H

#include <stddef.h>

#if defined(PFX_BUILDING_LIBRARY)
#define PFX_API __attribute__((visibility("default")))
#else
#define PFX_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pfx_status {
    PFX_OK = 0,
    PFX_E_INVALID_ARGUMENT = 1,
    PFX_E_NON_CONVERGENCE = 2,
    PFX_E_TRUNCATION = 3,
    PFX_E_STEP_SIZE = 4,
    PFX_E_INVALID_STATE = 5,
    PFX_E_VALIDITY = 6,
    PFX_E_NO_PEAKS = 7,
    PFX_E_CONFIG = 8,
    PFX_E_IO = 9,
    PFX_E_INTERNAL = 10
} pfx_status;

typedef enum pfx_region { PFX_REGION_I = 0, PFX_REGION_IIA = 1, PFX_REGION_IIB = 2, PFX_REGION_III = 3 } pfx_region;

typedef struct pfx_config pfx_config;
typedef struct pfx_sweep_result pfx_sweep_result;

PFX_API const char* pfx_version(void);
PFX_API const char* pfx_status_name(pfx_status status);
/* Message of the most recent failure on this thread; "" if none. */
PFX_API const char* pfx_last_error(void);
PFX_API void pfx_string_free(char* s);

/* Configuration: JSON text or file, plus "dotted.path=value" overrides. */
PFX_API pfx_status pfx_config_parse(const char* json_text, const char* const* overrides, size_t n_overrides,
                                    pfx_config** out);
PFX_API pfx_status pfx_config_load(const char* path, const char* const* overrides, size_t n_overrides,
                                   pfx_config** out);
PFX_API void pfx_config_free(pfx_config* config);
PFX_API pfx_status pfx_config_set_workers(pfx_config* config, unsigned workers);
PFX_API pfx_status pfx_config_set_strict(pfx_config* config, int strict);
PFX_API pfx_status pfx_config_set_output(pfx_config* config, const char* dir);
PFX_API pfx_status pfx_config_hash(const pfx_config* config, char** out);
PFX_API pfx_status pfx_config_json(const pfx_config* config, char** out);

typedef struct pfx_point_result {
    pfx_region region;
    int on_boundary;
    double p_a;
    double p_b;
    double x_re;
    double x_im;
    double x_abs;
    double raw_excess;
    double concurrence;
    double fully_entangled_fraction; /* NaN if the reduced state is unphysical */
    double fidelity_bound;
    double margin_p;
    double margin_f;
    double err_bound;
    int valid_p;
    int valid_f;
    int converged;
} pfx_point_result;

/* Amplitudes and entanglement at the configured point. In strict mode a
 * validity breach returns PFX_E_VALIDITY. */
PFX_API pfx_status pfx_point(const pfx_config* config, pfx_point_result* out);

/* Times and separation in any common unit system. */
PFX_API pfx_status pfx_classify(double t_on, double t_off, double separation, double speed, pfx_region* region,
                                int* on_boundary);

PFX_API pfx_status pfx_effective_coupling(double alpha4, double f1, double f2, double f3, double* alpha_eff,
                                          double* f_eff);

typedef struct pfx_sweep_row {
    double axis1;
    double axis2; /* NaN for 1D sweeps */
    pfx_region region;
    double p_a;
    double p_b;
    double x_abs;
    double raw_excess;
    double concurrence;
    int valid_p;
    int valid_f;
    double err_bound;
    int failed;
} pfx_sweep_row;

/* Runs config.sweep; axis values are reported in configured units. */
PFX_API pfx_status pfx_sweep_run(const pfx_config* config, pfx_sweep_result** out);
PFX_API size_t pfx_sweep_size(const pfx_sweep_result* result);
PFX_API pfx_status pfx_sweep_get_row(const pfx_sweep_result* result, size_t index, pfx_sweep_row* out);
PFX_API pfx_status pfx_sweep_csv(const pfx_sweep_result* result, char** out);
PFX_API void pfx_sweep_free(pfx_sweep_result* result);

typedef struct pfx_oracle_result {
    double p_a;
    double p_b;
    double coherence_abs;
    double norm_drift;
    double top_sector_population;
    size_t dimension;
} pfx_oracle_result;

/* Truncated-Fock-space run with the oracle section of the config. */
PFX_API pfx_status pfx_oracle(const pfx_config* config, pfx_oracle_result* out);

/* Runs a CLI subcommand (point, sweep, regions, circuit, oracle). exit_code
 * follows the CLI contract; report may be NULL. */
PFX_API pfx_status pfx_run_command(const pfx_config* config, const char* name, int* exit_code, char** report);

#ifdef __cplusplus
}
#endif

#endif
