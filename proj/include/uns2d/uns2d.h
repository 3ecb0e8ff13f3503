/* C interface to the uns2d solver. All functions are thread compatible;
 * error text is kept per thread. */
#ifndef UNS2D_H
#define UNS2D_H

#include <stddef.h>

#if defined(UNS2D_BUILDING)
#define UNS2D_API __attribute__((visibility("default")))
#else
#define UNS2D_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum uns2d_status {
  UNS2D_OK = 0,
  UNS2D_ERR_ARGUMENT = 1,
  UNS2D_ERR_CONFIG = 2,
  UNS2D_ERR_BLOWUP = 3,
  UNS2D_ERR_IO = 4,
  UNS2D_ERR_INTERNAL = 5
} uns2d_status;

typedef struct uns2d_config uns2d_config;
typedef struct uns2d_sim uns2d_sim;

typedef struct uns2d_diagnostics {
  long step;
  double t;
  double energy;
  double grad_u_sq;
  double lap_u_sq;
  double div_u_sq;
  double grad_ps_sq;
  double grad_pe_sq;
  double stokes_ratio;
  double compat_corr;
} uns2d_diagnostics;

/* Overrides for uns2d_execute. NULL pointers and zero counts mean "unset". */
typedef struct uns2d_options {
  const double* dts;
  size_t dts_count;
  const long* samples;
  const unsigned long long* seed;
  const double* s;
} uns2d_options;

UNS2D_API const char* uns2d_version(void);

/* Message of the last failed call on this thread ("" if none). */
UNS2D_API const char* uns2d_last_error(void);
/* Key path of the last configuration error on this thread ("" if none). */
UNS2D_API const char* uns2d_last_error_key(void);

UNS2D_API uns2d_status uns2d_config_load(const char* path, uns2d_config** out);
UNS2D_API uns2d_status uns2d_config_parse(const char* json_text, uns2d_config** out);
UNS2D_API void uns2d_config_free(uns2d_config* cfg);
/* Canonical JSON echo; release with uns2d_string_free. */
UNS2D_API uns2d_status uns2d_config_echo(const uns2d_config* cfg, char** out);

UNS2D_API uns2d_status uns2d_sim_create(const uns2d_config* cfg, uns2d_sim** out);
UNS2D_API void uns2d_sim_free(uns2d_sim* sim);
/* Advances one step. UNS2D_ERR_BLOWUP leaves the state at the last finite step. */
UNS2D_API uns2d_status uns2d_sim_step(uns2d_sim* sim);
/* Steps until t_end; returns UNS2D_ERR_BLOWUP on blow-up. */
UNS2D_API uns2d_status uns2d_sim_run(uns2d_sim* sim);
UNS2D_API int uns2d_sim_finished(const uns2d_sim* sim);
UNS2D_API double uns2d_sim_time(const uns2d_sim* sim);
UNS2D_API long uns2d_sim_step_index(const uns2d_sim* sim);
UNS2D_API uns2d_status uns2d_sim_diagnostics(const uns2d_sim* sim, uns2d_diagnostics* out);
/* Number of grid nodes, (nx + 1) * (ny + 1). */
UNS2D_API size_t uns2d_sim_node_count(const uns2d_sim* sim);
/* Copies the velocity, row-major with j outer, into arrays of node_count values. */
UNS2D_API uns2d_status uns2d_sim_velocity(const uns2d_sim* sim, double* u1, double* u2, size_t count);

/* Runs a subcommand ("run", "sweep-stability", ...) writing into out_dir.
 * summary (optional) receives summary.json; release with uns2d_string_free. */
UNS2D_API uns2d_status uns2d_execute(const char* command, const uns2d_config* cfg,
                                     const char* out_dir, const uns2d_options* options,
                                     char** summary);

UNS2D_API void uns2d_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
