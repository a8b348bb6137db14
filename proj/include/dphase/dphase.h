/* C interface to the dphase library. All functions return a dphase_status;
 * on failure dphase_last_error() describes the most recent error raised on
 * the calling thread. Strings returned through char** are owned by the
 * caller and released with dphase_string_free. */
#ifndef DPHASE_H
#define DPHASE_H

#include <stddef.h>

#if defined(_WIN32)
#define DPHASE_API __declspec(dllexport)
#else
#define DPHASE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dphase_status {
  DPHASE_OK = 0,
  DPHASE_ERR_INVALID_ARGUMENT = 1,
  DPHASE_ERR_PARSE = 2,
  DPHASE_ERR_EVAL = 3,
  DPHASE_ERR_CONFIG = 4,
  DPHASE_ERR_DOMAIN = 5,
  DPHASE_ERR_NO_ROOT = 6,
  DPHASE_ERR_BRACKET = 7,
  DPHASE_ERR_NOT_CONVERGED = 8,
  DPHASE_ERR_IO = 9,
  DPHASE_ERR_INTERNAL = 100
} dphase_status;

/* Problem, mesh and run settings loaded from one configuration. */
typedef struct dphase_session dphase_session;

typedef struct dphase_norms {
  double custom; /* Luxemburg norm of the full modular */
  double star;   /* joint Luxemburg norm, computed independently */
  double circ;   /* sum of the three component norms */
  double one_p;  /* (||grad u||_p^p + int alpha |u|^p)^(1/p) */
} dphase_norms;

DPHASE_API const char* dphase_last_error(void);
DPHASE_API const char* dphase_status_name(dphase_status status);
DPHASE_API void dphase_string_free(char* s);

DPHASE_API dphase_status dphase_critical_exponents(double p, int n, double* p_star, double* p_lower_star);

DPHASE_API dphase_status dphase_session_open(const char* config_path, dphase_session** out);
DPHASE_API dphase_status dphase_session_open_text(const char* config_text, dphase_session** out);
/* Reference problem on the 16x16 unit-square mesh. */
DPHASE_API dphase_status dphase_session_open_preset(double lambda, dphase_session** out);
DPHASE_API void dphase_session_close(dphase_session* s);

DPHASE_API dphase_status dphase_set_lambda(dphase_session* s, double lambda);
DPHASE_API dphase_status dphase_get_lambda(const dphase_session* s, double* lambda);
DPHASE_API dphase_status dphase_node_count(const dphase_session* s, size_t* n);
/* xy receives 2n values x0,y0,x1,y1,... */
DPHASE_API dphase_status dphase_node_coords(const dphase_session* s, double* xy, size_t n);
/* Nodal values of a coefficient-grammar expression in x, y. */
DPHASE_API dphase_status dphase_eval_function(const dphase_session* s, const char* expr, double* values, size_t n);

/* *ok = 1 when every hypothesis holds; report lists violations and warnings. */
DPHASE_API dphase_status dphase_validate(const dphase_session* s, int* ok, char** report);
DPHASE_API dphase_status dphase_norms_of(const dphase_session* s, const double* u, size_t n, dphase_norms* out);
DPHASE_API dphase_status dphase_energy(const dphase_session* s, const double* u, size_t n, double* out);
/* Requires u > 0 at every node. */
DPHASE_API dphase_status dphase_weak_residual(const dphase_session* s, const double* u, size_t n, double* out);
DPHASE_API dphase_status dphase_fiber_csv(const dphase_session* s, const double* u, size_t n, double t_min,
                                          double t_max, int points, char** csv);

/* Writes u_lambda.csv, v_lambda.csv and solve.json into out_dir. *sign_ok = 1
 * when both branches converged with energies of sign (-, +). */
DPHASE_API dphase_status dphase_solve(const dphase_session* s, const char* out_dir, int* sign_ok);
/* Writes sweep.json and sweep_samples.csv into out_dir. */
DPHASE_API dphase_status dphase_sweep(const dphase_session* s, const char* out_dir, int* ordering_ok);
/* Runs the built-in property suites; report has one line per suite. */
DPHASE_API dphase_status dphase_props(const dphase_session* s, int samples, int* passed, int* failed, char** report);

#ifdef __cplusplus
}
#endif

#endif
