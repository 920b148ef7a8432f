/* C interface to the sasakigeo shared library.
 *
 * All geometry lives behind two opaque handles: a base manifold and a
 * weighted metric f1 pi*g (+) f2 pi*g on its tangent bundle. Functions
 * return sgeo_status; on failure sgeo_last_error() carries a message for
 * the calling thread. Vector arguments are doubles in chart coordinates:
 * points x have length dim, fiber vectors u length dim, and tangent vectors
 * of TM length 2*dim laid out as (horizontal part, vertical part).
 */

#ifndef SASAKIGEO_H
#define SASAKIGEO_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sgeo_status {
  SGEO_OK = 0,
  SGEO_FAIL_TOLERANCE = 1, /* a verify run exceeded its tolerance */
  SGEO_ERR_CONFIG = 2,     /* invalid configuration or argument */
  SGEO_ERR_NUMERIC = 3,    /* non-finite value or diverged evaluation */
  SGEO_ERR_GEOMETRY = 4,   /* degenerate metric, off-chart point, ... */
} sgeo_status;

typedef struct sgeo_manifold sgeo_manifold;
typedef struct sgeo_metric sgeo_metric;

const char* sgeo_version(void);

/* Thread-local message for the most recent failure; empty string if none. */
const char* sgeo_last_error(void);

/* Manifold specs use the same JSON schema as the CLI config's "manifold"
 * block, e.g. {"kind":"constant_curvature","dim":3,"c":1.0}. */
sgeo_status sgeo_manifold_create(const char* spec_json, sgeo_manifold** out);
void sgeo_manifold_free(sgeo_manifold* m);
int sgeo_manifold_dim(const sgeo_manifold* m);

/* Scalar curvature of the base manifold at x. */
sgeo_status sgeo_manifold_scalar(const sgeo_manifold* m, const double* x,
                                 double* out);

sgeo_status sgeo_metric_create(const sgeo_manifold* m, double f1, double f2,
                               sgeo_metric** out);
void sgeo_metric_free(sgeo_metric* g);

/* Closed-form curvature 4-tensor R^G(X,Y,Z,W) at (x, u). */
sgeo_status sgeo_metric_curvature4(const sgeo_metric* g, const double* x,
                                   const double* u, const double* X,
                                   const double* Y, const double* Z,
                                   const double* W, double* out);

sgeo_status sgeo_metric_ricci(const sgeo_metric* g, const double* x,
                              const double* u, const double* X, const double* Y,
                              double* out);

sgeo_status sgeo_metric_scalar(const sgeo_metric* g, const double* x,
                               const double* u, double* out);

/* Brute-force finite-difference value of the same 4-tensor; the independent
 * verification path. */
sgeo_status sgeo_metric_oracle_curvature4(const sgeo_metric* g, const double* x,
                                          const double* u, const double* X,
                                          const double* Y, const double* Z,
                                          const double* W, double* out);

/* Tangent sphere bundle S_rM with the induced metric (constant radius r). */
sgeo_status sgeo_sphere_scalar(const sgeo_metric* g, double r, const double* x,
                               const double* u, double* out);
sgeo_status sgeo_sphere_curvature4(const sgeo_metric* g, double r,
                                   const double* x, const double* u,
                                   const double* X, const double* Y,
                                   const double* Z, const double* W,
                                   double* out);
sgeo_status sgeo_sphere_mean_curvature(const sgeo_metric* g, double r,
                                       const double* x, const double* u,
                                       double* out);

/* Runs a full verify / scan / geodesic described by a JSON config (same
 * schema as the CLI). Output files named in the config are written; a
 * human-readable summary is returned. The status doubles as the CLI exit
 * code. Free the summary with sgeo_string_free. */
sgeo_status sgeo_run(const char* config_json, char** summary_out);

/* Renders a stored verify report (JSON) or scan/trajectory CSV as text. */
sgeo_status sgeo_render_report(const char* input_text, char** table_out);

void sgeo_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* SASAKIGEO_H */
