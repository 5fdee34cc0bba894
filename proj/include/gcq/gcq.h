/* C interface to the convolution-quadrature library.
 *
 * All entry points return gcq_status; on failure a thread-local message is
 * readable through gcq_last_error().  Results come back as an opaque run
 * table: column 0 is always the node time, the remaining columns depend on
 * the call (values, closed-form references, errors, norms).  Tables are
 * heap-owned and released with gcq_run_free.
 *
 * String specs use the same grammar as the command line front end:
 *   kernel  "fracint:alpha=0.5" | "fracintdual:alpha=0.3" |
 *           "ka:alpha=0.7" | "kb:alpha=0.4"
 *   mesh    "uniform:T=1,N=64" | "graded:T=1,N=64,gamma=3" |
 *           "twosing:T=1,N=64,sigma=0.28,g1=6,g2=3.5" | "random:T=1,N=64,seed=7"
 *   tableau "radau2" | "radau3" | "lobatto4"
 */
#ifndef GCQ_H
#define GCQ_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    GCQ_OK = 0,
    GCQ_EINVAL = 1, /* bad arguments or spec strings */
    GCQ_EFAIL = 2   /* runtime failure inside a run */
} gcq_status;

typedef struct gcq_run gcq_run;

/* message for the most recent failure on this thread; never NULL */
const char* gcq_last_error(void);

/* K(d/dt) applied to t^beta; columns: t, u, exact, abs_error */
gcq_status gcq_convolve(const char* kernel, const char* tableau, const char* mesh,
                        double beta, const char* engine, double tol, gcq_run** out);

/* D^alpha u + u = f with the two-singularity closed-form solution
 * 1 + t^beta1 + H(t - sigma) (t - sigma)^beta2; columns: t, u, exact, abs_error */
gcq_status gcq_fode_solve(double alpha, double beta1, double beta2, double sigma,
                          const char* mesh, const char* tableau, double tol,
                          gcq_run** out);

/* d_t^alpha u - Laplace u = f on (-1,1)^dim, manufactured solution
 * t^alpha cos(pi x/2) (cos(pi y/2)); columns: t, norm, l2_error */
gcq_status gcq_subdiffusion_solve(double alpha, int dim, int J, const char* mesh,
                                  const char* tableau, double tol, gcq_run** out);

/* damped nonlinear wave study on (0,2) with J subdivisions;
 * columns: t, norm */
gcq_status gcq_westervelt_solve(double alpha, double kappa, int J, const char* mesh,
                                const char* tableau, double tol, double fp_tol,
                                gcq_run** out);

/* full convergence study from a config file or its text; writes the
 * study's CSV and JSON-lines artifacts */
gcq_status gcq_experiment_file(const char* path);
gcq_status gcq_experiment_text(const char* text);

/* table accessors; rows = steps + 1 */
int gcq_run_rows(const gcq_run* run);
int gcq_run_columns(const gcq_run* run);
const char* gcq_run_column_name(const gcq_run* run, int col);
/* copies min(cap, rows) values of one column into buf, returns the count */
int gcq_run_values(const gcq_run* run, int col, double* buf, int cap);
void gcq_run_free(gcq_run* run);

/* generalized exponential E_{a,b}(x) */
gcq_status gcq_mittag_leffler(double a, double b, double x, double* out);

#ifdef __cplusplus
}
#endif

#endif /* GCQ_H */
