/*
 * selseg - selective image segmentation by nonlinear multigrid, with a
 * local Fourier rate analysis of the smoothers.
 *
 * C API: opaque handles, status codes, and a thread-local error message.
 * Every function returning selseg_status yields SELSEG_OK on success; on
 * failure the out-parameters are left untouched and selseg_last_error()
 * describes the problem.
 */
#ifndef SELSEG_H
#define SELSEG_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum selseg_status {
    SELSEG_OK = 0,
    SELSEG_ERR_PARAM = 1,      /* invalid parameter or marker set */
    SELSEG_ERR_DIMENSION = 2,  /* incompatible grid sizes */
    SELSEG_ERR_FORMAT = 3,     /* malformed input file */
    SELSEG_ERR_IO = 4,         /* unreadable or unwritable path */
    SELSEG_ERR_NUMERIC = 5,    /* non-finite values encountered */
    SELSEG_ERR_SINGULAR = 6,   /* singular linear subsystem */
    SELSEG_ERR_DEGENERATE = 7, /* degenerate region weights */
    SELSEG_ERR_DIVERGED = 8,   /* iteration stopped making progress */
    SELSEG_ERR_UNKNOWN = 9
} selseg_status;

typedef struct selseg_image selseg_image;
typedef struct selseg_markers selseg_markers;
typedef struct selseg_result selseg_result;
typedef struct selseg_lfa_report selseg_lfa_report;

/* Segmentation model. */
typedef enum selseg_model {
    SELSEG_MODEL_RADA_CHEN = 0,   /* polygon-area constrained */
    SELSEG_MODEL_SPENCER_CHEN = 1 /* standalone distance penalty */
} selseg_model;

/* Smoother used inside the multigrid cycle. */
typedef enum selseg_smoother {
    SELSEG_SMOOTHER_GSLEX1 = 0,
    SELSEG_SMOOTHER_GSLEX2 = 1,
    SELSEG_SMOOTHER_GSLINE1 = 2,
    SELSEG_SMOOTHER_GSLINE2 = 3,
    SELSEG_SMOOTHER_NEWT1 = 4,
    SELSEG_SMOOTHER_NEWT2 = 5,
    SELSEG_SMOOTHER_HYBRID1 = 6,
    SELSEG_SMOOTHER_HYBRID2 = 7
} selseg_smoother;

typedef struct selseg_params {
    selseg_model model;
    double mu;            /* regularisation weight */
    double lambda1;       /* inside fitting weight */
    double lambda2;       /* outside fitting weight */
    double nu;            /* area weight (Rada-Chen) */
    double theta;         /* distance weight (Spencer-Chen) */
    double beta;          /* edge detector parameter */
    double sigma;         /* distance function width, domain units */
    double eps_heaviside; /* Heaviside regularisation */
    double eps_grad;      /* gradient regularisation */
} selseg_params;

typedef struct selseg_solve_config {
    selseg_smoother smoother;
    int gamma;         /* cycle shape, 1 = V-cycle */
    int nu1;           /* pre-smoothing steps */
    int nu2;           /* post-smoothing steps */
    int coarsest;      /* coarsest grid size */
    int coarse_iters;  /* coarsest-level line sweeps */
    int max_cycles;
    double eta;        /* relative-change stopping tolerance */
    double sigma_jump; /* jump-set detection threshold */
} selseg_solve_config;

/* Defaults: mu 0.5, lambda 1e-4, nu/theta 1, beta 100, sigma 0.1, eps 1. */
void selseg_params_init(selseg_params* params);
/* Defaults: hybrid2, V-cycle, nu1 = nu2 = 3, coarsest 32, 100 coarse
 * sweeps, eta 1e-4, 50 cycles max, jump threshold 1.5. */
void selseg_solve_config_init(selseg_solve_config* config);

const char* selseg_status_message(selseg_status status);
/* Message for the most recent failure on this thread. */
const char* selseg_last_error(void);

/* ---- images (intensities normalised to [0, 1]) ---- */
selseg_status selseg_image_load_pgm(const char* path, selseg_image** out);
selseg_status selseg_image_create(int width, int height, const double* values,
                                  selseg_image** out);
void selseg_image_free(selseg_image* image);
int selseg_image_width(const selseg_image* image);
int selseg_image_height(const selseg_image* image);
const double* selseg_image_data(const selseg_image* image);
selseg_status selseg_image_write_pgm(const selseg_image* image, const char* path, int maxval);
selseg_status selseg_image_resize(const selseg_image* image, int width, int height,
                                  selseg_image** out);
selseg_status selseg_image_crop(const selseg_image* image, int width, int height,
                                selseg_image** out);
/* Largest crop of (width, height) that halves cleanly down to `coarsest`. */
selseg_status selseg_compatible_crop(int width, int height, int coarsest, int* out_width,
                                     int* out_height);

/* ---- marker sets (pixel coordinates, origin top-left, y down) ---- */
selseg_status selseg_markers_load(const char* path, selseg_markers** out);
/* xy holds count pairs (x0, y0, x1, y1, ...). */
selseg_status selseg_markers_create(const double* xy, int count, selseg_markers** out);
void selseg_markers_free(selseg_markers* markers);
int selseg_markers_count(const selseg_markers* markers);
selseg_status selseg_markers_get(const selseg_markers* markers, int index, double* x, double* y);

/* ---- segmentation ---- */
selseg_status selseg_segment(const selseg_image* image, const selseg_markers* markers,
                             const selseg_params* params, const selseg_solve_config* config,
                             selseg_result** out);
int selseg_result_cycles(const selseg_result* result);
int selseg_result_converged(const selseg_result* result);
double selseg_result_wall_time(const selseg_result* result);
double selseg_result_solve_time(const selseg_result* result);
const double* selseg_result_energy_history(const selseg_result* result, int* length);
const double* selseg_result_rel_change_history(const selseg_result* result, int* length);
const double* selseg_result_phi(const selseg_result* result);
const unsigned char* selseg_result_mask(const selseg_result* result); /* 0 / 255 */
selseg_status selseg_result_write_mask(const selseg_result* result, const char* path);
selseg_status selseg_result_write_overlay(const selseg_result* result, const char* path);
selseg_status selseg_result_write_report(const selseg_result* result, const char* path);
void selseg_result_free(selseg_result* result);

/* ---- smoother rate analysis ----
 * Assembles the scheme coefficients from phi (the marker-polygon
 * initialisation when phi is NULL; otherwise width*height values) and
 * evaluates the per-pixel high-frequency amplification of the configured
 * smoother over a q-samples-per-axis frequency grid. */
selseg_status selseg_lfa_analyze(const selseg_image* image, const selseg_markers* markers,
                                 const selseg_params* params,
                                 const selseg_solve_config* config, int q, const double* phi,
                                 selseg_lfa_report** out);
double selseg_lfa_mu_max(const selseg_lfa_report* report);
double selseg_lfa_mu_avg(const selseg_lfa_report* report);
double selseg_lfa_mu_max_jump(const selseg_lfa_report* report);
double selseg_lfa_mu_avg_jump(const selseg_lfa_report* report);
double selseg_lfa_mu_max_smooth(const selseg_lfa_report* report);
double selseg_lfa_mu_avg_smooth(const selseg_lfa_report* report);
int selseg_lfa_worst_count(const selseg_lfa_report* report);
selseg_status selseg_lfa_worst_row(const selseg_lfa_report* report, int index, int* i, int* j,
                                   double* mu, double abcd[4]);
selseg_status selseg_lfa_write_report(const selseg_lfa_report* report, const char* path);
/* Binary PGM: 255 where the per-pixel rate exceeds the threshold. */
selseg_status selseg_lfa_write_rate_map(const selseg_lfa_report* report, double threshold,
                                        const char* path);
void selseg_lfa_report_free(selseg_lfa_report* report);

/* ---- smoothing-step tuning ----
 * Runs a full solve for each nu1 = nu2 = nu in [nu_min, nu_max]; cycles_out
 * needs nu_max - nu_min + 1 entries. recommended gets the first nu at which
 * the cycle count plateaus. */
selseg_status selseg_tune(const selseg_image* image, const selseg_markers* markers,
                          const selseg_params* params, const selseg_solve_config* config,
                          int nu_min, int nu_max, int* cycles_out, int* recommended);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SELSEG_H */
