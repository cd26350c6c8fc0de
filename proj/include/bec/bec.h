/* C interface to the bulk-edge invariant library. */
#ifndef BEC_BEC_H
#define BEC_BEC_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define BEC_API __declspec(dllexport)
#else
#define BEC_API __attribute__((visibility("default")))
#endif

typedef enum bec_status {
    BEC_OK = 0,
    BEC_ERR_CONTRACT,
    BEC_ERR_DOMAIN,
    BEC_ERR_INPUT,
    BEC_ERR_INADMISSIBLE,
    BEC_ERR_NOT_AFFILIATED,
    BEC_ERR_NUMERICAL,
    BEC_ERR_INSUFFICIENT_RESOLUTION,
    BEC_ERR_GAPLESS,
    BEC_ERR_NO_GAP,
    BEC_ERR_BAND_EDGE,
    BEC_ERR_DEGENERATE_EXPONENT,
    BEC_ERR_TRIPLE_DEGENERACY,
    BEC_ERR_NOT_COMPARABLE,
    BEC_ERR_LOST_BAND,
    BEC_ERR_UNSUPPORTED,
    BEC_ERR_INTERNAL
} bec_status;

typedef struct bec_model bec_model;
typedef struct bec_bc bec_bc;
typedef struct bec_bands bec_bands;

/* Where an option value came from; reported in every invariant report. */
enum { BEC_SRC_DEFAULT = 0, BEC_SRC_FILE = 1, BEC_SRC_FLAG = 2 };

/* NaN in a double field means "use the model default". */
typedef struct bec_options {
    double tol;
    double k_window;
    int k_resolution;
    int lambda_resolution;
    int max_halvings;
    double E;
    double level;
    double gap_lo;
    double gap_hi;
    /* BEC_SRC_* for tol, k_window, k_resolution, lambda_resolution,
       max_halvings, E, level, gap (in that order). */
    int source[8];
} bec_options;

/* Message of the last failed call on this thread ("" if none). */
BEC_API const char* bec_last_error(void);
BEC_API const char* bec_status_name(bec_status s);
/* Process exit code for a status: 0 ok, 2 input/admissibility, 3 numerical. */
BEC_API int bec_status_exit_code(bec_status s);

BEC_API void bec_options_default(bec_options* opt);

/* Models. params is "key=val,key=val" or NULL. */
BEC_API bec_status bec_model_builtin(const char* name, const char* params, bec_model** out);
BEC_API bec_status bec_model_from_text(const char* text, bec_model** out);
BEC_API bec_status bec_model_from_file(const char* path, bec_model** out);
BEC_API void bec_model_free(bec_model* m);
/* Normalized model-file text; free with bec_string_free. */
BEC_API bec_status bec_model_emit(const bec_model* m, char** text);
/* Overlay the model file's [numerics] and [task] values onto opt. */
BEC_API bec_status bec_model_apply_options(const bec_model* m, bec_options* opt);

/* Boundary conditions. spec is "family:key=val,...". */
BEC_API bec_status bec_bc_create(const bec_model* m, const char* spec, bec_bc** out);
/* The model file's [boundary] (which = 0) or [reference] (which = 1) section. */
BEC_API bec_status bec_bc_from_model(const bec_model* m, int which, bec_bc** out);
/* Reference (A, B) = (1, 0) of the triple used by bc, or of the model's default setup when bc is NULL. */
BEC_API bec_status bec_bc_reference(const bec_model* m, const bec_bc* bc, bec_bc** out);
BEC_API void bec_bc_free(bec_bc* bc);

/* Numbers. */
BEC_API bec_status bec_chern(const bec_model* m, double level, double tol, double* value, double* residual);
BEC_API bec_status bec_relative_chern(const bec_model* m1, const bec_model* m2, double level, double tol,
                                      double* value, double* residual);
/* verdict: 0 affiliated, 1 not affiliated, 2 inconclusive; direction +1, -1, 2 or 0. */
BEC_API bec_status bec_affiliation(const bec_model* m, const bec_bc* bc, int* verdict, int* direction);
/* ref may be NULL for the triple's reference. value = SF(bc) - SF(ref). */
BEC_API bec_status bec_winding(const bec_model* m, const bec_bc* bc, const bec_bc* ref, int* value,
                               double* residual);
BEC_API bec_status bec_edge_eigenvalues(const bec_model* m, const bec_bc* bc, double k, double gap_lo,
                                        double gap_hi, int lambda_resolution, double* out, size_t capacity,
                                        size_t* count);

/* Band tracking. */
BEC_API bec_status bec_track_bands(const bec_model* m, const bec_bc* bc, const bec_options* opt, bec_bands** out);
BEC_API size_t bec_bands_count(const bec_bands* b);
BEC_API size_t bec_band_samples(const bec_bands* b, size_t band);
BEC_API bec_status bec_band_sample(const bec_bands* b, size_t band, size_t i, double* k, double* lambda);
BEC_API int bec_band_flat(const bec_bands* b, size_t band);
BEC_API bec_status bec_spectral_flow(const bec_bands* b, double E, int* value, int* flagged);
BEC_API bec_status bec_bands_csv(const bec_bands* b, char** text);
BEC_API void bec_bands_free(bec_bands* b);

/* Reports. text receives the rendered report (free with bec_string_free);
   outcome is 0 for success, 1 for a verification mismatch, 2 when skipped. */
BEC_API bec_status bec_report_bulk(const bec_model* m, const bec_options* opt, char** text, int* outcome);
BEC_API bec_status bec_report_relative_chern(const bec_model* m1, const bec_model* m2, const bec_options* opt,
                                             char** text, int* outcome);
/* csv_path and svg_path may be NULL. */
BEC_API bec_status bec_report_edge_spectrum(const bec_model* m, const bec_bc* bc, const bec_options* opt,
                                            const char* csv_path, const char* svg_path, char** text,
                                            int* outcome);
BEC_API bec_status bec_report_edge_flow(const bec_model* m, const bec_bc* bc, const bec_options* opt, char** text,
                                        int* outcome);
BEC_API bec_status bec_report_winding(const bec_model* m, const bec_bc* bc, const bec_bc* ref,
                                      const bec_options* opt, char** text, int* outcome);
BEC_API bec_status bec_report_verify(const bec_model* m, const bec_bc* bc, const bec_bc* ref,
                                     const bec_options* opt, char** text, int* outcome);
/* which: "laplacian", "dirac", "regdirac". outcome is the number of mismatched rows. */
BEC_API bec_status bec_report_table(const char* which, const bec_options* opt, char** text, int* outcome);

BEC_API void bec_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
