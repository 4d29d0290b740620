#ifndef WARD_C_H
#define WARD_C_H

/* C interface to the soliton library: opaque handles, integer status codes,
 * malloc'd strings released through ws_string_free.  Thread safety: handles
 * are immutable after construction; the error string is thread-local. */

#ifdef __cplusplus
extern "C" {
#endif

typedef struct ws_solution ws_solution;

enum {
  WS_OK = 0,
  WS_ERR_IO = 1,
  WS_ERR_SCHEMA = 2,      /* bad JSON, bad expression, bad flag syntax */
  WS_ERR_SINGULAR = 3,    /* evaluation at a singular/masked point */
  WS_ERR_CONSTRUCTION = 4,/* construction rejected (pole clash, rank law, ...) */
  WS_ERR_VERIFY = 5,      /* verification ran and failed */
  WS_ERR_ARGUMENT = 6,    /* null pointer, index out of range, bad numeric arg */
  WS_ERR_INTERNAL = 7
};

/* Message for the most recent failure on this thread; never NULL. */
const char* ws_last_error(void);
void ws_string_free(char* s);
void ws_solution_free(ws_solution* s);

/* Build from a spec or record file / from JSON text. */
int ws_build_from_file(const char* path, ws_solution** out);
int ws_build_from_json(const char* text, ws_solution** out);

int ws_dimension(const ws_solution* s, int* n);
int ws_degree(const ws_solution* s, int* degree);
int ws_pole_count(const ws_solution* s, int* count);
int ws_pole(const ws_solution* s, int index, double* re, double* im, int* mult);
int ws_rank_count(const ws_solution* s, int* count);
int ws_rank(const ws_solution* s, int index, int* rank);
int ws_provenance(const ws_solution* s, char** out);
int ws_su_normalize(const ws_solution* s, int* flag);
int ws_set_su_normalize(ws_solution* s, int flag);

/* "degree D, poles [...], ranks [...], provenance P" */
int ws_build_summary(const ws_solution* s, char** out);

/* psi(x, y, t, lambda): n*n complex entries, row-major. */
int ws_eval(const ws_solution* s, double x, double y, double t, double lambda_re,
            double lambda_im, double* out_re, double* out_im);
/* J = psi(., 0)^-1 (SU-normalized when the handle's flag is set). */
int ws_ward_map(const ws_solution* s, double x, double y, double t, double* out_re,
                double* out_im);

/* Reloadable construction record (spec + summary). */
int ws_save_record(const ws_solution* s, const char* path);

/* Negative control: factor `index`'s projector perturbed by `magnitude`. */
int ws_corrupt_factor(const ws_solution* s, int index, double magnitude,
                      unsigned long long seed, ws_solution** out);

/* Runs the certification suite (plus chain-prefix checks); *report gets the
 * rendered line-per-check text, *all_pass the outcome.  fd_step <= 0 keeps
 * the default.  Returns WS_OK even when checks fail (consult all_pass). */
int ws_verify_report(const ws_solution* s, unsigned long long seed, double fd_step,
                     char** report, int* all_pass);

/* One CSV per t value.  grid "" keeps the default 201x201 over [-10,10]^2;
 * quantity "" means energy_density.  With several t values an index _000k is
 * inserted before the extension.  *summary lists the files written. */
int ws_sample_to_csv(const ws_solution* s, const char* grid, const char* t_values,
                     const char* quantity, double fd_step, const char* out_path,
                     char** summary);

/* steps+1 equally spaced frames (duplicate times collapsed) written to
 * out_dir/frame_0000.csv...; manifest.json lists them.  *manifest_path gets
 * the manifest location. */
int ws_frames_to_dir(const ws_solution* s, const char* grid, const char* quantity,
                     double fd_step, double t_start, double t_end, int steps,
                     const char* out_dir, char** manifest_path);

/* Per-pole minimal-factorization listing. */
int ws_factor_report(const ws_solution* s, char** listing);

#ifdef __cplusplus
}
#endif

#endif /* WARD_C_H */
