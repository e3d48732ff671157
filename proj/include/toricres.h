/* C interface to the toricres library.
 *
 * All objects are opaque handles created and destroyed here.  Functions
 * return trs_status; on failure trs_last_error() describes the problem for
 * the calling thread.  Strings returned through char** are owned by the
 * caller and released with trs_string_free.  Structured inputs and outputs
 * use the library's JSON file formats.
 */
#ifndef TORICRES_H
#define TORICRES_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum trs_status {
  TRS_OK = 0,
  TRS_ERR_VERIFY = 1,
  TRS_ERR_INPUT = 2,
  TRS_ERR_INTERNAL = 3
} trs_status;

typedef struct trs_fan trs_fan;
typedef struct trs_morphism trs_morphism;
typedef struct trs_quiver trs_quiver;
typedef struct trs_complex trs_complex;

const char* trs_last_error(void);
void trs_string_free(char* s);

void trs_fan_free(trs_fan* f);
void trs_morphism_free(trs_morphism* m);
void trs_quiver_free(trs_quiver* q);
void trs_complex_free(trs_complex* c);

/* fans */
trs_status trs_fan_parse(const char* json, trs_fan** out);
trs_status trs_fan_to_json(const trs_fan* f, char** out);
/* validates in place (face closure is completed); *valid reports the verdict */
trs_status trs_fan_validate(trs_fan* f, char** report_json, int* valid);
trs_status trs_fan_thomsen(const trs_fan* f, char** classes_json);
trs_status trs_fan_product(const trs_fan* a, const trs_fan* b, trs_fan** out);

/* morphisms; fan handles are copied into the morphism */
trs_status trs_morphism_parse(const char* json, const trs_fan* source, const trs_fan* target,
                              trs_morphism** out);
trs_status trs_point_morphism(const trs_fan* target, trs_morphism** out);
trs_status trs_diagonal_morphism(const trs_fan* f, trs_morphism** out);
trs_status trs_frobenius_morphism(const trs_fan* f, int64_t ell, trs_morphism** out);
trs_status trs_morphism_target_json(const trs_morphism* m, char** fan_json);

/* stratifications */
trs_status trs_stratify(const trs_morphism* m, size_t codim_bound, trs_quiver** out);
trs_status trs_quiver_to_json(const trs_quiver* q, char** out);
/* cell_labels/hairs toggle figure elements */
trs_status trs_quiver_render_svg(const trs_quiver* q, int cell_labels, int hairs, char** svg);

/* resolutions */
trs_status trs_resolve(const trs_morphism* m, size_t codim_bound, trs_complex** out);
trs_status trs_diagonal_resolution(const trs_fan* f, size_t codim_bound, trs_complex** out);
trs_status trs_complex_to_json(const trs_complex* c, const char* fan_path, const char* phi_path,
                               char** out);
trs_status trs_complex_parse(const char* json, const trs_fan* fan, const trs_morphism* phi,
                             trs_complex** out);
/* fan/phi path references of a complex file */
trs_status trs_complex_refs(const char* complex_json, char** fan_path, char** phi_path);

/* functoriality */
trs_status trs_restrict(const trs_complex* c, const size_t* rays, size_t nrays,
                        trs_complex** restricted, trs_complex** reduced, char** chart_fan_json);
trs_status trs_pushforward(const trs_complex* c, const trs_morphism* quotient, char** summands_json);

/* verification: d^2 = 0, homogeneity, randomized fiber checks and, when
 * check_koszul is nonzero, per-chart restriction + Koszul comparison.
 * *ok is 1 when every check passed. */
trs_status trs_verify(const trs_complex* c, size_t trials, uint64_t seed, int check_koszul,
                      char** report_json, int* ok);

/* Frobenius suite; divisor_json is a JSON array of ray coefficients */
trs_status trs_frobenius_pushforward(const trs_fan* f, const char* divisor_json, int64_t ell,
                                     char** out);
trs_status trs_frobenius_set(const trs_fan* f, const char* divisor_json, size_t rounds, char** out);
/* characteristic annotates the report only; pass 0 for none */
trs_status trs_generation_report(const trs_fan* f, const char* divisor_json, int characteristic,
                                 int verify_multiplicity, char** out);

#ifdef __cplusplus
}
#endif

#endif /* TORICRES_H */
