#ifndef CHEVFIBER_H
#define CHEVFIBER_H

/* C interface to libchevfiber.
 *
 * Every function returns a cf_status; on failure cf_last_error() holds a
 * message for the calling thread until its next failing call. Strings
 * returned through char** are owned by the caller and released with
 * cf_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CF_API __declspec(dllexport)
#else
#define CF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cf_status {
  CF_OK = 0,
  CF_ERR_INVALID_ARGUMENT = 1,
  CF_ERR_DIMENSION_MISMATCH = 2,
  CF_ERR_UNKNOWN_VARIABLE = 3,
  CF_ERR_UNSUPPORTED = 4,
  CF_ERR_PARSE = 5,
  CF_ERR_DEPENDENT = 6,
  CF_ERR_NON_INTEGER = 7,
  CF_ERR_RAMIFIED = 8,
  CF_ERR_DIVERGED = 9,
  CF_ERR_SINGULAR = 10,
  CF_ERR_SOLVER_FAILURE = 11,
  CF_ERR_INTEGRITY = 12,
  CF_ERR_CLUSTERING = 13,
  CF_ERR_CAPACITY = 14,
  CF_ERR_NOT_FOUND = 15,
  CF_ERR_IO = 16,
  CF_ERR_INTERNAL = 17
} cf_status;

typedef struct cf_complex {
  double re;
  double im;
} cf_complex;

CF_API const char* cf_version(void);
CF_API const char* cf_last_error(void);
/* "ok", "parse", "dependent", ... */
CF_API const char* cf_status_name(cf_status status);
CF_API void cf_string_free(char* s);
/* Parses "a", "bi", "a+bi", "a-bi", "i", "p/q". */
CF_API cf_status cf_complex_parse(const char* text, cf_complex* out);

/* ---- polynomials ---- */
typedef struct cf_poly cf_poly;

CF_API cf_status cf_poly_parse(const char* text, const char* const* vars, size_t nvars, cf_poly** out);
CF_API void cf_poly_free(cf_poly* p);
CF_API cf_status cf_poly_to_string(const cf_poly* p, char** out);
CF_API cf_status cf_poly_eval(const cf_poly* p, const cf_complex* z, size_t n, cf_complex* out);
CF_API cf_status cf_poly_derivative(const cf_poly* p, const char* var, cf_poly** out);
CF_API cf_status cf_poly_jacobian_det(const cf_poly* const* polys, size_t r, const char* const* xs, cf_poly** out);
CF_API cf_status cf_poly_restrict_zero(const cf_poly* p, const char* const* tvars, size_t nt, cf_poly** out);
/* *out = -1 for an inhomogeneous polynomial; the zero polynomial is an error. */
CF_API cf_status cf_poly_homogeneous_degree(const cf_poly* p, int* out);

/* ---- root systems ---- */
typedef struct cf_rootsys cf_rootsys;

/* Builds the root system and materializes its Weyl group. */
CF_API cf_status cf_rootsys_build(const char* type, int rank, cf_rootsys** out);
CF_API void cf_rootsys_free(cf_rootsys* rs);
CF_API cf_status cf_rootsys_info(const cf_rootsys* rs, int* rank, size_t* num_roots, uint64_t* weyl_order);
/* Copies up to cap degrees; *count receives the full count. */
CF_API cf_status cf_rootsys_degrees(const cf_rootsys* rs, unsigned* out, size_t cap, size_t* count);
CF_API cf_status cf_rootsys_manifest(const cf_rootsys* rs, char** out);
/* JSON: type, rank, roots, order, degrees, degree_product, product_matches. */
CF_API cf_status cf_rootsys_report_json(const cf_rootsys* rs, char** out);
/* JSON: variables, invariants [{degree, polynomial}], certificate {point, jacobian}. */
CF_API cf_status cf_rootsys_invariants_json(const cf_rootsys* rs, char** out);
/* Degree table lookup, E7 and E8 included. */
CF_API cf_status cf_degrees_for_label(const char* type, int rank, unsigned* out, size_t cap, size_t* count);

/* ---- pair configurations ---- */
typedef struct cf_pair cf_pair;

CF_API cf_status cf_pair_load(const char* path, cf_pair** out);
CF_API cf_status cf_pair_parse(const char* text, cf_pair** out);
CF_API void cf_pair_free(cf_pair* pair);
/* Restricts the selected invariants; fails with CF_ERR_DEPENDENT when the
 * restrictions are algebraically dependent. */
CF_API cf_status cf_pair_restrict(cf_pair* pair);
CF_API cf_status cf_pair_rank_d(cf_pair* pair, uint64_t* d);
CF_API cf_status cf_pair_little_order(const cf_pair* pair, uint64_t* order);
/* |W(a_q)| * d */
CF_API cf_status cf_pair_expected_count(cf_pair* pair, uint64_t* count);
/* Requires little_subgroup_order in the configuration. */
CF_API cf_status cf_pair_dim_E(cf_pair* pair, uint64_t* out);
CF_API cf_status cf_pair_surjectivity(cf_pair* pair, unsigned degree_bound, int* surjective, unsigned* failing_degree);
/* JSON report of the restriction: coordinates, adapted and restricted
 * family, J(t;x), J(0;x), degrees, d, surjectivity per degree. */
CF_API cf_status cf_pair_report_json(cf_pair* pair, unsigned degree_bound, char** out);
/* Run defaults stored in the configuration; absent values leave outputs
 * untouched and set the has_* flags to 0. */
CF_API cf_status cf_pair_defaults(const cf_pair* pair, uint64_t* seed, int* has_seed, double* tol, int* has_tol,
                                  unsigned* degree_bound, int* has_degree_bound);
CF_API cf_status cf_pair_default_point(const cf_pair* pair, const char* which, cf_complex* out, size_t cap,
                                       size_t* count);
CF_API cf_status cf_pair_dims(const cf_pair* pair, size_t* num_t, size_t* r);

/* ---- fibers ---- */
typedef struct cf_fiber_result cf_fiber_result;

typedef struct cf_fiber_options {
  uint64_t seed;
  double tol;
  double cluster_radius;
  unsigned threads; /* 0: CHEVFIBER_THREADS or hardware */
} cf_fiber_options;

CF_API void cf_fiber_options_default(cf_fiber_options* opts);
CF_API cf_status cf_fiber_solve(cf_pair* pair, const cf_complex* zeta, size_t nz, const cf_complex* target, size_t nt,
                                const cf_fiber_options* opts, cf_fiber_result** out);
/* Fiber over U_i(0; lambda) at zeta = lambda_xi. */
CF_API cf_status cf_lambda_solve(cf_pair* pair, const cf_complex* lambda_xi, size_t nz, const cf_complex* lambda,
                                 size_t nl, const cf_fiber_options* opts, cf_fiber_result** out);
CF_API void cf_fiber_result_free(cf_fiber_result* res);
CF_API size_t cf_fiber_result_count(const cf_fiber_result* res);
CF_API size_t cf_fiber_result_dim(const cf_fiber_result* res);
CF_API cf_status cf_fiber_result_solution(const cf_fiber_result* res, size_t k, cf_complex* out, size_t cap);
CF_API double cf_fiber_result_residual(const cf_fiber_result* res, size_t k);
CF_API size_t cf_fiber_result_classes(const cf_fiber_result* res);
CF_API cf_status cf_fiber_result_stats(const cf_fiber_result* res, size_t* tracked, size_t* failed, size_t* merged);
/* 1 when every solution is generic (unramified, pairings off the integers). */
CF_API cf_status cf_fiber_result_generic(const cf_fiber_result* res, int* generic);
CF_API cf_status cf_fiber_result_to_json(const cf_fiber_result* res, char** out);

/* Local inverse of x -> U(zeta;x) near nu0. */
CF_API cf_status cf_psi(cf_pair* pair, const cf_complex* zeta, size_t nz, const cf_complex* nu0,
                        const cf_complex* target, size_t r, cf_complex* out);
CF_API cf_status cf_is_unramified(cf_pair* pair, const cf_complex* zeta, size_t nz, const cf_complex* x, size_t r,
                                  int* out);

/* ---- classification database ---- */
typedef struct cf_pairdb cf_pairdb;

CF_API cf_status cf_pairdb_load(const char* path, cf_pairdb** out);
CF_API void cf_pairdb_free(cf_pairdb* db);
CF_API size_t cf_pairdb_size(const cf_pairdb* db);
/* format: "json", "csv" or "text". */
CF_API cf_status cf_pairdb_table(const cf_pairdb* db, const char* filter, const char* format, char** out,
                                 size_t* rows);
/* ok = 1 when every database-wide check passes; problems lists failures. */
CF_API cf_status cf_pairdb_integrity(const cf_pairdb* db, int* ok, size_t* exceptional, size_t* b_exceptional,
                                     char** problems);

#ifdef __cplusplus
}
#endif

#endif
