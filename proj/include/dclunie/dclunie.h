#ifndef DCLUNIE_H
#define DCLUNIE_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define DCL_API __attribute__((visibility("default")))
#else
#define DCL_API
#endif

#define DCL_SCHEMA_VERSION 1

/* Status codes double as command line exit codes. */
typedef enum dcl_status {
    DCL_OK = 0,
    DCL_ERR_INTERNAL = 1,
    DCL_ERR_PARSE = 2,       /* parse or normalize error, bad argument */
    DCL_ERR_UNSUPPORTED = 3, /* unsupported shape, degenerate Riccati equation */
    DCL_ERR_NUMERIC = 4      /* numeric quality failure */
} dcl_status;

typedef struct dcl_session dcl_session;
typedef struct dcl_equation dcl_equation;

typedef struct dcl_options {
    int max_order;        /* pole orders k = 1..max_order, default 3 */
    double tol;           /* orbit classification residual, default 1e-6 */
    int precision;        /* orbit working precision in bits, default 128 */
    int steps;            /* orbit steps, default 200 */
    const double* radii;  /* Nevanlinna radii; NULL for 8, 16, ... up to rmax */
    size_t n_radii;
} dcl_options;

typedef struct dcl_orbit_options {
    int riccati;         /* iterate as w(z+1) = (a w + b)/(w - c) */
    const char* z0;      /* NULL: 1/3 */
    const char* w0;      /* NULL: c(z0) for Riccati, a seeded sample point otherwise */
    const char* w1;      /* second-order seed w(z0+1); NULL: seeded sample point */
    const char* const* bindings; /* "name=value" numeric values for declared symbols */
    size_t n_bindings;
} dcl_orbit_options;

typedef struct dcl_nevan_options {
    const char* check;  /* "curve", "order", "logdiff", "technical" or "valiron"; NULL: "curve" */
    const char* shift;  /* logdiff shift c, rational text; NULL: "1" */
    double s;           /* technical lemma step, default 1 */
    double delta;       /* technical lemma exponent, default 0.5 */
    const char* R;      /* valiron: rational function of w */
    double rmax;        /* largest radius 2^j for default radii and the order fit, default 1024 */
} dcl_nevan_options;

DCL_API const char* dcl_version(void);

DCL_API void dcl_options_init(dcl_options* o);
DCL_API void dcl_orbit_options_init(dcl_orbit_options* o);
DCL_API void dcl_nevan_options_init(dcl_nevan_options* o);

DCL_API dcl_session* dcl_session_new(void);
DCL_API void dcl_session_free(dcl_session* s);
/* Message of the last failed call on this session; "" after success. */
DCL_API const char* dcl_last_error(const dcl_session* s);
/* "name[:period=k][:constant]" */
DCL_API dcl_status dcl_declare_symbol(dcl_session* s, const char* spec);

DCL_API dcl_status dcl_equation_parse(dcl_session* s, const char* text, dcl_equation** out);
DCL_API void dcl_equation_free(dcl_equation* e);
DCL_API dcl_status dcl_equation_canonical(dcl_session* s, const dcl_equation* e, char** out);

/* JSON reports (schema 1). Strings returned through char** are released with dcl_string_free. */
DCL_API dcl_status dcl_analyze(dcl_session* s, const dcl_equation* e, const dcl_options* o, char** json);
DCL_API dcl_status dcl_singular(dcl_session* s, const dcl_equation* e, const dcl_options* o, char** json);
DCL_API dcl_status dcl_riccati(dcl_session* s, const dcl_equation* e, const dcl_options* o, char** json);
/* csv may be NULL. Columns n, Re(z), Im(z), Re(w), Im(w), is_pole, family_id. */
DCL_API dcl_status dcl_orbit(dcl_session* s, const dcl_equation* e, const dcl_options* o,
                             const dcl_orbit_options* oo, char** json, char** csv);
/* csv may be NULL. Columns r, m, N, T, quality. */
DCL_API dcl_status dcl_nevan(dcl_session* s, const char* function, const dcl_options* o,
                             const dcl_nevan_options* no, char** json, char** csv);

DCL_API void dcl_string_free(char* p);

#ifdef __cplusplus
}
#endif

#endif
