#ifndef CP1GRAFT_H
#define CP1GRAFT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every call.
typedef enum Cp1gStatus {
  CP1G_STATUS_OK = 0,
  CP1G_STATUS_NULL_POINTER = 1,
  // Malformed coordinates, words, weights or domain data.
  CP1G_STATUS_INVALID_INPUT = 2,
  // Well-formed input outside the region where the answer is defined.
  CP1G_STATUS_PRECONDITION = 3,
  CP1G_STATUS_NUMERIC = 4,
  CP1G_STATUS_PANIC = 5,
} Cp1gStatus;

// The complement of finitely many points of the sphere.
typedef struct Cp1gDomain Cp1gDomain;

// A grafted projective structure on a genus-2 surface.
typedef struct Cp1gStructure Cp1gStructure;

// A point of the Riemann sphere; `re` and `im` are unset at infinity.
typedef struct Cp1gPoint {
  double re;
  double im;
  bool is_infinity;
} Cp1gPoint;

// A point of upper half-space `(z, t)` with `t > 0`.
typedef struct Cp1gH3Point {
  double re;
  double im;
  double t;
} Cp1gH3Point;

// A round disk as the Hermitian form `a |z|^2 + 2 Re(conj(z) b) + d < 0`,
// with the number of complement points on its boundary.
typedef struct Cp1gDisk {
  double a;
  double b_re;
  double b_im;
  double d;
  size_t ideal_points;
} Cp1gDisk;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread into `buf` as a
// NUL-terminated string, truncating to `len` bytes. Returns the full
// message length without the terminator.
//
// # Safety
// `buf` must be null or valid for `len` bytes.
size_t cp1g_last_error(char *buf, size_t len);

// Builds the grafting of the genus-2 surface with the given Fenchel-Nielsen
// coordinates along `n` curves. `words[i]` is a word in `a1 b1 a2 b2` (capitals
// for inverses) and `weights[i]` a weight such as `pi/2` or `2*pi`. Leaves
// are lifted up to word length `depth`.
//
// # Safety
// `lengths` and `twists` must point to 3 doubles, `words` and `weights` to
// `n` NUL-terminated strings each, and `out` must be valid for a write.
enum Cp1gStatus cp1g_structure_new(const double *lengths,
                                   const double *twists,
                                   const char *const *words,
                                   const char *const *weights,
                                   size_t n,
                                   size_t depth,
                                   struct Cp1gStructure **out);

// # Safety
// `s` must be null or a handle from `cp1g_structure_new` not yet freed.
void cp1g_structure_free(struct Cp1gStructure *s);

// Writes the four generator matrices `a1 b1 a2 b2` of the grafted holonomy,
// or of the Fuchsian one when `grafted` is false, as 32 doubles: for each
// generator the entries `a b c d` as `(re, im)` pairs.
//
// # Safety
// `s` must be a live handle and `out` valid for 32 doubles.
enum Cp1gStatus cp1g_structure_holonomy(const struct Cp1gStructure *s, bool grafted, double *out);

// Developing map at the point `re + i im` of the hyperbolic plane, which
// must lie off the grafted leaves.
//
// # Safety
// `s` must be a live handle and `out` valid for a write.
enum Cp1gStatus cp1g_structure_develop(const struct Cp1gStructure *s,
                                       double re,
                                       double im,
                                       struct Cp1gPoint *out);

// Bending map at the point `re + i im` of the hyperbolic plane.
//
// # Safety
// `s` must be a live handle and `out` valid for a write.
enum Cp1gStatus cp1g_structure_pleat(const struct Cp1gStructure *s,
                                     double re,
                                     double im,
                                     struct Cp1gH3Point *out);

// Domain whose complement is the `n` finite points `re[i] + i im[i]`.
//
// # Safety
// `re` and `im` must point to `n` doubles and `out` be valid for a write.
enum Cp1gStatus cp1g_domain_new(const double *re,
                                const double *im,
                                size_t n,
                                struct Cp1gDomain **out);

// Domain whose complement is the vertex set of a regular ideal tetrahedron.
//
// # Safety
// `out` must be valid for a write.
enum Cp1gStatus cp1g_domain_tetrahedron(struct Cp1gDomain **out);

// # Safety
// `d` must be null or a domain handle not yet freed.
void cp1g_domain_free(struct Cp1gDomain *d);

// The maximal disk of the domain whose core contains `re + i im`.
//
// # Safety
// `d` must be a live handle and `out` valid for a write.
enum Cp1gStatus cp1g_domain_maximal_disk(const struct Cp1gDomain *d,
                                         double re,
                                         double im,
                                         struct Cp1gDisk *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CP1GRAFT_H */
