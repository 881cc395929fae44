/* C ABI for the kernelprof native kernels.
 *
 * Symbols follow kp_<kernel>_<variant> with
 *   kernel  in {arradd, hsum, horner_c1, horner_d1}
 *   variant in {scalar, scalar_ooo, vect, vect_ooo, vect_unalign}
 *
 * Doubles are IEEE-754 binary64; element counts are 64-bit unsigned.
 * Preconditions are the caller's contract:
 *   - vect / vect_ooo variants require 32-byte-aligned array addresses
 *     (vect_unalign accepts 8-byte alignment);
 *   - n must be a multiple of 4 for vect and vect_unalign, 16 for
 *     vect_ooo (32 for horner_d1 vect_ooo), 4 for scalar_ooo
 *     (8 for horner_d1 scalar_ooo);
 *   - horner coefficient arrays hold exactly 65 doubles, highest-degree
 *     coefficient first.
 *
 * kp_has_vect() reports whether the vectorized symbols were compiled with
 * 256-bit intrinsics (1) or fell back to packet-shaped scalar code (0);
 * the fallback keeps the same operation order, so results are identical.
 */
#ifndef KERNELPROF_NATIVE_KERNELS_H
#define KERNELPROF_NATIVE_KERNELS_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

int kp_has_vect(void);

void kp_arradd_scalar(double *a, const double *b, uint64_t n);
void kp_arradd_scalar_ooo(double *a, const double *b, uint64_t n);
void kp_arradd_vect(double *a, const double *b, uint64_t n);
void kp_arradd_vect_ooo(double *a, const double *b, uint64_t n);
void kp_arradd_vect_unalign(double *a, const double *b, uint64_t n);

double kp_hsum_scalar(const double *a, uint64_t n);
double kp_hsum_scalar_ooo(const double *a, uint64_t n);
double kp_hsum_vect(const double *a, uint64_t n);
double kp_hsum_vect_ooo(const double *a, uint64_t n);
double kp_hsum_vect_unalign(const double *a, uint64_t n);

void kp_horner_c1_scalar(const double *coeffs, const double *x, double *y,
                         uint64_t n);
void kp_horner_c1_scalar_ooo(const double *coeffs, const double *x, double *y,
                             uint64_t n);
void kp_horner_c1_vect(const double *coeffs, const double *x, double *y,
                       uint64_t n);
void kp_horner_c1_vect_ooo(const double *coeffs, const double *x, double *y,
                           uint64_t n);
void kp_horner_c1_vect_unalign(const double *coeffs, const double *x,
                               double *y, uint64_t n);

void kp_horner_d1_scalar(const double *coeffs, const double *x, double *y,
                         uint64_t n);
void kp_horner_d1_scalar_ooo(const double *coeffs, const double *x, double *y,
                             uint64_t n);
void kp_horner_d1_vect(const double *coeffs, const double *x, double *y,
                       uint64_t n);
void kp_horner_d1_vect_ooo(const double *coeffs, const double *x, double *y,
                           uint64_t n);
void kp_horner_d1_vect_unalign(const double *coeffs, const double *x,
                               double *y, uint64_t n);

#ifdef __cplusplus
}
#endif

#endif /* KERNELPROF_NATIVE_KERNELS_H */
