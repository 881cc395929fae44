/* Statically compiled kernel variants with explicit 4-double vector
 * intrinsics. Build with -fno-tree-vectorize -fno-tree-slp-vectorize
 * -ffp-contract=off: scalar symbols must stay scalar and Horner must not
 * contract to FMA, so every variant is bit-compatible with the in-process
 * implementations that share its operation order.
 *
 * The horizontal-sum combines are fixed conventions shared with the
 * in-process side: packet chains fold pairwise ((s0+s1)+(s2+s3)), then
 * lanes fold pairwise ((l0+l1)+(l2+l3)).
 */
#include "kernels.h"

#if defined(__AVX__)
#include <immintrin.h>
#define KP_VECT 1
#else
#define KP_VECT 0
#endif

int kp_has_vect(void) { return KP_VECT; }

#define DEGREE_PLUS_1 65u

/* ---------------------------------------------------------------- arradd */

void kp_arradd_scalar(double *a, const double *b, uint64_t n)
{
    for (uint64_t i = 0; i < n; ++i)
        a[i] += b[i];
}

void kp_arradd_scalar_ooo(double *a, const double *b, uint64_t n)
{
    for (uint64_t i = 0; i < n; i += 4) {
        a[i] += b[i];
        a[i + 1] += b[i + 1];
        a[i + 2] += b[i + 2];
        a[i + 3] += b[i + 3];
    }
}

#if KP_VECT

void kp_arradd_vect(double *a, const double *b, uint64_t n)
{
    for (uint64_t i = 0; i < n; i += 4) {
        __m256d va = _mm256_load_pd(a + i);
        __m256d vb = _mm256_load_pd(b + i);
        _mm256_store_pd(a + i, _mm256_add_pd(va, vb));
    }
}

void kp_arradd_vect_ooo(double *a, const double *b, uint64_t n)
{
    for (uint64_t i = 0; i < n; i += 16) {
        __m256d a0 = _mm256_load_pd(a + i);
        __m256d a1 = _mm256_load_pd(a + i + 4);
        __m256d a2 = _mm256_load_pd(a + i + 8);
        __m256d a3 = _mm256_load_pd(a + i + 12);
        __m256d b0 = _mm256_load_pd(b + i);
        __m256d b1 = _mm256_load_pd(b + i + 4);
        __m256d b2 = _mm256_load_pd(b + i + 8);
        __m256d b3 = _mm256_load_pd(b + i + 12);
        _mm256_store_pd(a + i, _mm256_add_pd(a0, b0));
        _mm256_store_pd(a + i + 4, _mm256_add_pd(a1, b1));
        _mm256_store_pd(a + i + 8, _mm256_add_pd(a2, b2));
        _mm256_store_pd(a + i + 12, _mm256_add_pd(a3, b3));
    }
}

void kp_arradd_vect_unalign(double *a, const double *b, uint64_t n)
{
    for (uint64_t i = 0; i < n; i += 4) {
        __m256d va = _mm256_loadu_pd(a + i);
        __m256d vb = _mm256_loadu_pd(b + i);
        _mm256_storeu_pd(a + i, _mm256_add_pd(va, vb));
    }
}

#else /* scalar fallbacks, same packet-shaped operation order */

void kp_arradd_vect(double *a, const double *b, uint64_t n)
{
    kp_arradd_scalar_ooo(a, b, n);
}

void kp_arradd_vect_ooo(double *a, const double *b, uint64_t n)
{
    for (uint64_t i = 0; i < n; i += 16)
        for (uint64_t k = 0; k < 16; ++k)
            a[i + k] += b[i + k];
}

void kp_arradd_vect_unalign(double *a, const double *b, uint64_t n)
{
    kp_arradd_scalar_ooo(a, b, n);
}

#endif

/* ------------------------------------------------------------------ hsum */

double kp_hsum_scalar(const double *a, uint64_t n)
{
    double s = 0.0;
    for (uint64_t i = 0; i < n; ++i)
        s += a[i];
    return s;
}

double kp_hsum_scalar_ooo(const double *a, uint64_t n)
{
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    for (uint64_t i = 0; i < n; i += 4) {
        s0 += a[i];
        s1 += a[i + 1];
        s2 += a[i + 2];
        s3 += a[i + 3];
    }
    return (s0 + s1) + (s2 + s3);
}

#if KP_VECT

static inline double kp_fold_lanes(__m256d v)
{
    double lane[4];
    _mm256_storeu_pd(lane, v);
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double kp_hsum_vect(const double *a, uint64_t n)
{
    __m256d s = _mm256_setzero_pd();
    for (uint64_t i = 0; i < n; i += 4)
        s = _mm256_add_pd(s, _mm256_load_pd(a + i));
    return kp_fold_lanes(s);
}

double kp_hsum_vect_ooo(const double *a, uint64_t n)
{
    __m256d s0 = _mm256_setzero_pd();
    __m256d s1 = _mm256_setzero_pd();
    __m256d s2 = _mm256_setzero_pd();
    __m256d s3 = _mm256_setzero_pd();
    for (uint64_t i = 0; i < n; i += 16) {
        s0 = _mm256_add_pd(s0, _mm256_load_pd(a + i));
        s1 = _mm256_add_pd(s1, _mm256_load_pd(a + i + 4));
        s2 = _mm256_add_pd(s2, _mm256_load_pd(a + i + 8));
        s3 = _mm256_add_pd(s3, _mm256_load_pd(a + i + 12));
    }
    __m256d s = _mm256_add_pd(_mm256_add_pd(s0, s1), _mm256_add_pd(s2, s3));
    return kp_fold_lanes(s);
}

double kp_hsum_vect_unalign(const double *a, uint64_t n)
{
    __m256d s = _mm256_setzero_pd();
    for (uint64_t i = 0; i < n; i += 4)
        s = _mm256_add_pd(s, _mm256_loadu_pd(a + i));
    return kp_fold_lanes(s);
}

#else

double kp_hsum_vect(const double *a, uint64_t n)
{
    double l0 = 0.0, l1 = 0.0, l2 = 0.0, l3 = 0.0;
    for (uint64_t i = 0; i < n; i += 4) {
        l0 += a[i];
        l1 += a[i + 1];
        l2 += a[i + 2];
        l3 += a[i + 3];
    }
    return (l0 + l1) + (l2 + l3);
}

double kp_hsum_vect_ooo(const double *a, uint64_t n)
{
    double l[4][4] = {{0.0}};
    for (uint64_t i = 0; i < n; i += 16)
        for (uint64_t c = 0; c < 4; ++c)
            for (uint64_t k = 0; k < 4; ++k)
                l[c][k] += a[i + 4 * c + k];
    double lane[4];
    for (uint64_t k = 0; k < 4; ++k)
        lane[k] = (l[0][k] + l[1][k]) + (l[2][k] + l[3][k]);
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double kp_hsum_vect_unalign(const double *a, uint64_t n)
{
    return kp_hsum_vect(a, n);
}

#endif

/* ------------------------------------------------------------- horner_c1 */

void kp_horner_c1_scalar(const double *coeffs, const double *x, double *y,
                         uint64_t n)
{
    double c0 = coeffs[0];
    for (uint64_t j = 0; j < n; ++j)
        y[j] = c0;
    for (uint64_t k = 1; k < DEGREE_PLUS_1; ++k) {
        double ck = coeffs[k];
        for (uint64_t j = 0; j < n; ++j)
            y[j] = y[j] * x[j] + ck;
    }
}

void kp_horner_c1_scalar_ooo(const double *coeffs, const double *x, double *y,
                             uint64_t n)
{
    double c0 = coeffs[0];
    for (uint64_t j = 0; j < n; j += 4) {
        y[j] = c0;
        y[j + 1] = c0;
        y[j + 2] = c0;
        y[j + 3] = c0;
    }
    for (uint64_t k = 1; k < DEGREE_PLUS_1; ++k) {
        double ck = coeffs[k];
        for (uint64_t j = 0; j < n; j += 4) {
            y[j] = y[j] * x[j] + ck;
            y[j + 1] = y[j + 1] * x[j + 1] + ck;
            y[j + 2] = y[j + 2] * x[j + 2] + ck;
            y[j + 3] = y[j + 3] * x[j + 3] + ck;
        }
    }
}

#if KP_VECT

void kp_horner_c1_vect(const double *coeffs, const double *x, double *y,
                       uint64_t n)
{
    __m256d c0 = _mm256_set1_pd(coeffs[0]);
    for (uint64_t j = 0; j < n; j += 4)
        _mm256_store_pd(y + j, c0);
    for (uint64_t k = 1; k < DEGREE_PLUS_1; ++k) {
        __m256d ck = _mm256_set1_pd(coeffs[k]);
        for (uint64_t j = 0; j < n; j += 4) {
            __m256d vy = _mm256_load_pd(y + j);
            __m256d vx = _mm256_load_pd(x + j);
            _mm256_store_pd(y + j,
                            _mm256_add_pd(_mm256_mul_pd(vy, vx), ck));
        }
    }
}

void kp_horner_c1_vect_ooo(const double *coeffs, const double *x, double *y,
                           uint64_t n)
{
    __m256d c0 = _mm256_set1_pd(coeffs[0]);
    for (uint64_t j = 0; j < n; j += 16) {
        _mm256_store_pd(y + j, c0);
        _mm256_store_pd(y + j + 4, c0);
        _mm256_store_pd(y + j + 8, c0);
        _mm256_store_pd(y + j + 12, c0);
    }
    for (uint64_t k = 1; k < DEGREE_PLUS_1; ++k) {
        __m256d ck = _mm256_set1_pd(coeffs[k]);
        for (uint64_t j = 0; j < n; j += 16) {
            __m256d y0 = _mm256_load_pd(y + j);
            __m256d y1 = _mm256_load_pd(y + j + 4);
            __m256d y2 = _mm256_load_pd(y + j + 8);
            __m256d y3 = _mm256_load_pd(y + j + 12);
            __m256d x0 = _mm256_load_pd(x + j);
            __m256d x1 = _mm256_load_pd(x + j + 4);
            __m256d x2 = _mm256_load_pd(x + j + 8);
            __m256d x3 = _mm256_load_pd(x + j + 12);
            _mm256_store_pd(y + j, _mm256_add_pd(_mm256_mul_pd(y0, x0), ck));
            _mm256_store_pd(y + j + 4,
                            _mm256_add_pd(_mm256_mul_pd(y1, x1), ck));
            _mm256_store_pd(y + j + 8,
                            _mm256_add_pd(_mm256_mul_pd(y2, x2), ck));
            _mm256_store_pd(y + j + 12,
                            _mm256_add_pd(_mm256_mul_pd(y3, x3), ck));
        }
    }
}

void kp_horner_c1_vect_unalign(const double *coeffs, const double *x,
                               double *y, uint64_t n)
{
    __m256d c0 = _mm256_set1_pd(coeffs[0]);
    for (uint64_t j = 0; j < n; j += 4)
        _mm256_storeu_pd(y + j, c0);
    for (uint64_t k = 1; k < DEGREE_PLUS_1; ++k) {
        __m256d ck = _mm256_set1_pd(coeffs[k]);
        for (uint64_t j = 0; j < n; j += 4) {
            __m256d vy = _mm256_loadu_pd(y + j);
            __m256d vx = _mm256_loadu_pd(x + j);
            _mm256_storeu_pd(y + j,
                             _mm256_add_pd(_mm256_mul_pd(vy, vx), ck));
        }
    }
}

#else

void kp_horner_c1_vect(const double *coeffs, const double *x, double *y,
                       uint64_t n)
{
    kp_horner_c1_scalar_ooo(coeffs, x, y, n);
}

void kp_horner_c1_vect_ooo(const double *coeffs, const double *x, double *y,
                           uint64_t n)
{
    kp_horner_c1_scalar_ooo(coeffs, x, y, n);
}

void kp_horner_c1_vect_unalign(const double *coeffs, const double *x,
                               double *y, uint64_t n)
{
    kp_horner_c1_scalar_ooo(coeffs, x, y, n);
}

#endif

/* ------------------------------------------------------------- horner_d1 */

void kp_horner_d1_scalar(const double *coeffs, const double *x, double *y,
                         uint64_t n)
{
    for (uint64_t j = 0; j < n; ++j) {
        double xj = x[j];
        double acc = coeffs[0];
        for (uint64_t k = 1; k < DEGREE_PLUS_1; ++k)
            acc = acc * xj + coeffs[k];
        y[j] = acc;
    }
}

void kp_horner_d1_scalar_ooo(const double *coeffs, const double *x, double *y,
                             uint64_t n)
{
    for (uint64_t j = 0; j < n; j += 8) {
        double x0 = x[j], x1 = x[j + 1], x2 = x[j + 2], x3 = x[j + 3];
        double x4 = x[j + 4], x5 = x[j + 5], x6 = x[j + 6], x7 = x[j + 7];
        double c0 = coeffs[0];
        double a0 = c0, a1 = c0, a2 = c0, a3 = c0;
        double a4 = c0, a5 = c0, a6 = c0, a7 = c0;
        for (uint64_t k = 1; k < DEGREE_PLUS_1; ++k) {
            double ck = coeffs[k];
            a0 = a0 * x0 + ck;
            a1 = a1 * x1 + ck;
            a2 = a2 * x2 + ck;
            a3 = a3 * x3 + ck;
            a4 = a4 * x4 + ck;
            a5 = a5 * x5 + ck;
            a6 = a6 * x6 + ck;
            a7 = a7 * x7 + ck;
        }
        y[j] = a0;
        y[j + 1] = a1;
        y[j + 2] = a2;
        y[j + 3] = a3;
        y[j + 4] = a4;
        y[j + 5] = a5;
        y[j + 6] = a6;
        y[j + 7] = a7;
    }
}

#if KP_VECT

void kp_horner_d1_vect(const double *coeffs, const double *x, double *y,
                       uint64_t n)
{
    for (uint64_t j = 0; j < n; j += 4) {
        __m256d vx = _mm256_load_pd(x + j);
        __m256d acc = _mm256_set1_pd(coeffs[0]);
        for (uint64_t k = 1; k < DEGREE_PLUS_1; ++k) {
            __m256d ck = _mm256_set1_pd(coeffs[k]);
            acc = _mm256_add_pd(_mm256_mul_pd(acc, vx), ck);
        }
        _mm256_store_pd(y + j, acc);
    }
}

void kp_horner_d1_vect_ooo(const double *coeffs, const double *x, double *y,
                           uint64_t n)
{
    for (uint64_t j = 0; j < n; j += 32) {
        __m256d x0 = _mm256_load_pd(x + j);
        __m256d x1 = _mm256_load_pd(x + j + 4);
        __m256d x2 = _mm256_load_pd(x + j + 8);
        __m256d x3 = _mm256_load_pd(x + j + 12);
        __m256d x4 = _mm256_load_pd(x + j + 16);
        __m256d x5 = _mm256_load_pd(x + j + 20);
        __m256d x6 = _mm256_load_pd(x + j + 24);
        __m256d x7 = _mm256_load_pd(x + j + 28);
        __m256d c0 = _mm256_set1_pd(coeffs[0]);
        __m256d a0 = c0, a1 = c0, a2 = c0, a3 = c0;
        __m256d a4 = c0, a5 = c0, a6 = c0, a7 = c0;
        for (uint64_t k = 1; k < DEGREE_PLUS_1; ++k) {
            __m256d ck = _mm256_set1_pd(coeffs[k]);
            a0 = _mm256_add_pd(_mm256_mul_pd(a0, x0), ck);
            a1 = _mm256_add_pd(_mm256_mul_pd(a1, x1), ck);
            a2 = _mm256_add_pd(_mm256_mul_pd(a2, x2), ck);
            a3 = _mm256_add_pd(_mm256_mul_pd(a3, x3), ck);
            a4 = _mm256_add_pd(_mm256_mul_pd(a4, x4), ck);
            a5 = _mm256_add_pd(_mm256_mul_pd(a5, x5), ck);
            a6 = _mm256_add_pd(_mm256_mul_pd(a6, x6), ck);
            a7 = _mm256_add_pd(_mm256_mul_pd(a7, x7), ck);
        }
        _mm256_store_pd(y + j, a0);
        _mm256_store_pd(y + j + 4, a1);
        _mm256_store_pd(y + j + 8, a2);
        _mm256_store_pd(y + j + 12, a3);
        _mm256_store_pd(y + j + 16, a4);
        _mm256_store_pd(y + j + 20, a5);
        _mm256_store_pd(y + j + 24, a6);
        _mm256_store_pd(y + j + 28, a7);
    }
}

void kp_horner_d1_vect_unalign(const double *coeffs, const double *x,
                               double *y, uint64_t n)
{
    for (uint64_t j = 0; j < n; j += 4) {
        __m256d vx = _mm256_loadu_pd(x + j);
        __m256d acc = _mm256_set1_pd(coeffs[0]);
        for (uint64_t k = 1; k < DEGREE_PLUS_1; ++k) {
            __m256d ck = _mm256_set1_pd(coeffs[k]);
            acc = _mm256_add_pd(_mm256_mul_pd(acc, vx), ck);
        }
        _mm256_storeu_pd(y + j, acc);
    }
}

#else

void kp_horner_d1_vect(const double *coeffs, const double *x, double *y,
                       uint64_t n)
{
    for (uint64_t j = 0; j < n; j += 4) {
        double x0 = x[j], x1 = x[j + 1], x2 = x[j + 2], x3 = x[j + 3];
        double c0 = coeffs[0];
        double a0 = c0, a1 = c0, a2 = c0, a3 = c0;
        for (uint64_t k = 1; k < DEGREE_PLUS_1; ++k) {
            double ck = coeffs[k];
            a0 = a0 * x0 + ck;
            a1 = a1 * x1 + ck;
            a2 = a2 * x2 + ck;
            a3 = a3 * x3 + ck;
        }
        y[j] = a0;
        y[j + 1] = a1;
        y[j + 2] = a2;
        y[j + 3] = a3;
    }
}

void kp_horner_d1_vect_ooo(const double *coeffs, const double *x, double *y,
                           uint64_t n)
{
    /* per-point chains are independent, so any traversal is bit-equal */
    kp_horner_d1_scalar_ooo(coeffs, x, y, n);
}

void kp_horner_d1_vect_unalign(const double *coeffs, const double *x,
                               double *y, uint64_t n)
{
    kp_horner_d1_vect(coeffs, x, y, n);
}

#endif
