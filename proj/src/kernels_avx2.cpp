// SPDX-License-Identifier: Apache-2.0
// Built with -mavx2 -mfma; only reached after a runtime CPU check.
#include "rydsim/kernels.hpp"

#include <immintrin.h>

namespace ryd::kern::avx2 {

namespace {

inline __m256d load2(const cplx* p0, const cplx* p1) {
    return _mm256_insertf128_pd(
        _mm256_castpd128_pd256(_mm_loadu_pd(reinterpret_cast<const double*>(p0))),
        _mm_loadu_pd(reinterpret_cast<const double*>(p1)), 1);
}

// [a0 a1 a2 a3] -> a0+a2, a1+a3
inline __m128d fold(__m256d v) {
    return _mm_add_pd(_mm256_castpd256_pd128(v), _mm256_extractf128_pd(v, 1));
}

}  // namespace

void csr_rows(const CsrView& a, std::size_t r0, std::size_t r1, const cplx* x, cplx* y) {
    for (std::size_t r = r0; r < r1; ++r) {
        std::int64_t k = a.rowptr[r];
        const std::int64_t end = a.rowptr[r + 1];
        __m256d acc_re = _mm256_setzero_pd();  // v * x.re
        __m256d acc_im = _mm256_setzero_pd();  // swap(v) * x.im
        for (; k + 2 <= end; k += 2) {
            const __m256d v = _mm256_loadu_pd(reinterpret_cast<const double*>(a.val + k));
            const __m256d xv = load2(x + a.col[k], x + a.col[k + 1]);
            const __m256d xr = _mm256_movedup_pd(xv);
            const __m256d xi = _mm256_permute_pd(xv, 0xF);
            const __m256d vs = _mm256_permute_pd(v, 0x5);
            acc_re = _mm256_fmadd_pd(v, xr, acc_re);
            acc_im = _mm256_fmadd_pd(vs, xi, acc_im);
        }
        __m128d s = fold(_mm256_addsub_pd(acc_re, acc_im));
        if (k < end) {
            const __m128d v = _mm_loadu_pd(reinterpret_cast<const double*>(a.val + k));
            const __m128d xv = _mm_loadu_pd(reinterpret_cast<const double*>(x + a.col[k]));
            const __m128d xr = _mm_movedup_pd(xv);
            const __m128d xi = _mm_permute_pd(xv, 0x3);
            const __m128d vs = _mm_permute_pd(v, 0x1);
            s = _mm_add_pd(s, _mm_addsub_pd(_mm_mul_pd(v, xr), _mm_mul_pd(vs, xi)));
        }
        _mm_storeu_pd(reinterpret_cast<double*>(y + r), s);
    }
}

void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
    const __m256d ar = _mm256_set1_pd(alpha.real());
    const __m256d ai = _mm256_set1_pd(alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
        const __m256d yv = _mm256_loadu_pd(reinterpret_cast<const double*>(y + i));
        const __m256d xs = _mm256_permute_pd(xv, 0x5);
        const __m256d prod = _mm256_fmaddsub_pd(xv, ar, _mm256_mul_pd(xs, ai));
        _mm256_storeu_pd(reinterpret_cast<double*>(y + i), _mm256_add_pd(yv, prod));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

cplx dotc(std::size_t n, const cplx* x, const cplx* y) {
    __m256d acc_a = _mm256_setzero_pd();  // [xr*yr, xi*yi]
    __m256d acc_b = _mm256_setzero_pd();  // [xr*yi, xi*yr]
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
        const __m256d yv = _mm256_loadu_pd(reinterpret_cast<const double*>(y + i));
        acc_a = _mm256_fmadd_pd(xv, yv, acc_a);
        acc_b = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0x5), acc_b);
    }
    alignas(16) double a[2], b[2];
    _mm_store_pd(a, fold(acc_a));
    _mm_store_pd(b, fold(acc_b));
    double re = a[0] + a[1];
    double im = b[0] - b[1];
    for (; i < n; ++i) {
        re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
    }
    return {re, im};
}

void scale(std::size_t n, cplx alpha, cplx* x) {
    const __m256d ar = _mm256_set1_pd(alpha.real());
    const __m256d ai = _mm256_set1_pd(alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
        const __m256d xs = _mm256_permute_pd(xv, 0x5);
        _mm256_storeu_pd(reinterpret_cast<double*>(x + i),
                         _mm256_fmaddsub_pd(xv, ar, _mm256_mul_pd(xs, ai)));
    }
    for (; i < n; ++i) x[i] *= alpha;
}

}  // namespace ryd::kern::avx2
