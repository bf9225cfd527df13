// SPDX-License-Identifier: Apache-2.0
// AArch64 path: one complex per float64x2_t lane pair.
#include "rydsim/kernels.hpp"

#include <arm_neon.h>

namespace ryd::kern::neon {

namespace {

// (a.re, a.im) * (b.re, b.im) accumulated into acc as (re, im)
inline float64x2_t cmla(float64x2_t acc, float64x2_t a, float64x2_t b) {
    const float64x2_t br = vdupq_laneq_f64(b, 0);
    const float64x2_t bi = vdupq_laneq_f64(b, 1);
    const float64x2_t as = vextq_f64(a, a, 1);  // (a.im, a.re)
    const float64x2_t sign = {-1.0, 1.0};
    acc = vfmaq_f64(acc, a, br);
    return vfmaq_f64(acc, vmulq_f64(as, sign), bi);
}

}  // namespace

void csr_rows(const CsrView& a, std::size_t r0, std::size_t r1, const cplx* x, cplx* y) {
    for (std::size_t r = r0; r < r1; ++r) {
        float64x2_t acc = vdupq_n_f64(0.0);
        for (std::int64_t k = a.rowptr[r]; k < a.rowptr[r + 1]; ++k) {
            acc = cmla(acc, vld1q_f64(reinterpret_cast<const double*>(a.val + k)),
                       vld1q_f64(reinterpret_cast<const double*>(x + a.col[k])));
        }
        vst1q_f64(reinterpret_cast<double*>(y + r), acc);
    }
}

void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
    const float64x2_t al = {alpha.real(), alpha.imag()};
    for (std::size_t i = 0; i < n; ++i) {
        float64x2_t yv = vld1q_f64(reinterpret_cast<const double*>(y + i));
        yv = cmla(yv, vld1q_f64(reinterpret_cast<const double*>(x + i)), al);
        vst1q_f64(reinterpret_cast<double*>(y + i), yv);
    }
}

cplx dotc(std::size_t n, const cplx* x, const cplx* y) {
    float64x2_t a = vdupq_n_f64(0.0), b = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const float64x2_t xv = vld1q_f64(reinterpret_cast<const double*>(x + i));
        const float64x2_t yv = vld1q_f64(reinterpret_cast<const double*>(y + i));
        a = vfmaq_f64(a, xv, yv);
        b = vfmaq_f64(b, xv, vextq_f64(yv, yv, 1));
    }
    return {vgetq_lane_f64(a, 0) + vgetq_lane_f64(a, 1),
            vgetq_lane_f64(b, 0) - vgetq_lane_f64(b, 1)};
}

void scale(std::size_t n, cplx alpha, cplx* x) {
    const float64x2_t al = {alpha.real(), alpha.imag()};
    for (std::size_t i = 0; i < n; ++i) {
        const float64x2_t xv = vld1q_f64(reinterpret_cast<const double*>(x + i));
        vst1q_f64(reinterpret_cast<double*>(x + i), cmla(vdupq_n_f64(0.0), xv, al));
    }
}

}  // namespace ryd::kern::neon
