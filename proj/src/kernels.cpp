// SPDX-License-Identifier: Apache-2.0
#include "rydsim/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>
#include <thread>
#include <vector>

namespace ryd::kern {

namespace scalar {

void csr_rows(const CsrView& a, std::size_t r0, std::size_t r1, const cplx* x, cplx* y) {
    for (std::size_t r = r0; r < r1; ++r) {
        double re = 0.0, im = 0.0;
        for (std::int64_t k = a.rowptr[r]; k < a.rowptr[r + 1]; ++k) {
            const cplx v = a.val[k];
            const cplx xv = x[a.col[k]];
            re += v.real() * xv.real() - v.imag() * xv.imag();
            im += v.real() * xv.imag() + v.imag() * xv.real();
        }
        y[r] = cplx(re, im);
    }
}

void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

cplx dotc(std::size_t n, const cplx* x, const cplx* y) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
    }
    return {re, im};
}

void scale(std::size_t n, cplx alpha, cplx* x) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

}  // namespace scalar

#if !defined(RYDSIM_BUILD_AVX2)
namespace avx2 {
void csr_rows(const CsrView& a, std::size_t r0, std::size_t r1, const cplx* x, cplx* y) {
    scalar::csr_rows(a, r0, r1, x, y);
}
void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) { scalar::axpy(n, alpha, x, y); }
cplx dotc(std::size_t n, const cplx* x, const cplx* y) { return scalar::dotc(n, x, y); }
void scale(std::size_t n, cplx alpha, cplx* x) { scalar::scale(n, alpha, x); }
}  // namespace avx2
#endif

#if !defined(RYDSIM_BUILD_NEON)
namespace neon {
void csr_rows(const CsrView& a, std::size_t r0, std::size_t r1, const cplx* x, cplx* y) {
    scalar::csr_rows(a, r0, r1, x, y);
}
void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) { scalar::axpy(n, alpha, x, y); }
cplx dotc(std::size_t n, const cplx* x, const cplx* y) { return scalar::dotc(n, x, y); }
void scale(std::size_t n, cplx alpha, cplx* x) { scalar::scale(n, alpha, x); }
}  // namespace neon
#endif

namespace {

using rows_fn = void (*)(const CsrView&, std::size_t, std::size_t, const cplx*, cplx*);
using axpy_fn = void (*)(std::size_t, cplx, const cplx*, cplx*);
using dotc_fn = cplx (*)(std::size_t, const cplx*, const cplx*);
using scale_fn = void (*)(std::size_t, cplx, cplx*);

struct Table {
    Backend backend;
    rows_fn rows;
    axpy_fn axpy;
    dotc_fn dotc;
    scale_fn scale;
};

const Table kScalar{Backend::Scalar, scalar::csr_rows, scalar::axpy, scalar::dotc, scalar::scale};
const Table kAvx2{Backend::Avx2, avx2::csr_rows, avx2::axpy, avx2::dotc, avx2::scale};
const Table kNeon{Backend::Neon, neon::csr_rows, neon::axpy, neon::dotc, neon::scale};

bool cpu_has_avx2() {
#if defined(RYDSIM_BUILD_AVX2) && (defined(__x86_64__) || defined(__i386__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

bool cpu_has_neon() {
#if defined(RYDSIM_BUILD_NEON)
    return true;
#else
    return false;
#endif
}

const Table* detect() {
    if (const char* env = std::getenv("RYDSIM_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return &kScalar;
    }
    if (cpu_has_avx2()) return &kAvx2;
    if (cpu_has_neon()) return &kNeon;
    return &kScalar;
}

std::atomic<const Table*> g_table{nullptr};

const Table& table() {
    const Table* t = g_table.load(std::memory_order_acquire);
    if (!t) {
        t = detect();
        g_table.store(t, std::memory_order_release);
    }
    return *t;
}

int default_threads() {
    if (const char* env = std::getenv("RYDSIM_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

std::atomic<int> g_threads{0};

constexpr std::size_t kParallelRows = 1 << 16;

}  // namespace

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
        case Backend::Neon: return "neon";
    }
    return "?";
}

bool backend_available(Backend b) {
    switch (b) {
        case Backend::Scalar: return true;
        case Backend::Avx2: return cpu_has_avx2();
        case Backend::Neon: return cpu_has_neon();
    }
    return false;
}

Backend active_backend() { return table().backend; }

void force_backend(Backend b) {
    const Table* t = &kScalar;
    if (b == Backend::Avx2 && cpu_has_avx2()) t = &kAvx2;
    if (b == Backend::Neon && cpu_has_neon()) t = &kNeon;
    g_table.store(t, std::memory_order_release);
}

void reset_backend() { g_table.store(detect(), std::memory_order_release); }

void set_threads(int n) { g_threads.store(std::max(1, n)); }

int threads() {
    int t = g_threads.load();
    if (t <= 0) {
        t = default_threads();
        g_threads.store(t);
    }
    return t;
}

void csr_matvec(const CsrView& a, const cplx* x, cplx* y) {
    const Table& t = table();
    const int nt = threads();
    if (nt <= 1 || a.rows < kParallelRows) {
        t.rows(a, 0, a.rows, x, y);
        return;
    }
    // Split on nnz so chunks carry similar work; each row is still summed serially.
    const std::int64_t nnz = a.rowptr[a.rows];
    std::vector<std::size_t> cut(nt + 1, a.rows);
    cut[0] = 0;
    for (int k = 1; k < nt; ++k) {
        const std::int64_t target = nnz * k / nt;
        cut[k] = static_cast<std::size_t>(
            std::lower_bound(a.rowptr, a.rowptr + a.rows + 1, target) - a.rowptr);
        cut[k] = std::clamp(cut[k], cut[k - 1], a.rows);
    }
    std::vector<std::thread> pool;
    pool.reserve(nt - 1);
    for (int k = 1; k < nt; ++k)
        pool.emplace_back([&, k] { t.rows(a, cut[k], cut[k + 1], x, y); });
    t.rows(a, cut[0], cut[1], x, y);
    for (auto& th : pool) th.join();
}

void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) { table().axpy(n, alpha, x, y); }
cplx dotc(std::size_t n, const cplx* x, const cplx* y) { return table().dotc(n, x, y); }
double norm2(std::size_t n, const cplx* x) { return std::sqrt(table().dotc(n, x, x).real()); }
void scale(std::size_t n, cplx alpha, cplx* x) { table().scale(n, alpha, x); }

}  // namespace ryd::kern
