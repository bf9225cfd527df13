#pragma once
// SPDX-License-Identifier: Apache-2.0

#include <complex>
#include <cstddef>
#include <cstdint>

namespace ryd::kern {

using cplx = std::complex<double>;

// Read-only view of a compressed-row complex matrix.
struct CsrView {
    std::size_t rows = 0;
    const std::int64_t* rowptr = nullptr;
    const std::int32_t* col = nullptr;
    const cplx* val = nullptr;
};

enum class Backend { Scalar, Avx2, Neon };

const char* backend_name(Backend b);
Backend active_backend();
// Pins the dispatch; passing a backend the CPU cannot run falls back to Scalar.
void force_backend(Backend b);
// Re-runs CPU detection (and honours RYDSIM_SIMD=scalar).
void reset_backend();
bool backend_available(Backend b);

// Worker threads used by csr_matvec on large matrices.
void set_threads(int n);
int threads();

// y = A x. Summation order is fixed per backend (so thread count never changes results);
// the AVX2 path fuses multiply-adds and can differ from scalar in the last bits.
void csr_matvec(const CsrView& a, const cplx* x, cplx* y);
// y += alpha x
void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y);
// sum_i conj(x_i) y_i
cplx dotc(std::size_t n, const cplx* x, const cplx* y);
double norm2(std::size_t n, const cplx* x);
void scale(std::size_t n, cplx alpha, cplx* x);

// Individual implementations, exposed for the equivalence tests.
namespace scalar {
void csr_rows(const CsrView& a, std::size_t r0, std::size_t r1, const cplx* x, cplx* y);
void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y);
cplx dotc(std::size_t n, const cplx* x, const cplx* y);
void scale(std::size_t n, cplx alpha, cplx* x);
}  // namespace scalar

namespace avx2 {
void csr_rows(const CsrView& a, std::size_t r0, std::size_t r1, const cplx* x, cplx* y);
void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y);
cplx dotc(std::size_t n, const cplx* x, const cplx* y);
void scale(std::size_t n, cplx alpha, cplx* x);
}  // namespace avx2

namespace neon {
void csr_rows(const CsrView& a, std::size_t r0, std::size_t r1, const cplx* x, cplx* y);
void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y);
cplx dotc(std::size_t n, const cplx* x, const cplx* y);
void scale(std::size_t n, cplx alpha, cplx* x);
}  // namespace neon

}  // namespace ryd::kern
