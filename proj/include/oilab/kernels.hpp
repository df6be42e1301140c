#pragma once

// Dense complex kernels underneath the density-matrix machinery.
// Scalar reference implementations are the semantic ground truth; an AVX2
// variant is selected at runtime when the CPU supports it. The two are
// equivalence-tested against each other in tests/test_kernels.cpp.

#include <complex>
#include <cstddef>

namespace oilab::kernels {

using cplx = std::complex<double>;

enum class Backend { Scalar, Avx2 };

bool cpu_supports_avx2();
Backend active_backend();
// Force a backend (tests, benchmarking). Requesting Avx2 on a CPU without
// it silently keeps Scalar.
void force_backend(Backend b);
const char* backend_name(Backend b);

// y = A x, A is n x n row-major, y must not alias x.
void cmatvec(const cplx* a, const cplx* x, cplx* y, std::size_t n);

// C = A B, all n x n row-major. C must not alias A or B.
void cmatmul(const cplx* a, const cplx* b, cplx* c, std::size_t n);

// A += w * x x^dagger (Hermitian rank-1 accumulation, real weight).
void rank1_update(cplx* a, const cplx* x, double w, std::size_t n);

// y += w * x elementwise, real weight.
void axpy(cplx* y, const cplx* x, double w, std::size_t len);

// sum_i conj(x_i) * y_i
cplx dot_conj(const cplx* x, const cplx* y, std::size_t len);

namespace scalar {
void cmatvec(const cplx* a, const cplx* x, cplx* y, std::size_t n);
void cmatmul(const cplx* a, const cplx* b, cplx* c, std::size_t n);
void rank1_update(cplx* a, const cplx* x, double w, std::size_t n);
void axpy(cplx* y, const cplx* x, double w, std::size_t len);
cplx dot_conj(const cplx* x, const cplx* y, std::size_t len);
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define OILAB_X86_64 1
namespace avx2 {
void cmatvec(const cplx* a, const cplx* x, cplx* y, std::size_t n);
void cmatmul(const cplx* a, const cplx* b, cplx* c, std::size_t n);
void rank1_update(cplx* a, const cplx* x, double w, std::size_t n);
void axpy(cplx* y, const cplx* x, double w, std::size_t len);
cplx dot_conj(const cplx* x, const cplx* y, std::size_t len);
} // namespace avx2
#endif

} // namespace oilab::kernels
