#include "oilab/kernels.hpp"

#ifdef OILAB_X86_64

#include <immintrin.h>

// Complex doubles are processed two at a time, interleaved [re0 im0 re1 im1].
// Multiplication by a complex scalar s uses the fmaddsub idiom:
//   even lanes: v.re*s.re - v.im*s.im, odd lanes: v.im*s.re + v.re*s.im.

namespace oilab::kernels::avx2 {

namespace {

inline __m256d conj_mask() {
    return _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
}

// v * s for two interleaved complex values
inline __m256d mul_scalar(__m256d v, __m256d s_re, __m256d s_im) {
    __m256d vswap = _mm256_permute_pd(v, 0x5);
    return _mm256_fmaddsub_pd(v, s_re, _mm256_mul_pd(vswap, s_im));
}

// elementwise complex product a*b of two interleaved pairs
inline __m256d mul_pairs(__m256d a, __m256d b) {
    __m256d b_re = _mm256_movedup_pd(b);
    __m256d b_im = _mm256_permute_pd(b, 0xF);
    __m256d aswap = _mm256_permute_pd(a, 0x5);
    return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(aswap, b_im));
}

inline cplx horizontal_sum(__m256d acc) {
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    return cplx{lanes[0] + lanes[2], lanes[1] + lanes[3]};
}

} // namespace

void cmatvec(const cplx* a, const cplx* x, cplx* y, std::size_t n) {
    const double* xd = reinterpret_cast<const double*>(x);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = reinterpret_cast<const double*>(a + i * n);
        __m256d acc = _mm256_setzero_pd();
        std::size_t j = 0;
        for (; j + 2 <= n; j += 2) {
            __m256d va = _mm256_loadu_pd(row + 2 * j);
            __m256d vx = _mm256_loadu_pd(xd + 2 * j);
            acc = _mm256_add_pd(acc, mul_pairs(va, vx));
        }
        cplx sum = horizontal_sum(acc);
        for (; j < n; ++j) sum += a[i * n + j] * x[j];
        y[i] = sum;
    }
}

void cmatmul(const cplx* a, const cplx* b, cplx* c, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double* crow = reinterpret_cast<double*>(c + i * n);
        for (std::size_t j = 0; j < n; ++j) c[i * n + j] = cplx{0.0, 0.0};
        for (std::size_t k = 0; k < n; ++k) {
            const cplx aik = a[i * n + k];
            if (aik.real() == 0.0 && aik.imag() == 0.0) continue;
            const __m256d s_re = _mm256_set1_pd(aik.real());
            const __m256d s_im = _mm256_set1_pd(aik.imag());
            const double* brow = reinterpret_cast<const double*>(b + k * n);
            std::size_t j = 0;
            for (; j + 4 <= n; j += 4) {
                __m256d b0 = _mm256_loadu_pd(brow + 2 * j);
                __m256d b1 = _mm256_loadu_pd(brow + 2 * j + 4);
                __m256d c0 = _mm256_loadu_pd(crow + 2 * j);
                __m256d c1 = _mm256_loadu_pd(crow + 2 * j + 4);
                c0 = _mm256_add_pd(c0, mul_scalar(b0, s_re, s_im));
                c1 = _mm256_add_pd(c1, mul_scalar(b1, s_re, s_im));
                _mm256_storeu_pd(crow + 2 * j, c0);
                _mm256_storeu_pd(crow + 2 * j + 4, c1);
            }
            for (; j + 2 <= n; j += 2) {
                __m256d b0 = _mm256_loadu_pd(brow + 2 * j);
                __m256d c0 = _mm256_loadu_pd(crow + 2 * j);
                c0 = _mm256_add_pd(c0, mul_scalar(b0, s_re, s_im));
                _mm256_storeu_pd(crow + 2 * j, c0);
            }
            for (; j < n; ++j) c[i * n + j] += aik * b[k * n + j];
        }
    }
}

void rank1_update(cplx* a, const cplx* x, double w, std::size_t n) {
    const double* xd = reinterpret_cast<const double*>(x);
    const __m256d mask = conj_mask();
    for (std::size_t i = 0; i < n; ++i) {
        const cplx wxi = w * x[i];
        const __m256d s_re = _mm256_set1_pd(wxi.real());
        const __m256d s_im = _mm256_set1_pd(wxi.imag());
        double* row = reinterpret_cast<double*>(a + i * n);
        std::size_t j = 0;
        for (; j + 2 <= n; j += 2) {
            __m256d u = _mm256_xor_pd(_mm256_loadu_pd(xd + 2 * j), mask);
            __m256d r = _mm256_loadu_pd(row + 2 * j);
            r = _mm256_add_pd(r, mul_scalar(u, s_re, s_im));
            _mm256_storeu_pd(row + 2 * j, r);
        }
        for (; j < n; ++j) a[i * n + j] += wxi * std::conj(x[j]);
    }
}

void axpy(cplx* y, const cplx* x, double w, std::size_t len) {
    double* yd = reinterpret_cast<double*>(y);
    const double* xd = reinterpret_cast<const double*>(x);
    const __m256d vw = _mm256_set1_pd(w);
    const std::size_t nd = 2 * len;
    std::size_t i = 0;
    for (; i + 4 <= nd; i += 4) {
        __m256d vy = _mm256_loadu_pd(yd + i);
        __m256d vx = _mm256_loadu_pd(xd + i);
        _mm256_storeu_pd(yd + i, _mm256_fmadd_pd(vx, vw, vy));
    }
    for (; i < nd; ++i) yd[i] += w * xd[i];
}

cplx dot_conj(const cplx* x, const cplx* y, std::size_t len) {
    const double* xd = reinterpret_cast<const double*>(x);
    const double* yd = reinterpret_cast<const double*>(y);
    const __m256d mask = conj_mask();
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        __m256d vx = _mm256_xor_pd(_mm256_loadu_pd(xd + 2 * i), mask);
        __m256d vy = _mm256_loadu_pd(yd + 2 * i);
        acc = _mm256_add_pd(acc, mul_pairs(vx, vy));
    }
    cplx sum = horizontal_sum(acc);
    for (; i < len; ++i) sum += std::conj(x[i]) * y[i];
    return sum;
}

} // namespace oilab::kernels::avx2

#endif // OILAB_X86_64
