#include "oilab/kernels.hpp"

namespace oilab::kernels::scalar {

void cmatvec(const cplx* a, const cplx* x, cplx* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        cplx acc{0.0, 0.0};
        const cplx* row = a + i * n;
        for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
}

void cmatmul(const cplx* a, const cplx* b, cplx* c, std::size_t n) {
    // i-k-j order keeps the inner loop contiguous in b and c.
    for (std::size_t i = 0; i < n; ++i) {
        cplx* crow = c + i * n;
        for (std::size_t j = 0; j < n; ++j) crow[j] = cplx{0.0, 0.0};
        for (std::size_t k = 0; k < n; ++k) {
            const cplx aik = a[i * n + k];
            if (aik == cplx{0.0, 0.0}) continue;
            const cplx* brow = b + k * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
        }
    }
}

void rank1_update(cplx* a, const cplx* x, double w, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const cplx wxi = w * x[i];
        cplx* row = a + i * n;
        for (std::size_t j = 0; j < n; ++j) row[j] += wxi * std::conj(x[j]);
    }
}

void axpy(cplx* y, const cplx* x, double w, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) y[i] += w * x[i];
}

cplx dot_conj(const cplx* x, const cplx* y, std::size_t len) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < len; ++i) acc += std::conj(x[i]) * y[i];
    return acc;
}

} // namespace oilab::kernels::scalar
