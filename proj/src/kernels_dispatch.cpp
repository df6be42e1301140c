#include "oilab/kernels.hpp"

#include <atomic>

namespace oilab::kernels {

bool cpu_supports_avx2() {
#ifdef OILAB_X86_64
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

Backend detect() {
    return cpu_supports_avx2() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend> g_backend{detect()};

} // namespace

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

void force_backend(Backend b) {
    if (b == Backend::Avx2 && !cpu_supports_avx2()) b = Backend::Scalar;
    g_backend.store(b, std::memory_order_relaxed);
}

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::Avx2: return "avx2";
        case Backend::Scalar: return "scalar";
    }
    return "scalar";
}

#ifdef OILAB_X86_64
#define OILAB_DISPATCH(fn, ...)                          \
    if (active_backend() == Backend::Avx2)               \
        return avx2::fn(__VA_ARGS__);                    \
    return scalar::fn(__VA_ARGS__)
#else
#define OILAB_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

void cmatvec(const cplx* a, const cplx* x, cplx* y, std::size_t n) {
    OILAB_DISPATCH(cmatvec, a, x, y, n);
}

void cmatmul(const cplx* a, const cplx* b, cplx* c, std::size_t n) {
    OILAB_DISPATCH(cmatmul, a, b, c, n);
}

void rank1_update(cplx* a, const cplx* x, double w, std::size_t n) {
    OILAB_DISPATCH(rank1_update, a, x, w, n);
}

void axpy(cplx* y, const cplx* x, double w, std::size_t len) {
    OILAB_DISPATCH(axpy, y, x, w, len);
}

cplx dot_conj(const cplx* x, const cplx* y, std::size_t len) {
    OILAB_DISPATCH(dot_conj, x, y, len);
}

} // namespace oilab::kernels
