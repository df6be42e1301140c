#include <doctest.h>

#include "oilab/kernels.hpp"

#include <cmath>
#include <random>
#include <vector>

using oilab::kernels::cplx;
namespace kr = oilab::kernels;

namespace {

std::vector<cplx> random_vec(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<cplx> v(n);
    for (auto& z : v) z = cplx{dist(rng), dist(rng)};
    return v;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("scalar cmatvec against hand-computed 2x2") {
    // [[1, i], [2, -1]] * (1, 1-i)
    std::vector<cplx> a{{1, 0}, {0, 1}, {2, 0}, {-1, 0}};
    std::vector<cplx> x{{1, 0}, {1, -1}};
    std::vector<cplx> y(2);
    kr::scalar::cmatvec(a.data(), x.data(), y.data(), 2);
    CHECK(std::abs(y[0] - cplx{2, 1}) < 1e-15);
    CHECK(std::abs(y[1] - cplx{1, 1}) < 1e-15);
}

TEST_CASE("scalar rank1 accumulates |x><x| with weight") {
    std::vector<cplx> x{{0, 1}, {1, 0}};
    std::vector<cplx> a(4, cplx{0, 0});
    kr::scalar::rank1_update(a.data(), x.data(), 0.5, 2);
    CHECK(std::abs(a[0] - cplx{0.5, 0}) < 1e-15);
    CHECK(std::abs(a[1] - cplx{0, 0.5}) < 1e-15);
    CHECK(std::abs(a[2] - cplx{0, -0.5}) < 1e-15);
    CHECK(std::abs(a[3] - cplx{0.5, 0}) < 1e-15);
}

TEST_CASE("scalar dot_conj conjugates the left argument") {
    std::vector<cplx> x{{0, 1}};
    std::vector<cplx> y{{0, 1}};
    CHECK(std::abs(kr::scalar::dot_conj(x.data(), y.data(), 1) - cplx{1, 0}) < 1e-15);
}

#ifdef OILAB_X86_64
TEST_CASE("avx2 kernels match scalar reference") {
    if (!kr::cpu_supports_avx2()) return;

    std::mt19937_64 rng(0xC0FFEE);
    // Odd sizes exercise the remainder loops.
    for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 16u, 17u, 33u, 64u}) {
        auto a = random_vec(rng, n * n);
        auto b = random_vec(rng, n * n);
        auto x = random_vec(rng, n);

        std::vector<cplx> y_s(n), y_v(n);
        kr::scalar::cmatvec(a.data(), x.data(), y_s.data(), n);
        kr::avx2::cmatvec(a.data(), x.data(), y_v.data(), n);
        CHECK(max_diff(y_s, y_v) < 1e-12 * static_cast<double>(n));

        std::vector<cplx> c_s(n * n), c_v(n * n);
        kr::scalar::cmatmul(a.data(), b.data(), c_s.data(), n);
        kr::avx2::cmatmul(a.data(), b.data(), c_v.data(), n);
        CHECK(max_diff(c_s, c_v) < 1e-12 * static_cast<double>(n));

        auto r_s = random_vec(rng, n * n);
        auto r_v = r_s;
        kr::scalar::rank1_update(r_s.data(), x.data(), 0.37, n);
        kr::avx2::rank1_update(r_v.data(), x.data(), 0.37, n);
        CHECK(max_diff(r_s, r_v) < 1e-13);

        auto w_s = random_vec(rng, n * n);
        auto w_v = w_s;
        kr::scalar::axpy(w_s.data(), a.data(), -0.21, n * n);
        kr::avx2::axpy(w_v.data(), a.data(), -0.21, n * n);
        CHECK(max_diff(w_s, w_v) < 1e-14);

        cplx d_s = kr::scalar::dot_conj(a.data(), b.data(), n * n);
        cplx d_v = kr::avx2::dot_conj(a.data(), b.data(), n * n);
        CHECK(std::abs(d_s - d_v) < 1e-12 * static_cast<double>(n));
    }
}
#endif

TEST_CASE("dispatch honors forced backend") {
    const kr::Backend initial = kr::active_backend();
    kr::force_backend(kr::Backend::Scalar);
    CHECK(kr::active_backend() == kr::Backend::Scalar);
    kr::force_backend(kr::Backend::Avx2);
    if (kr::cpu_supports_avx2()) {
        CHECK(kr::active_backend() == kr::Backend::Avx2);
    } else {
        CHECK(kr::active_backend() == kr::Backend::Scalar);
    }
    kr::force_backend(initial);
}
