#include "oilab/densemat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

// Cyclic Jacobi diagonalization for complex Hermitian matrices. Each sweep
// zeroes every off-diagonal pair with the exact 2x2 unitary; convergence is
// quadratic once the matrix is nearly diagonal.

namespace oilab {

namespace {

struct Rotation {
    cplx u00, u01, u10, u11;  // unitary G with G^dagger B G diagonal
};

// Stable Jacobi rotation for the Hermitian block [[app, apq], [conj(apq), aqq]]:
// factor out the phase of apq, then use the standard small-root tangent.
Rotation block_rotation(double app, double aqq, cplx apq) {
    const double r = std::abs(apq);
    const cplx phase = apq / r;  // caller guarantees r > 0
    const double theta = (aqq - app) / (2.0 * r);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = c * t;
    Rotation g;
    g.u00 = cplx{c, 0.0};
    g.u01 = cplx{s, 0.0};
    g.u10 = -s * std::conj(phase);
    g.u11 = c * std::conj(phase);
    return g;
}

} // namespace

HermitianEigenDecomposition hermitian_eig_jacobi(const ComplexMatrix& input) {
    if (!input.is_square()) throw std::invalid_argument("hermitian_eig_jacobi: matrix not square");
    if (input.hermitian_error() > kHermTol)
        throw std::invalid_argument("hermitian_eig_jacobi: input not Hermitian");

    const std::size_t n = input.rows();
    ComplexMatrix a = input;
    a.hermitize();
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double scale = std::max(a.max_abs(), 1e-300);
    const double tol = 1e-14 * scale;
    const int max_sweeps = 100;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
        if (off <= tol) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) <= 1e-2 * tol || std::abs(a(p, q)) == 0.0) continue;
                const Rotation r = block_rotation(a(p, p).real(), a(q, q).real(), a(p, q));
                // A <- U^dagger A U on rows/cols p,q
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx aip = a(i, p), aiq = a(i, q);
                    a(i, p) = aip * r.u00 + aiq * r.u10;
                    a(i, q) = aip * r.u01 + aiq * r.u11;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx api = a(p, i), aqi = a(q, i);
                    a(p, i) = std::conj(r.u00) * api + std::conj(r.u10) * aqi;
                    a(q, i) = std::conj(r.u01) * api + std::conj(r.u11) * aqi;
                }
                a(p, q) = cplx{0.0, 0.0};
                a(q, p) = cplx{0.0, 0.0};
                a(p, p) = cplx{a(p, p).real(), 0.0};
                a(q, q) = cplx{a(q, q).real(), 0.0};
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx vip = v(i, p), viq = v(i, q);
                    v(i, p) = vip * r.u00 + viq * r.u10;
                    v(i, q) = vip * r.u01 + viq * r.u11;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    HermitianEigenDecomposition eig;
    eig.eigenvalues.resize(n);
    eig.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        eig.eigenvalues[c] = a(order[c], order[c]).real();
        for (std::size_t rix = 0; rix < n; ++rix) eig.eigenvectors(rix, c) = v(rix, order[c]);
    }
    detail::canonicalize_eigenvectors(eig);
    return eig;
}

} // namespace oilab
