#include "oilab/densemat.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>

#ifdef OILAB_HAVE_LAPACKE
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>
#endif

namespace oilab {

namespace {

std::size_t initial_cap() {
    if (const char* env = std::getenv("ORACLE_INFOLAB_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v >= 2) return static_cast<std::size_t>(v);
    }
    return std::size_t{1} << 12;
}

std::atomic<std::size_t> g_dimension_cap{initial_cap()};

void check_cap(std::size_t dim, const char* what) {
    if (dim > dimension_cap())
        throw dimension_cap_error(std::string(what) + ": dimension " + std::to_string(dim) +
                                  " exceeds cap " + std::to_string(dimension_cap()));
}

} // namespace

std::size_t dimension_cap() { return g_dimension_cap.load(std::memory_order_relaxed); }
void set_dimension_cap(std::size_t cap) { g_dimension_cap.store(cap, std::memory_order_relaxed); }

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, cplx{0.0, 0.0}) {}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = cplx{1.0, 0.0};
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<double>& d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = cplx{d[i], 0.0};
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const CVec& d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

ComplexMatrix ComplexMatrix::column(const CVec& v) {
    ComplexMatrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

cplx ComplexMatrix::trace() const {
    cplx t{0.0, 0.0};
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

std::vector<double> ComplexMatrix::real_diagonal() const {
    std::vector<double> d(std::min(rows_, cols_));
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (*this)(i, i).real();
    return d;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const cplx& z : entries_) m = std::max(m, std::abs(z));
    return m;
}

double ComplexMatrix::hermitian_error() const {
    double m = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i; j < cols_; ++j)
            m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return m;
}

double ComplexMatrix::unitary_error() const {
    ComplexMatrix g = adjoint() * (*this);
    for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= cplx{1.0, 0.0};
    return g.max_abs();
}

bool ComplexMatrix::all_finite() const {
    for (const cplx& z : entries_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

void ComplexMatrix::assert_finite(const char* context) const {
    if (!all_finite())
        throw std::runtime_error(std::string(context) + ": non-finite matrix entries");
}

void ComplexMatrix::hermitize() {
    for (std::size_t i = 0; i < rows_; ++i) {
        (*this)(i, i) = cplx{(*this)(i, i).real(), 0.0};
        for (std::size_t j = i + 1; j < cols_; ++j) {
            cplx avg = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
            (*this)(i, j) = avg;
            (*this)(j, i) = std::conj(avg);
        }
    }
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("matrix addition: shape mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (cplx& z : entries_) z *= s;
    return *this;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
        throw std::invalid_argument("matrix subtraction: shape mismatch");
    ComplexMatrix r = a;
    for (std::size_t i = 0; i < r.entries_.size(); ++i) r.entries_[i] -= b.entries_[i];
    return r;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: shape mismatch");
    ComplexMatrix c(a.rows_, b.cols_);
    if (a.rows_ == a.cols_ && b.rows_ == b.cols_) {
        kernels::cmatmul(a.data(), b.data(), c.data(), a.rows_);
        return c;
    }
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a - b).max_abs();
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_cap(a.rows() * b.rows(), "tensor");
    check_cap(a.cols() * b.cols(), "tensor");
    ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ia = 0; ia < a.rows(); ++ia)
        for (std::size_t ja = 0; ja < a.cols(); ++ja) {
            const cplx av = a(ia, ja);
            if (av == cplx{0.0, 0.0}) continue;
            for (std::size_t ib = 0; ib < b.rows(); ++ib)
                for (std::size_t jb = 0; jb < b.cols(); ++jb)
                    r(ia * b.rows() + ib, ja * b.cols() + jb) = av * b(ib, jb);
        }
    return r;
}

CVec tensor(const CVec& a, const CVec& b) {
    check_cap(a.size() * b.size(), "tensor");
    CVec r(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i * b.size() + j] = a[i] * b[j];
    return r;
}

ComplexMatrix tensor_power(const ComplexMatrix& a, std::size_t t) {
    if (t == 0) return ComplexMatrix::identity(1);
    ComplexMatrix r = a;
    for (std::size_t i = 1; i < t; ++i) r = tensor(r, a);
    return r;
}

CVec matvec(const ComplexMatrix& a, const CVec& x) {
    if (a.cols() != x.size()) throw std::invalid_argument("matvec: shape mismatch");
    CVec y(a.rows());
    if (a.is_square()) {
        kernels::cmatvec(a.data(), x.data(), y.data(), a.rows());
        return y;
    }
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cplx acc{0.0, 0.0};
        for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

ComplexMatrix outer(const CVec& psi) {
    check_cap(psi.size(), "outer");
    ComplexMatrix m(psi.size(), psi.size());
    kernels::rank1_update(m.data(), psi.data(), 1.0, psi.size());
    return m;
}

ComplexMatrix conjugate_by(const ComplexMatrix& u, const ComplexMatrix& a) {
    return u * a * u.adjoint();
}

double vec_norm(const CVec& v) {
    double s = 0.0;
    for (const cplx& z : v) s += std::norm(z);
    return std::sqrt(s);
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep) {
    if (!rho.is_square()) throw std::invalid_argument("partial_trace: matrix not square");
    std::size_t total = 1;
    for (std::size_t d : dims) total *= d;
    if (total != rho.rows())
        throw std::invalid_argument("partial_trace: subsystem dims do not factor the matrix");
    if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
    for (std::size_t k : keep)
        if (k >= dims.size()) throw std::invalid_argument("partial_trace: keep index out of range");

    std::vector<bool> kept(dims.size(), false);
    for (std::size_t k : keep) kept[k] = true;

    std::size_t dim_keep = 1, dim_traced = 1;
    for (std::size_t s = 0; s < dims.size(); ++s) (kept[s] ? dim_keep : dim_traced) *= dims[s];

    // Strides of each subsystem in the full index (leftmost most significant).
    std::vector<std::size_t> stride(dims.size(), 1);
    for (std::size_t s = dims.size(); s-- > 1;) stride[s - 1] = stride[s] * dims[s];

    std::vector<std::size_t> keep_subsys, trace_subsys;
    for (std::size_t s = 0; s < dims.size(); ++s) (kept[s] ? keep_subsys : trace_subsys).push_back(s);

    // Map a compact kept/traced index onto its contribution to the full index.
    auto expand = [&](const std::vector<std::size_t>& subsys, std::size_t compact) {
        std::size_t full = 0;
        for (std::size_t s = subsys.size(); s-- > 0;) {
            std::size_t d = dims[subsys[s]];
            full += (compact % d) * stride[subsys[s]];
            compact /= d;
        }
        return full;
    };

    std::vector<std::size_t> keep_offsets(dim_keep), trace_offsets(dim_traced);
    for (std::size_t i = 0; i < dim_keep; ++i) keep_offsets[i] = expand(keep_subsys, i);
    for (std::size_t i = 0; i < dim_traced; ++i) trace_offsets[i] = expand(trace_subsys, i);

    ComplexMatrix out(dim_keep, dim_keep);
    for (std::size_t r = 0; r < dim_keep; ++r)
        for (std::size_t c = 0; c < dim_keep; ++c) {
            cplx acc{0.0, 0.0};
            for (std::size_t t = 0; t < dim_traced; ++t)
                acc += rho(keep_offsets[r] + trace_offsets[t], keep_offsets[c] + trace_offsets[t]);
            out(r, c) = acc;
        }
    return out;
}

namespace detail {

// Deterministic ordering and phase convention: each eigenvector gets its
// first nonzero component made real positive, and groups of numerically
// equal eigenvalues are sorted lexicographically by components.
void canonicalize_eigenvectors(HermitianEigenDecomposition& eig) {
    const std::size_t n = eig.eigenvectors.rows();
    for (std::size_t col = 0; col < eig.eigenvectors.cols(); ++col) {
        for (std::size_t i = 0; i < n; ++i) {
            const cplx v = eig.eigenvectors(i, col);
            if (std::abs(v) > 1e-12) {
                const cplx phase = std::conj(v) / std::abs(v);
                for (std::size_t r = 0; r < n; ++r) eig.eigenvectors(r, col) *= phase;
                break;
            }
        }
    }

    auto col_less = [&](std::size_t a, std::size_t b) {
        for (std::size_t i = 0; i < n; ++i) {
            const cplx& x = eig.eigenvectors(i, a);
            const cplx& y = eig.eigenvectors(i, b);
            if (x.real() != y.real()) return x.real() < y.real();
            if (x.imag() != y.imag()) return x.imag() < y.imag();
        }
        return false;
    };

    const double scale = std::max(1.0, std::abs(eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.back()));
    std::size_t start = 0;
    while (start < eig.eigenvalues.size()) {
        std::size_t end = start + 1;
        while (end < eig.eigenvalues.size() &&
               eig.eigenvalues[end] - eig.eigenvalues[start] <= 1e-12 * scale)
            ++end;
        if (end - start > 1) {
            std::vector<std::size_t> order(end - start);
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = start + i;
            std::sort(order.begin(), order.end(), col_less);
            ComplexMatrix cols(n, end - start);
            for (std::size_t c = 0; c < order.size(); ++c)
                for (std::size_t r = 0; r < n; ++r) cols(r, c) = eig.eigenvectors(r, order[c]);
            for (std::size_t c = 0; c < order.size(); ++c)
                for (std::size_t r = 0; r < n; ++r) eig.eigenvectors(r, start + c) = cols(r, c);
        }
        start = end;
    }
}

} // namespace detail

HermitianEigenDecomposition hermitian_eig(const ComplexMatrix& a) {
    if (!a.is_square()) throw std::invalid_argument("hermitian_eig: matrix not square");
    const double herr = a.hermitian_error();
    if (herr > kHermTol)
        throw std::invalid_argument("hermitian_eig: input not Hermitian (error " +
                                    std::to_string(herr) + ")");
#ifdef OILAB_HAVE_LAPACKE
    const std::size_t n = a.rows();
    HermitianEigenDecomposition eig;
    eig.eigenvalues.resize(n);
    eig.eigenvectors = a;
    eig.eigenvectors.hermitize();
    lapack_int info = LAPACKE_zheevd(LAPACK_ROW_MAJOR, 'V', 'U', static_cast<lapack_int>(n),
                                     eig.eigenvectors.data(), static_cast<lapack_int>(n),
                                     eig.eigenvalues.data());
    if (info != 0)
        throw std::runtime_error("hermitian_eig: zheevd failed with info " + std::to_string(info));
    detail::canonicalize_eigenvectors(eig);
    return eig;
#else
    return hermitian_eig_jacobi(a);
#endif
}

double shannon_entropy(const std::vector<double>& p) {
    double s = 0.0;
    for (double v : p) {
        if (v < -1e-12) throw std::invalid_argument("shannon_entropy: negative probability");
        if (v > kEigClamp) s -= v * std::log2(v);
    }
    return std::max(s, 0.0);
}

double von_neumann_entropy(const ComplexMatrix& rho) {
    const cplx tr = rho.trace();
    if (std::abs(tr - cplx{1.0, 0.0}) > kTraceTol)
        throw std::invalid_argument("von_neumann_entropy: trace differs from 1");
    HermitianEigenDecomposition eig = hermitian_eig(rho);
    double s = 0.0;
    for (double lambda : eig.eigenvalues) {
        if (lambda < -1e-8)
            throw std::invalid_argument("von_neumann_entropy: negative eigenvalue " +
                                        std::to_string(lambda));
        if (lambda > kEigClamp) s -= lambda * std::log2(lambda);
    }
    return std::max(s, 0.0);
}

ComplexMatrix hadamard() {
    const double h = 1.0 / std::sqrt(2.0);
    ComplexMatrix m(2, 2);
    m(0, 0) = h;
    m(0, 1) = h;
    m(1, 0) = h;
    m(1, 1) = -h;
    return m;
}

ComplexMatrix hadamard_n(std::size_t k) { return tensor_power(hadamard(), k); }

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

} // namespace oilab
