#pragma once

// Dense complex linear algebra: the substrate for all states and unitaries.
// Row-major storage; products and accumulations route through the kernels
// layer, Hermitian eigendecomposition through LAPACK (zheevd) with a cyclic
// Jacobi fallback.

#include "oilab/kernels.hpp"

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace oilab {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

// Numerical contract constants, shared across modules.
inline constexpr double kEigClamp = 1e-12;   // eigenvalues below this are treated as 0
inline constexpr double kPsdSlack = 1e-10;   // tolerated PSD violation
inline constexpr double kHermTol = 1e-10;    // max-norm Hermiticity tolerance
inline constexpr double kTraceTol = 1e-9;    // trace-one tolerance
inline constexpr double kUnitaryTol = 1e-10; // max-norm unitarity tolerance

class dimension_cap_error : public std::runtime_error {
public:
    explicit dimension_cap_error(const std::string& what) : std::runtime_error(what) {}
};

// Cross-checks and consistency gates failing beyond tolerance.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Largest allowed dimension for a single dense matrix (default 2^12,
// overridable via set_dimension_cap / the ORACLE_INFOLAB_CAP env var).
std::size_t dimension_cap();
void set_dimension_cap(std::size_t cap);

class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(const std::vector<double>& d);
    static ComplexMatrix diagonal(const CVec& d);
    static ComplexMatrix column(const CVec& v);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    bool empty() const { return entries_.empty(); }

    cplx& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    cplx* data() { return entries_.data(); }
    const cplx* data() const { return entries_.data(); }

    ComplexMatrix adjoint() const;
    cplx trace() const;
    std::vector<double> real_diagonal() const;
    double max_abs() const;
    double hermitian_error() const;  // ||A - A^dagger||_max
    double unitary_error() const;    // ||A^dagger A - I||_max
    bool all_finite() const;
    void assert_finite(const char* context) const;
    void hermitize();  // A <- (A + A^dagger)/2

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(cplx s);
    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    CVec entries_;
};

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// Kronecker products; throws dimension_cap_error when the result would
// exceed the configured cap.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
CVec tensor(const CVec& a, const CVec& b);
ComplexMatrix tensor_power(const ComplexMatrix& a, std::size_t t);

CVec matvec(const ComplexMatrix& a, const CVec& x);
ComplexMatrix outer(const CVec& psi);                      // |psi><psi|
ComplexMatrix conjugate_by(const ComplexMatrix& u, const ComplexMatrix& a);  // U A U^dagger
double vec_norm(const CVec& v);

// Partial trace over general subsystem dimensions. `dims` lists subsystem
// dimensions left-to-right (leftmost is the most significant index digit),
// `keep` lists the subsystem indices to retain, ascending.
ComplexMatrix partial_trace(const ComplexMatrix& rho, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep);

struct HermitianEigenDecomposition {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // orthonormal columns, phase-fixed
};

// Eigendecomposition of a Hermitian matrix. The input must satisfy
// ||A - A^dagger||_max <= kHermTol. Eigenvalues come out ascending; each
// eigenvector is normalized so its first nonzero component is real
// positive, and numerically equal eigenvalues are ordered lexicographically
// by eigenvector components so results are reproducible.
HermitianEigenDecomposition hermitian_eig(const ComplexMatrix& a);

// Cyclic Jacobi path; slower, used as fallback and as an independent
// reference in tests.
HermitianEigenDecomposition hermitian_eig_jacobi(const ComplexMatrix& a);

// S(rho) = -sum lambda log2 lambda over eigenvalues above kEigClamp.
// Requires trace 1 within kTraceTol and eigenvalues >= -1e-8.
double von_neumann_entropy(const ComplexMatrix& rho);

// Shannon entropy in bits with the 0 log 0 = 0 convention. Entries below
// -1e-12 throw; tiny negatives are clamped to 0.
double shannon_entropy(const std::vector<double>& p);

// Common gates.
ComplexMatrix hadamard();
ComplexMatrix hadamard_n(std::size_t k);
ComplexMatrix pauli_x();
ComplexMatrix pauli_z();

namespace detail {
void canonicalize_eigenvectors(HermitianEigenDecomposition& eig);
}

} // namespace oilab
