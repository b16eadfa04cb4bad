#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace monoqt {

using cplx = std::complex<double>;

// Dense row-major complex matrix. Everything in this library is tiny (at most
// 64x64), so storage is a flat vector and algorithms are straightforward
// O(n^3) loops.
struct ComplexMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<cplx> a; // row-major, a[r*cols + c]

    ComplexMatrix() = default;
    ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, cplx(0.0, 0.0)) {}

    cplx& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    const cplx& at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

    static ComplexMatrix identity(std::size_t n);
    bool finite() const;
};

ComplexMatrix matmul(const ComplexMatrix& x, const ComplexMatrix& y);
ComplexMatrix dagger(const ComplexMatrix& x);
ComplexMatrix conjugate(const ComplexMatrix& x);
ComplexMatrix add(const ComplexMatrix& x, const ComplexMatrix& y);
ComplexMatrix scale(const ComplexMatrix& x, cplx s);
cplx trace(const ComplexMatrix& x);
double max_abs(const ComplexMatrix& x);
double max_abs_diff(const ComplexMatrix& x, const ComplexMatrix& y);
double hermiticity_defect(const ComplexMatrix& x); // max |x - x^dag|

// Kronecker product; refuses results beyond 4096 rows or columns.
ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y);

struct EigenSystem {
    std::vector<double> eigenvalues; // sorted descending
    ComplexMatrix eigenvectors;      // orthonormal columns, matching order
};

// Hermitian eigendecomposition by cyclic Jacobi rotations. Input must satisfy
// max|h - h^dag| <= 1e-9; it is symmetrized before iterating. Deterministic:
// fixed sweep order, ties in the final sort broken by original position.
EigenSystem herm_eig(const ComplexMatrix& h);

// Hermitian PSD square root via eigendecomposition. Eigenvalues in
// [-1e-10, 0) are treated as roundoff and clamped to zero; anything more
// negative is rejected.
ComplexMatrix psd_sqrt(const ComplexMatrix& h);

// Square roots of the decreasing eigenvalues of sqrt(rho) * rho~ * sqrt(rho)
// for a two-qubit density matrix rho, where rho~ = (sy x sy) rho* (sy x sy).
// This Hermitian sandwich has the same spectrum as the non-Hermitian product
// rho * rho~ but is numerically stable to diagonalize.
std::array<double, 4> wootters_lambdas(const ComplexMatrix& rho);

} // namespace monoqt
