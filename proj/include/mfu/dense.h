/*==============================================================================
 *     File: dense.h
 *
 *  Description: Small dense matrices used by the reference oracles and the
 *               projected Krylov problems. Construction is guarded by a size
 *               cap so that an oracle path never silently allocates an n^2
 *               array for a large sparse problem.
 *
 *============================================================================*/

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "mfu/types.h"

namespace mfu {

/// Largest dimension a DenseMatrix may have. Defaults to 2000, or the value
/// of the MFU_DENSE_CAP environment variable when it is set.
Index denseCap();
void setDenseCap(Index cap);

template <typename T>
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(Index rows, Index cols, T fill = T{});

    static DenseMatrix identity(Index n);
    static DenseMatrix diagonal(std::span<const T> d);

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }

    T& operator()(Index i, Index j) { return data_[i * cols_ + j]; }
    const T& operator()(Index i, Index j) const { return data_[i * cols_ + j]; }

    std::span<T> row(Index i) { return {data_.data() + i * cols_, static_cast<std::size_t>(cols_)}; }
    std::span<const T> row(Index i) const
    {
        return {data_.data() + i * cols_, static_cast<std::size_t>(cols_)};
    }

    const std::vector<T>& data() const { return data_; }
    std::vector<T>& data() { return data_; }

    std::vector<T> column(Index j) const;
    void setColumn(Index j, std::span<const T> v);

    DenseMatrix transpose() const;
    DenseMatrix adjoint() const;

    DenseMatrix& operator+=(const DenseMatrix& B);
    DenseMatrix& operator-=(const DenseMatrix& B);
    DenseMatrix& operator*=(T s);

    double frobeniusNorm() const;
    double oneNorm() const;
    double infNorm() const;
    double maxAbs() const;

private:
    Index rows_ = 0;
    Index cols_ = 0;
    std::vector<T> data_;
};

template <typename T>
DenseMatrix<T> operator+(DenseMatrix<T> A, const DenseMatrix<T>& B)
{
    return A += B;
}

template <typename T>
DenseMatrix<T> operator-(DenseMatrix<T> A, const DenseMatrix<T>& B)
{
    return A -= B;
}

template <typename T>
DenseMatrix<T> operator*(DenseMatrix<T> A, T s)
{
    return A *= s;
}

template <typename T>
DenseMatrix<T> matmul(const DenseMatrix<T>& A, const DenseMatrix<T>& B);

template <typename T, typename U>
std::vector<promote_t<T, U>> matvec(const DenseMatrix<T>& A, std::span<const U> x);

DenseMatrix<cplx> toComplex(const DenseMatrix<double>& A);
DenseMatrix<double> realPart(const DenseMatrix<cplx>& A);
DenseMatrix<double> imagPart(const DenseMatrix<cplx>& A);

/// LU factorization with partial pivoting, PA = LU.
template <typename T>
class DenseLU {
public:
    explicit DenseLU(DenseMatrix<T> A);

    Index size() const { return lu_.rows(); }

    template <typename U>
    std::vector<promote_t<T, U>> solve(std::span<const U> b) const;

    /// Solves A X = B column by column.
    DenseMatrix<T> solve(const DenseMatrix<T>& B) const;
    DenseMatrix<T> inverse() const;

private:
    DenseMatrix<T> lu_;
    std::vector<Index> perm_;
};

/// Symmetric eigendecomposition A = Q diag(lambda) Q^T by Householder
/// tridiagonalization followed by the implicit-shift QL iteration. Eigenvalues
/// are returned in ascending order; column k of `vectors` pairs with
/// `values[k]`.
struct SymmetricEigen {
    std::vector<double> values;
    DenseMatrix<double> vectors;
};

SymmetricEigen symmetricEigen(const DenseMatrix<double>& A, bool want_vectors = true);

/// Eigenvalues (and optionally eigenvectors) of a symmetric tridiagonal
/// matrix given by its diagonal and subdiagonal.
SymmetricEigen tridiagonalEigen(std::vector<double> diag, std::vector<double> sub,
                                bool want_vectors = true);

/// Eigenvalues of a general real matrix: Hessenberg reduction followed by a
/// shifted complex QR iteration.
std::vector<cplx> generalEigenvalues(const DenseMatrix<double>& A);

/// Returns true iff the Cholesky factorization of the symmetric matrix A
/// completes with positive pivots.
bool isPositiveDefinite(const DenseMatrix<double>& A);

/// Singular values of A in descending order (via the eigenvalues of A^T A).
std::vector<double> singularValues(const DenseMatrix<double>& A);

}  // namespace mfu
