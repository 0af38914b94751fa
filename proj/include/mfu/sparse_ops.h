/*==============================================================================
 *     File: sparse_ops.h
 *
 *  Description: Kernels on CsrMatrix: products, transposes, shifts, band
 *               extraction and the fill-in metric of a factor pair.
 *
 *============================================================================*/

#pragma once

#include <span>
#include <vector>

#include "mfu/banded.h"
#include "mfu/csr.h"

namespace mfu {

/// y = A x, summed in ascending column order within each row.
template <typename T, typename U>
std::vector<promote_t<T, U>> matvec(const CsrMatrix<T>& A, std::span<const U> x);

/// y = A^H x without forming the adjoint.
template <typename T, typename U>
std::vector<promote_t<T, U>> adjointMatvec(const CsrMatrix<T>& A, std::span<const U> x);

template <typename T>
CsrMatrix<T> transpose(const CsrMatrix<T>& A);

template <typename T>
CsrMatrix<T> adjoint(const CsrMatrix<T>& A);

/// Sparse product A*B (Gustavson); exact zeros produced by cancellation are kept.
template <typename T>
CsrMatrix<T> multiply(const CsrMatrix<T>& A, const CsrMatrix<T>& B);

/// alpha*A + beta*B on the union pattern.
template <typename T>
CsrMatrix<T> add(const CsrMatrix<T>& A, const CsrMatrix<T>& B, T alpha = T{1}, T beta = T{1});

template <typename T>
CsrMatrix<T> scale(const CsrMatrix<T>& A, T s);

/// sigma*I - A. The result is complex whenever sigma is.
template <typename T, typename S>
CsrMatrix<promote_t<T, S>> shiftedNegation(const CsrMatrix<T>& A, S sigma);

/// g_m: keeps entries with |i-j| <= m. m must lie in [0, n-1].
template <typename T>
BandedMatrix<T> bandExtract(const CsrMatrix<T>& A, Index m);

template <typename T>
BandedMatrix<T> bandExtract(const BandedMatrix<T>& A, Index m);

template <typename T>
CsrMatrix<T> bandExtractCsr(const CsrMatrix<T>& A, Index m);

template <typename T>
BandedMatrix<T> bandExtract(const DenseMatrix<T>& A, Index m);

/// (nnz(Z) + nnz(W) - n) / n^2.
template <typename T>
double fillIn(const CsrMatrix<T>& Z, const CsrMatrix<T>& W, Index n);

template <typename T>
bool isHermitian(const CsrMatrix<T>& A, double tol = 0.0);

}  // namespace mfu
