/*==============================================================================
 *     File: dense_fun.h
 *
 *  Description: Functions of small dense matrices: exp by scaling and
 *               squaring with the degree-13 diagonal Pade approximant, log by
 *               inverse scaling and squaring (Denman-Beavers square roots),
 *               powers through exp(alpha log A), and eigendecomposition for
 *               symmetric input.
 *
 *============================================================================*/

#pragma once

#include "mfu/dense.h"
#include "mfu/rational.h"

namespace mfu {

template <typename T>
DenseMatrix<T> expm(const DenseMatrix<T>& A);

template <typename T>
DenseMatrix<T> sqrtmDenmanBeavers(const DenseMatrix<T>& A);

template <typename T>
DenseMatrix<T> logm(const DenseMatrix<T>& A);

template <typename T>
DenseMatrix<T> powm(const DenseMatrix<T>& A, double alpha);

/// f(A) for a real symmetric A through A = Q diag(lambda) Q^T. Throws
/// DomainError if f is log or a power and some eigenvalue is <= 0.
DenseMatrix<double> symmetricFun(const DenseMatrix<double>& A, const FunctionSpec& psi);

bool isSymmetric(const DenseMatrix<double>& A, double tol = 0.0);

/// Dispatch: symmetric real input uses the eigendecomposition, everything
/// else the scaling-and-squaring kernels. User functions need symmetric input.
DenseMatrix<double> denseFun(const DenseMatrix<double>& H, const FunctionSpec& psi);
DenseMatrix<cplx> denseFun(const DenseMatrix<cplx>& H, const FunctionSpec& psi);

}  // namespace mfu
