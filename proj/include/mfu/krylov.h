/*==============================================================================
 *     File: krylov.h
 *
 *  Description: CG, right-preconditioned BiCGSTAB, Arnoldi with modified
 *               Gram-Schmidt, and the Arnoldi approximation of psi(A) v.
 *
 *============================================================================*/

#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mfu/csr.h"
#include "mfu/dense.h"
#include "mfu/rational.h"

namespace mfu {

template <typename T>
struct LinearOperator {
    using Apply = std::function<std::vector<T>(std::span<const T>)>;

    Index n = 0;
    Apply apply;
    Apply precondition;  // empty: no preconditioner

    bool hasPreconditioner() const { return static_cast<bool>(precondition); }
};

template <typename T>
LinearOperator<T> makeOperator(const CsrMatrix<T>& A);  // copies A
template <typename T>
LinearOperator<T> makeOperator(std::shared_ptr<const CsrMatrix<T>> A);

/// x -> xi x - A x, in complex arithmetic.
LinearOperator<cplx> makeShiftedOperator(const CsrMatrix<double>& A, cplx xi);
LinearOperator<cplx> makeShiftedOperator(std::shared_ptr<const CsrMatrix<double>> A, cplx xi);

struct IterStats {
    std::string solver;
    double iterations = 0.0;
    double final_relative_residual = 0.0;   // recursive residual at exit
    double true_relative_residual = 0.0;    // ||b - A x|| / ||b|| recomputed
    bool converged = false;
    double elapsed_seconds = 0.0;
    Index matvec_count = 0;
    std::vector<double> residual_history;
};

template <typename T>
std::pair<std::vector<T>, IterStats> cg(const LinearOperator<T>& op, std::span<const T> b, double tol, Index maxit);

/// Half steps count as 0.5 iterations.
template <typename T>
std::pair<std::vector<T>, IterStats> bicgstab(const LinearOperator<T>& op, std::span<const T> b, double tol,
                                              Index maxit);

template <typename T>
struct ArnoldiDecomposition {
    std::vector<std::vector<T>> V;  // m+1 basis vectors (m if breakdown)
    DenseMatrix<T> H;               // (m+1) x m
    Index m = 0;
    bool breakdown = false;
};

template <typename T>
ArnoldiDecomposition<T> arnoldi(const LinearOperator<T>& op, std::span<const T> v, Index m);

/// y_m = ||v|| V_m psi(H_m) e_1, stopped when h_{m+1,m} |e_m^T psi(H_m) e_1|
/// drops below gamma_tol.
template <typename T>
std::pair<std::vector<T>, IterStats> krylovFunAction(const LinearOperator<T>& op, std::span<const T> v,
                                                     const FunctionSpec& psi, double gamma_tol = 1e-6,
                                                     Index m_max = 200);

template <typename T>
double norm2(std::span<const T> x);

}  // namespace mfu
