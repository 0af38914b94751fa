/*==============================================================================
 *     File: factorizations.h
 *
 *  Description: Seed approximate inverse factorizations P0 = Z D^{-1} W^H,
 *               built either by biconjugation (AINV) or by ILUT followed by
 *               inversion and sparsification of the triangular factors (INVT).
 *
 *               Unit diagonals of every triangular factor are stored
 *               explicitly, so nnz counts them.
 *
 *============================================================================*/

#pragma once

#include <span>
#include <variant>
#include <vector>

#include "mfu/csr.h"
#include "mfu/types.h"

namespace mfu {

/// minus: W^H (s I - A) Z ~ D, with s the seed shift (0 gives factors of -A).
/// plus:  W^H A Z ~ D.
enum class SignConvention { plus, minus };

enum class SeedMethod { ainv, invt };

/// A ~ L diag(D) U with L unit lower and U unit upper triangular.
template <typename T>
struct IlutFactors {
    CsrMatrix<T> L;
    std::vector<T> D;
    CsrMatrix<T> U;
    double drop_tol_used = 0.0;
};

template <typename T>
struct InverseFactors {
    CsrMatrix<T> Z;           // unit upper
    CsrMatrix<T> W;           // unit upper
    std::vector<T> D;
    cplx seed_shift{0.0, 0.0};
    SignConvention sign = SignConvention::minus;
    bool shared_factor = false;  // W is a copy of Z (Hermitian input)

    Index size() const { return Z.rows(); }

    /// P0 v = Z D^{-1} W^H v.
    template <typename U>
    std::vector<promote_t<T, U>> apply(std::span<const U> v) const;
};

using AnyInverseFactors = std::variant<InverseFactors<double>, InverseFactors<cplx>>;

/// Row-wise IKJ ILUT with relative drop tau_L * max_j |a_ij| and no fill cap.
template <typename T>
IlutFactors<T> ilut(const CsrMatrix<T>& A, double tau_L);

/// Inverse of a unit triangular matrix, column by column, dropping entries
/// with |x| < tau_Z (never the diagonal) after each column.
template <typename T>
CsrMatrix<T> invertSparsifyTriangular(const CsrMatrix<T>& T_, double tau_Z);

/// Left-looking two-sided biconjugation with absolute drop tolerance tau,
/// applied once per finished column (never to the diagonal).
/// With sign=minus the diagonal is negated so that W^H (-A) Z ~ D.
template <typename T>
InverseFactors<T> ainv(const CsrMatrix<T>& A, double tau, SignConvention sign = SignConvention::plus);

/// Builds INVT factors from an ILUT factorization of the target.
template <typename T>
InverseFactors<T> invt(const CsrMatrix<T>& target, double tau_L, double tau_Z);

struct SeedConfig {
    SeedMethod method = SeedMethod::ainv;
    double tau = 0.1;      // AINV
    double tau_L = 1e-2;   // ILUT
    double tau_Z = 1e-1;   // post-sparsification
};

/// Factors of (seed_shift I - A), or of -A when seed_shift is 0, always with
/// sign_convention = minus. AINV requires a real seed shift.
template <typename T>
AnyInverseFactors seedPreconditioner(const CsrMatrix<T>& A, const SeedConfig& cfg, cplx seed_shift = {});

template <typename T>
InverseFactors<cplx> toComplex(const InverseFactors<T>& F);

}  // namespace mfu
