/*==============================================================================
 *     File: shifted_update.h
 *
 *  Description: Updated approximate inverses of shifted matrices,
 *
 *                   (xi I - A)^{-1} ~ P_xi = Z (s D + (xi - sigma) E)^{-1} W^H,
 *
 *               where (Z, D, W) is a seed factorization built at shift sigma
 *               and E is a banded approximation of W^H Z. The sign s is +1
 *               for factors of (sigma I - A) and -1 for factors of A.
 *
 *============================================================================*/

#pragma once

#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mfu/banded.h"
#include "mfu/csr.h"
#include "mfu/factorizations.h"

namespace mfu {

enum class CorrectionStrategy { exact_product_then_extract, product_of_extracts, diagonal_closed_form };

std::string toString(CorrectionStrategy s);
CorrectionStrategy parseCorrectionStrategy(const std::string& s);

template <typename T>
struct CorrectionMatrix {
    BandedMatrix<T> E;
    CorrectionStrategy strategy = CorrectionStrategy::diagonal_closed_form;
    Index m = 0;
};

/// Strategy and band used when the caller does not choose: the closed-form
/// diagonal if both factors have bandwidth <= 1, otherwise g_1 applied to
/// the product of the extracted factors.
struct CorrectionChoice {
    CorrectionStrategy strategy;
    Index m;
};

template <typename T>
CorrectionChoice defaultCorrection(const InverseFactors<T>& F);

template <typename T>
CorrectionMatrix<T> computeCorrection(const InverseFactors<T>& F, CorrectionStrategy strategy, Index m);

/// Largest band half-width accepted for D + xi E.
inline constexpr Index kDefaultBandCap = 50;

template <typename T>
class ShiftedApproxInverse {
public:
    ShiftedApproxInverse(std::shared_ptr<const InverseFactors<T>> F, const CorrectionMatrix<T>& E, cplx xi,
                         Index band_cap = kDefaultBandCap);

    cplx xi() const { return xi_; }
    Index size() const { return F_->size(); }
    Index bandwidth() const { return bandwidth_; }
    bool isComplex() const { return std::holds_alternative<BandedLU<cplx>>(lu_); }
    double buildSeconds() const { return build_seconds_; }

    /// Z (M^{-1} (W^H v)).
    std::vector<cplx> apply(std::span<const cplx> v) const;
    /// Real operator on a real vector; throws if the operator is complex.
    std::vector<double> applyReal(std::span<const double> v) const;

private:
    std::shared_ptr<const InverseFactors<T>> F_;
    cplx xi_;
    Index bandwidth_ = 0;
    double build_seconds_ = 0.0;
    std::variant<BandedLU<double>, BandedLU<cplx>> lu_;
};

template <typename T>
ShiftedApproxInverse<T> buildShiftedInverse(std::shared_ptr<const InverseFactors<T>> F, const CorrectionMatrix<T>& E,
                                            cplx xi, Index band_cap = kDefaultBandCap)
{
    return ShiftedApproxInverse<T>(std::move(F), E, xi, band_cap);
}

/*------------------------------------------------------------------------------
 *         Decay of the inverse of a banded matrix
 *----------------------------------------------------------------------------*/
struct DecayReport {
    Index n = 0;
    Index bandwidth = 0;
    bool banded = true;              // false: bandwidth is n-1
    double kappa2 = 0.0;
    double inv_norm2 = 0.0;
    bool theory_applicable = false;  // kappa2 >= 2
    double beta = 0.0;               // ((kappa-1)/(kappa+1))^{1/(2m)}, m = bandwidth
    double beta_tilde = 0.0;         // (beta+1)/2
    double c = 0.0;                  // (2m+1)(kappa+1)/(kappa-1) ||A^{-1}|| kappa
    double empirical_slope = 0.0;    // least squares slope of log|b_ij| vs |i-j|
    double off_diagonal_max = 0.0;
    bool bound_holds = true;
    double worst_ratio = 0.0;        // max |b_ij| / (c beta_tilde^{|i-j|})
};

DecayReport decayProbe(const CsrMatrix<double>& A);

}  // namespace mfu
