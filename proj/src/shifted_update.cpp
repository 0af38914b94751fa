#include "mfu/shifted_update.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "mfu/dense.h"
#include "mfu/sparse_ops.h"

namespace mfu {

std::string toString(CorrectionStrategy s)
{
    switch (s) {
        case CorrectionStrategy::exact_product_then_extract: return "exact_product_then_extract";
        case CorrectionStrategy::product_of_extracts: return "product_of_extracts";
        case CorrectionStrategy::diagonal_closed_form: return "diagonal_closed_form";
    }
    return "?";
}

CorrectionStrategy parseCorrectionStrategy(const std::string& s)
{
    if (s == "exact_product_then_extract" || s == "exact") return CorrectionStrategy::exact_product_then_extract;
    if (s == "product_of_extracts" || s == "extracts") return CorrectionStrategy::product_of_extracts;
    if (s == "diagonal_closed_form" || s == "diagonal") return CorrectionStrategy::diagonal_closed_form;
    throw DomainError("unknown correction strategy '" + s + "'");
}

template <typename T>
CorrectionChoice defaultCorrection(const InverseFactors<T>& F)
{
    if (F.Z.bandwidth() <= 1 && F.W.bandwidth() <= 1) return {CorrectionStrategy::diagonal_closed_form, 0};
    return {CorrectionStrategy::product_of_extracts, std::min<Index>(1, std::max<Index>(0, F.size() - 1))};
}

template <typename T>
CorrectionMatrix<T> computeCorrection(const InverseFactors<T>& F, CorrectionStrategy strategy, Index m)
{
    const Index n = F.size();
    if (m < 0 || (n > 0 && m > n - 1)) throw DomainError("computeCorrection: m out of range");
    CorrectionMatrix<T> out;
    out.strategy = strategy;
    out.m = m;

    switch (strategy) {
        case CorrectionStrategy::exact_product_then_extract: {
            out.E = bandExtract(multiply(adjoint(F.W), F.Z), m);
            break;
        }
        case CorrectionStrategy::product_of_extracts: {
            // [W^H]_m is unit lower and [Z]_m unit upper, both m-banded; their
            // product has no entry with |i-j| > m, so it is stored with band m.
            const CsrMatrix<T> Wh = bandExtractCsr(adjoint(F.W), m);
            const CsrMatrix<T> Zm = bandExtractCsr(F.Z, m);
            out.E = bandExtract(multiply(Wh, Zm), m);
            break;
        }
        case CorrectionStrategy::diagonal_closed_form: {
            if (m != 0) throw DomainError("diagonal_closed_form requires m = 0");
            // Column i of W and Z are row i of the transposes.
            const CsrMatrix<T> Wt = transpose(F.W);
            const CsrMatrix<T> Zt = transpose(F.Z);
            out.E = BandedMatrix<T>(n, 0, 0);
            for (Index i = 0; i < n; i++) {
                T s{};
                Index p = Wt.rowStarts()[i], pe = Wt.rowStarts()[i + 1];
                Index q = Zt.rowStarts()[i], qe = Zt.rowStarts()[i + 1];
                while (p < pe && q < qe) {
                    const Index jw = Wt.colIndices()[p], jz = Zt.colIndices()[q];
                    if (jw >= i || jz >= i) break;
                    if (jw == jz) {
                        s += conj_if(Wt.values()[p]) * Zt.values()[q];
                        p++;
                        q++;
                    } else if (jw < jz) {
                        p++;
                    } else {
                        q++;
                    }
                }
                out.E.ref(i, i) = T{1} + s;
            }
            break;
        }
    }
    return out;
}

/*------------------------------------------------------------------------------
 *         ShiftedApproxInverse
 *----------------------------------------------------------------------------*/
template <typename T>
ShiftedApproxInverse<T>::ShiftedApproxInverse(std::shared_ptr<const InverseFactors<T>> F,
                                              const CorrectionMatrix<T>& E, cplx xi, Index band_cap)
    : F_(std::move(F)), xi_(xi)
{
    const auto t0 = std::chrono::steady_clock::now();
    const Index n = F_->size();
    if (E.E.size() != n) throw DimensionError("shifted inverse: correction size mismatch");
    bandwidth_ = std::max(E.E.lowerBandwidth(), E.E.upperBandwidth());
    if (bandwidth_ > band_cap)
        throw DomainError("shifted inverse: correction bandwidth " + std::to_string(bandwidth_) + " exceeds cap " +
                          std::to_string(band_cap));

    const double s = F_->sign == SignConvention::minus ? 1.0 : -1.0;
    const cplx shift = xi - F_->seed_shift;
    BandedMatrix<T> Dm(n, 0, 0);
    for (Index i = 0; i < n; i++) Dm.ref(i, i) = T(s) * F_->D[i];

    auto name = [&] {
        std::ostringstream os;
        os << "shifted inverse: D + xi E is singular for xi = (" << xi.real() << "," << xi.imag() << ")";
        return os.str();
    };
    try {
        if constexpr (!is_complex_v<T>) {
            if (shift.imag() == 0.0) {
                lu_ = BandedLU<double>(Dm.axpby(1.0, E.E, shift.real()));
            } else {
                lu_ = BandedLU<cplx>(toComplex(Dm).axpby(cplx(1.0), E.E, shift));
            }
        } else {
            lu_ = BandedLU<cplx>(Dm.axpby(cplx(1.0), E.E, shift));
        }
    } catch (const SingularMatrixError& e) {
        throw SingularMatrixError(name() + " (pivot " + std::to_string(e.index) + ")", e.index);
    }
    build_seconds_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename T>
std::vector<cplx> ShiftedApproxInverse<T>::apply(std::span<const cplx> v) const
{
    if (static_cast<Index>(v.size()) != size()) throw DimensionError("shifted inverse apply: size mismatch");
    const std::vector<cplx> y = adjointMatvec(F_->W, v);
    const std::vector<cplx> w =
        std::visit([&](const auto& lu) { return lu.solve(std::span<const cplx>(y)); }, lu_);
    return matvec(F_->Z, std::span<const cplx>(w));
}

template <typename T>
std::vector<double> ShiftedApproxInverse<T>::applyReal(std::span<const double> v) const
{
    if constexpr (is_complex_v<T>) {
        throw DomainError("shifted inverse: applyReal on complex factors");
    } else {
        const auto* lu = std::get_if<BandedLU<double>>(&lu_);
        if (!lu) throw DomainError("shifted inverse: applyReal on a complex operator");
        if (static_cast<Index>(v.size()) != size()) throw DimensionError("shifted inverse apply: size mismatch");
        const std::vector<double> y = adjointMatvec(F_->W, v);
        const std::vector<double> w = lu->solve(std::span<const double>(y));
        return matvec(F_->Z, std::span<const double>(w));
    }
}

/*------------------------------------------------------------------------------
 *         Decay probe
 *----------------------------------------------------------------------------*/
DecayReport decayProbe(const CsrMatrix<double>& A)
{
    if (!A.isSquare()) throw DimensionError("decayProbe: matrix not square");
    DecayReport r;
    r.n = A.rows();
    r.bandwidth = A.bandwidth();
    r.banded = r.n <= 1 || r.bandwidth < r.n - 1;

    const DenseMatrix<double> Ad = A.toDense();
    const std::vector<double> sv = singularValues(Ad);
    if (sv.empty() || sv.back() == 0.0) throw SingularMatrixError("decayProbe: matrix is singular", r.n - 1);
    r.kappa2 = sv.front() / sv.back();
    r.inv_norm2 = 1.0 / sv.back();
    const DenseMatrix<double> B = DenseLU<double>(Ad).inverse();

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    Index cnt = 0;
    Index dmin = std::numeric_limits<Index>::max(), dmax = -1;
    for (Index i = 0; i < r.n; i++) {
        for (Index j = 0; j < r.n; j++) {
            const double b = std::abs(B(i, j));
            if (i != j) r.off_diagonal_max = std::max(r.off_diagonal_max, b);
            if (b <= std::numeric_limits<double>::min()) continue;
            const double x = static_cast<double>(std::abs(i - j));
            const double y = std::log(b);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            cnt++;
            dmin = std::min(dmin, std::abs(i - j));
            dmax = std::max(dmax, std::abs(i - j));
        }
    }
    if (cnt >= 2 && dmax > dmin) {
        r.empirical_slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    } else {
        r.empirical_slope = -std::numeric_limits<double>::infinity();
    }

    r.theory_applicable = r.kappa2 >= 2.0;
    if (!r.theory_applicable) {
        r.beta = r.beta_tilde = r.c = r.worst_ratio = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    // A matrix of bandwidth m is (2m,2m)-banded with the same m.
    const double m = static_cast<double>(std::max<Index>(1, r.bandwidth));
    const double k = r.kappa2;
    r.beta = std::pow((k - 1.0) / (k + 1.0), 1.0 / (2.0 * m));
    r.beta_tilde = 0.5 * (r.beta + 1.0);
    r.c = (2.0 * m + 1.0) * (k + 1.0) / (k - 1.0) * r.inv_norm2 * k;
    r.bound_holds = true;
    r.worst_ratio = 0.0;
    for (Index i = 0; i < r.n; i++) {
        for (Index j = 0; j < r.n; j++) {
            const double bound = r.c * std::pow(r.beta_tilde, static_cast<double>(std::abs(i - j)));
            const double ratio = std::abs(B(i, j)) / bound;
            r.worst_ratio = std::max(r.worst_ratio, ratio);
            if (ratio > 1.0) r.bound_holds = false;
        }
    }
    return r;
}

template CorrectionChoice defaultCorrection(const InverseFactors<double>&);
template CorrectionChoice defaultCorrection(const InverseFactors<cplx>&);
template CorrectionMatrix<double> computeCorrection(const InverseFactors<double>&, CorrectionStrategy, Index);
template CorrectionMatrix<cplx> computeCorrection(const InverseFactors<cplx>&, CorrectionStrategy, Index);
template class ShiftedApproxInverse<double>;
template class ShiftedApproxInverse<cplx>;

}  // namespace mfu
