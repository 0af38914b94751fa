#include "mfu/factorizations.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <string>
#include <utility>

#include "mfu/sparse_ops.h"

namespace mfu {

template <typename T>
template <typename U>
std::vector<promote_t<T, U>> InverseFactors<T>::apply(std::span<const U> v) const
{
    using R = promote_t<T, U>;
    std::vector<R> y = adjointMatvec(W, v);
    for (Index i = 0; i < static_cast<Index>(y.size()); i++) y[i] /= R(D[i]);
    return matvec(Z, std::span<const R>(y));
}

/*------------------------------------------------------------------------------
 *         ILUT
 *----------------------------------------------------------------------------*/
template <typename T>
IlutFactors<T> ilut(const CsrMatrix<T>& A, double tau_L)
{
    if (!A.isSquare()) throw DimensionError("ilut: matrix not square");
    if (tau_L < 0.0) throw DomainError("ilut: tau_L must be nonnegative");
    const Index n = A.rows();

    // Upper factor rows kept unscaled (diagonal first) while eliminating.
    std::vector<std::vector<std::pair<Index, T>>> urows(n);
    std::vector<Index> lrs(n + 1, 0), lci;
    std::vector<T> lv;
    std::vector<T> D(n);

    std::vector<T> w(n, T{});
    std::vector<char> used(n, 0);
    std::vector<Index> pattern;
    std::priority_queue<Index, std::vector<Index>, std::greater<>> lower;

    for (Index i = 0; i < n; i++) {
        const double drop = tau_L * A.rowInfNorm(i);
        pattern.clear();
        for (Index p = A.rowStarts()[i]; p < A.rowStarts()[i + 1]; p++) {
            const Index j = A.colIndices()[p];
            w[j] = A.values()[p];
            used[j] = 1;
            pattern.push_back(j);
            if (j < i) lower.push(j);
        }
        std::vector<std::pair<Index, T>> lrow;
        while (!lower.empty()) {
            const Index k = lower.top();
            lower.pop();
            if (w[k] == T{}) continue;
            const T l = w[k] / urows[k].front().second;
            w[k] = T{};
            if (std::abs(l) < drop) continue;
            lrow.emplace_back(k, l);
            for (std::size_t q = 1; q < urows[k].size(); q++) {
                const auto [j, u] = urows[k][q];
                if (!used[j]) {
                    used[j] = 1;
                    pattern.push_back(j);
                    if (j < i) lower.push(j);
                }
                w[j] -= l * u;
            }
        }
        for (const auto& [k, l] : lrow) {
            lci.push_back(k);
            lv.push_back(l);
        }
        lci.push_back(i);
        lv.push_back(T{1});
        lrs[i + 1] = static_cast<Index>(lci.size());

        if (!used[i] || w[i] == T{}) {
            for (Index j : pattern) {
                w[j] = T{};
                used[j] = 0;
            }
            throw SingularMatrixError("ilut: zero pivot in row " + std::to_string(i), i);
        }
        std::sort(pattern.begin(), pattern.end());
        auto& ur = urows[i];
        ur.emplace_back(i, w[i]);
        for (Index j : pattern) {
            if (j > i && w[j] != T{} && std::abs(w[j]) >= drop) ur.emplace_back(j, w[j]);
            w[j] = T{};
            used[j] = 0;
        }
        D[i] = ur.front().second;
    }

    std::vector<Index> urs(n + 1, 0), uci;
    std::vector<T> uv;
    for (Index i = 0; i < n; i++) {
        uci.push_back(i);
        uv.push_back(T{1});
        for (std::size_t q = 1; q < urows[i].size(); q++) {
            uci.push_back(urows[i][q].first);
            uv.push_back(urows[i][q].second / D[i]);
        }
        urs[i + 1] = static_cast<Index>(uci.size());
    }

    IlutFactors<T> f;
    f.L = CsrMatrix<T>(n, n, std::move(lrs), std::move(lci), std::move(lv));
    f.U = CsrMatrix<T>(n, n, std::move(urs), std::move(uci), std::move(uv));
    f.D = std::move(D);
    f.drop_tol_used = tau_L;
    return f;
}

/*------------------------------------------------------------------------------
 *         Triangular inversion with post-sparsification
 *----------------------------------------------------------------------------*/
namespace {

template <typename T>
void checkUnitDiagonal(const CsrMatrix<T>& M)
{
    for (Index i = 0; i < M.rows(); i++) {
        const T d = M.at(i, i);
        if (d != T{} && std::abs(d - T{1}) > 1e-14)
            throw FormatError("invertSparsifyTriangular: diagonal entry " + std::to_string(i) + " is not 1");
    }
}

// Inverse of a unit upper triangular matrix, returned in CSR.
template <typename T>
CsrMatrix<T> invertUnitUpper(const CsrMatrix<T>& Up, double tau)
{
    const Index n = Up.rows();
    // Row l of the transpose lists the entries of column l of Up.
    const CsrMatrix<T> cols = transpose(Up);
    std::vector<T> x(n, T{});
    std::vector<char> used(n, 0);
    std::vector<Index> touched;
    std::priority_queue<Index> heap;
    std::vector<Triplet<T>> out;

    for (Index j = 0; j < n; j++) {
        x[j] = T{1};
        used[j] = 1;
        touched.assign(1, j);
        heap.push(j);
        while (!heap.empty()) {
            const Index l = heap.top();
            heap.pop();
            const T xl = x[l];
            if (xl == T{}) continue;
            for (Index p = cols.rowStarts()[l]; p < cols.rowStarts()[l + 1]; p++) {
                const Index k = cols.colIndices()[p];
                if (k >= l) continue;
                if (!used[k]) {
                    used[k] = 1;
                    touched.push_back(k);
                    heap.push(k);
                }
                x[k] -= cols.values()[p] * xl;
            }
        }
        for (Index k : touched) {
            if (k == j || (x[k] != T{} && std::abs(x[k]) >= tau)) out.push_back({k, j, k == j ? T{1} : x[k]});
            x[k] = T{};
            used[k] = 0;
        }
    }
    return CsrMatrix<T>::fromTriplets(n, n, std::move(out));
}

}  // namespace

template <typename T>
CsrMatrix<T> invertSparsifyTriangular(const CsrMatrix<T>& T_, double tau_Z)
{
    if (!T_.isSquare()) throw DimensionError("invertSparsifyTriangular: matrix not square");
    if (tau_Z < 0.0) throw DomainError("invertSparsifyTriangular: tau_Z must be nonnegative");
    checkUnitDiagonal(T_);
    if (T_.isUpperTriangular()) return invertUnitUpper(T_, tau_Z);
    if (T_.isLowerTriangular()) return transpose(invertUnitUpper(transpose(T_), tau_Z));
    throw FormatError("invertSparsifyTriangular: matrix is not triangular");
}

/*------------------------------------------------------------------------------
 *         AINV
 *----------------------------------------------------------------------------*/
namespace {

template <typename T>
using SparseCol = std::vector<std::pair<Index, T>>;

// One-sided left-looking sweep: column z_j of a unit upper Z is made
// conjugate to rows 0..j-1 of B, then entries below tau are dropped.
// Returns Z and the pivots p_j = b_j z_j.
template <typename T>
std::pair<CsrMatrix<T>, std::vector<T>> biconjSweep(const CsrMatrix<T>& B, double tau)
{
    const Index n = B.rows();
    const auto& rs = B.rowStarts();
    const auto& ci = B.colIndices();
    const auto& va = B.values();

    // rows holding a nonzero in column k, ascending
    std::vector<std::vector<Index>> rowsOf(n);
    for (Index i = 0; i < n; i++)
        for (Index p = rs[i]; p < rs[i + 1]; p++) rowsOf[ci[p]].push_back(i);

    std::vector<SparseCol<T>> z(n);
    std::vector<T> pivots(n);
    std::vector<T> w(n, T{});
    std::vector<char> active(n, 0);
    std::vector<Index> support;
    std::vector<Index> queued(n, -1);
    std::priority_queue<Index, std::vector<Index>, std::greater<Index>> heap;

    auto rowDot = [&](Index i) {
        T s{};
        for (Index p = rs[i]; p < rs[i + 1]; p++) s += va[p] * w[ci[p]];
        return s;
    };

    for (Index j = 0; j < n; j++) {
        auto activate = [&](Index k, Index after) {
            active[k] = 1;
            support.push_back(k);
            for (Index i : rowsOf[k]) {
                if (i >= j) break;
                if (i > after && queued[i] != j) {
                    queued[i] = j;
                    heap.push(i);
                }
            }
        };
        w[j] = T{1};
        activate(j, -1);
        while (!heap.empty()) {
            const Index i = heap.top();
            heap.pop();
            const T p = rowDot(i);
            if (p == T{}) continue;
            const T alpha = p / pivots[i];
            for (const auto& [k, v] : z[i]) {
                if (!active[k]) activate(k, i);
                w[k] -= alpha * v;
            }
        }
        std::sort(support.begin(), support.end());
        SparseCol<T>& zj = z[j];
        for (Index k : support) {
            if (k == j || (w[k] != T{} && std::abs(w[k]) >= tau)) zj.emplace_back(k, w[k]);
            w[k] = T{};
            active[k] = 0;
        }
        support.clear();
        for (const auto& [k, v] : zj) w[k] = v;
        const T pj = rowDot(j);
        for (const auto& [k, v] : zj) w[k] = T{};
        if (pj == T{}) throw BreakdownError("ainv: zero pivot (breakdown) at column " + std::to_string(j), j);
        pivots[j] = pj;
    }

    std::vector<Triplet<T>> trip;
    for (Index j = 0; j < n; j++)
        for (const auto& [k, v] : z[j]) trip.push_back({k, j, v});
    return {CsrMatrix<T>::fromTriplets(n, n, std::move(trip)), std::move(pivots)};
}

}  // namespace

template <typename T>
InverseFactors<T> ainv(const CsrMatrix<T>& A, double tau, SignConvention sign)
{
    if (!A.isSquare()) throw DimensionError("ainv: matrix not square");
    if (tau < 0.0) throw DomainError("ainv: tau must be nonnegative");
    InverseFactors<T> F;
    auto [Z, p] = biconjSweep(A, tau);
    F.Z = std::move(Z);
    if (isHermitian(A)) {
        F.W = F.Z;
        F.shared_factor = true;
    } else {
        // W is the Z factor of A^H; its pivots coincide with p up to conjugation.
        F.W = biconjSweep(adjoint(A), tau).first;
    }
    F.D = std::move(p);
    F.sign = sign;
    if (sign == SignConvention::minus)
        for (auto& d : F.D) d = -d;
    return F;
}

template <typename T>
InverseFactors<T> invt(const CsrMatrix<T>& target, double tau_L, double tau_Z)
{
    IlutFactors<T> f = ilut(target, tau_L);
    InverseFactors<T> F;
    F.Z = invertSparsifyTriangular(f.U, tau_Z);
    F.W = invertSparsifyTriangular(adjoint(f.L), tau_Z);
    F.D = std::move(f.D);
    F.sign = SignConvention::plus;
    return F;
}

template <typename T>
AnyInverseFactors seedPreconditioner(const CsrMatrix<T>& A, const SeedConfig& cfg, cplx seed_shift)
{
    if (!A.isSquare()) throw DimensionError("seedPreconditioner: matrix not square");
    const bool real_shift = seed_shift.imag() == 0.0;

    auto finish = [&](auto F) -> AnyInverseFactors {
        F.sign = SignConvention::minus;
        F.seed_shift = seed_shift;
        return F;
    };

    if (cfg.method == SeedMethod::ainv) {
        if (!real_shift) throw DomainError("seedPreconditioner: the AINV path requires a real seed shift");
        if constexpr (is_complex_v<T>) {
            return finish(ainv(shiftedNegation(A, seed_shift), cfg.tau));
        } else {
            return finish(ainv(shiftedNegation(A, seed_shift.real()), cfg.tau));
        }
    }
    if (!is_complex_v<T> && real_shift) {
        return finish(invt(shiftedNegation(A, seed_shift.real()), cfg.tau_L, cfg.tau_Z));
    }
    return finish(invt(shiftedNegation(A, seed_shift), cfg.tau_L, cfg.tau_Z));
}

template <typename T>
InverseFactors<cplx> toComplex(const InverseFactors<T>& F)
{
    if constexpr (is_complex_v<T>) {
        return F;
    } else {
        InverseFactors<cplx> C;
        C.Z = mfu::toComplex(F.Z);
        C.W = mfu::toComplex(F.W);
        C.D.assign(F.D.begin(), F.D.end());
        C.seed_shift = F.seed_shift;
        C.sign = F.sign;
        C.shared_factor = F.shared_factor;
        return C;
    }
}

#define MFU_FACT(T)                                                                           \
    template struct InverseFactors<T>;                                                        \
    template std::vector<promote_t<T, double>> InverseFactors<T>::apply(std::span<const double>) const; \
    template std::vector<cplx> InverseFactors<T>::apply(std::span<const cplx>) const;         \
    template IlutFactors<T> ilut(const CsrMatrix<T>&, double);                                \
    template CsrMatrix<T> invertSparsifyTriangular(const CsrMatrix<T>&, double);              \
    template InverseFactors<T> ainv(const CsrMatrix<T>&, double, SignConvention);             \
    template InverseFactors<T> invt(const CsrMatrix<T>&, double, double);                     \
    template AnyInverseFactors seedPreconditioner(const CsrMatrix<T>&, const SeedConfig&, cplx); \
    template InverseFactors<cplx> toComplex(const InverseFactors<T>&);

MFU_FACT(double)
MFU_FACT(cplx)

#undef MFU_FACT

}  // namespace mfu
