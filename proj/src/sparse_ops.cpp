#include "mfu/sparse_ops.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace mfu {

template <typename T, typename U>
std::vector<promote_t<T, U>> matvec(const CsrMatrix<T>& A, std::span<const U> x)
{
    using R = promote_t<T, U>;
    if (static_cast<Index>(x.size()) != A.cols())
        throw DimensionError("matvec: A has " + std::to_string(A.cols()) + " columns, x has " +
                             std::to_string(x.size()) + " entries");
    const auto& rs = A.rowStarts();
    const auto& ci = A.colIndices();
    const auto& v = A.values();
    std::vector<R> y(A.rows());
    for (Index i = 0; i < A.rows(); i++) {
        R s{};
        for (Index p = rs[i]; p < rs[i + 1]; p++) s += R(v[p]) * R(x[ci[p]]);
        y[i] = s;
    }
    return y;
}

template <typename T, typename U>
std::vector<promote_t<T, U>> adjointMatvec(const CsrMatrix<T>& A, std::span<const U> x)
{
    using R = promote_t<T, U>;
    if (static_cast<Index>(x.size()) != A.rows()) throw DimensionError("adjointMatvec: size mismatch");
    const auto& rs = A.rowStarts();
    const auto& ci = A.colIndices();
    const auto& v = A.values();
    std::vector<R> y(A.cols());
    for (Index i = 0; i < A.rows(); i++) {
        const R xi = R(x[i]);
        if (xi == R{}) continue;
        for (Index p = rs[i]; p < rs[i + 1]; p++) y[ci[p]] += R(conj_if(v[p])) * xi;
    }
    return y;
}

namespace {

template <typename T, bool Conj>
CsrMatrix<T> transposeImpl(const CsrMatrix<T>& A)
{
    const auto& rs = A.rowStarts();
    const auto& ci = A.colIndices();
    const auto& v = A.values();
    std::vector<Index> ts(A.cols() + 1, 0), tc(A.nnz());
    std::vector<T> tv(A.nnz());
    for (Index p = 0; p < A.nnz(); p++) ts[ci[p] + 1]++;
    for (Index j = 0; j < A.cols(); j++) ts[j + 1] += ts[j];
    std::vector<Index> next(ts.begin(), ts.end() - 1);
    for (Index i = 0; i < A.rows(); i++) {
        for (Index p = rs[i]; p < rs[i + 1]; p++) {
            const Index q = next[ci[p]]++;
            tc[q] = i;
            tv[q] = Conj ? conj_if(v[p]) : v[p];
        }
    }
    return CsrMatrix<T>(A.cols(), A.rows(), std::move(ts), std::move(tc), std::move(tv));
}

}  // namespace

template <typename T>
CsrMatrix<T> transpose(const CsrMatrix<T>& A)
{
    return transposeImpl<T, false>(A);
}

template <typename T>
CsrMatrix<T> adjoint(const CsrMatrix<T>& A)
{
    return transposeImpl<T, true>(A);
}

template <typename T>
CsrMatrix<T> multiply(const CsrMatrix<T>& A, const CsrMatrix<T>& B)
{
    if (A.cols() != B.rows()) throw DimensionError("multiply: inner dimension mismatch");
    const auto &ars = A.rowStarts(), &aci = A.colIndices();
    const auto& av = A.values();
    const auto &brs = B.rowStarts(), &bci = B.colIndices();
    const auto& bv = B.values();
    std::vector<Index> rs(A.rows() + 1, 0), ci;
    std::vector<T> vals;
    std::vector<T> acc(B.cols(), T{});
    std::vector<Index> mark(B.cols(), -1), cols;
    for (Index i = 0; i < A.rows(); i++) {
        cols.clear();
        for (Index p = ars[i]; p < ars[i + 1]; p++) {
            const Index k = aci[p];
            const T a = av[p];
            for (Index q = brs[k]; q < brs[k + 1]; q++) {
                const Index j = bci[q];
                if (mark[j] != i) {
                    mark[j] = i;
                    acc[j] = T{};
                    cols.push_back(j);
                }
                acc[j] += a * bv[q];
            }
        }
        std::sort(cols.begin(), cols.end());
        for (Index j : cols) {
            ci.push_back(j);
            vals.push_back(acc[j]);
        }
        rs[i + 1] = static_cast<Index>(ci.size());
    }
    return CsrMatrix<T>(A.rows(), B.cols(), std::move(rs), std::move(ci), std::move(vals));
}

template <typename T>
CsrMatrix<T> add(const CsrMatrix<T>& A, const CsrMatrix<T>& B, T alpha, T beta)
{
    if (A.rows() != B.rows() || A.cols() != B.cols()) throw DimensionError("add: shape mismatch");
    std::vector<Index> rs(A.rows() + 1, 0), ci;
    std::vector<T> vals;
    for (Index i = 0; i < A.rows(); i++) {
        Index p = A.rowStarts()[i], pe = A.rowStarts()[i + 1];
        Index q = B.rowStarts()[i], qe = B.rowStarts()[i + 1];
        while (p < pe || q < qe) {
            const Index ja = p < pe ? A.colIndices()[p] : A.cols();
            const Index jb = q < qe ? B.colIndices()[q] : B.cols();
            if (ja == jb) {
                ci.push_back(ja);
                vals.push_back(alpha * A.values()[p++] + beta * B.values()[q++]);
            } else if (ja < jb) {
                ci.push_back(ja);
                vals.push_back(alpha * A.values()[p++]);
            } else {
                ci.push_back(jb);
                vals.push_back(beta * B.values()[q++]);
            }
        }
        rs[i + 1] = static_cast<Index>(ci.size());
    }
    return CsrMatrix<T>(A.rows(), A.cols(), std::move(rs), std::move(ci), std::move(vals));
}

template <typename T>
CsrMatrix<T> scale(const CsrMatrix<T>& A, T s)
{
    std::vector<T> vals = A.values();
    for (auto& x : vals) x *= s;
    return CsrMatrix<T>(A.rows(), A.cols(), A.rowStarts(), A.colIndices(), std::move(vals));
}

template <typename T, typename S>
CsrMatrix<promote_t<T, S>> shiftedNegation(const CsrMatrix<T>& A, S sigma)
{
    using R = promote_t<T, S>;
    if (!A.isSquare()) throw DimensionError("shiftedNegation: matrix not square");
    std::vector<Index> rs(A.rows() + 1, 0), ci;
    std::vector<R> vals;
    for (Index i = 0; i < A.rows(); i++) {
        bool diag_done = false;
        for (Index p = A.rowStarts()[i]; p < A.rowStarts()[i + 1]; p++) {
            const Index j = A.colIndices()[p];
            if (!diag_done && j > i) {
                ci.push_back(i);
                vals.push_back(R(sigma));
                diag_done = true;
            }
            if (j == i) {
                ci.push_back(j);
                vals.push_back(R(sigma) - R(A.values()[p]));
                diag_done = true;
            } else {
                ci.push_back(j);
                vals.push_back(-R(A.values()[p]));
            }
        }
        if (!diag_done) {
            ci.push_back(i);
            vals.push_back(R(sigma));
        }
        rs[i + 1] = static_cast<Index>(ci.size());
    }
    return CsrMatrix<R>(A.rows(), A.cols(), std::move(rs), std::move(ci), std::move(vals));
}

namespace {

void checkBand(Index n, Index m)
{
    if (m < 0 || (n > 0 && m > n - 1))
        throw DomainError("bandExtract: m=" + std::to_string(m) + " outside [0, n-1] for n=" + std::to_string(n));
}

}  // namespace

template <typename T>
BandedMatrix<T> bandExtract(const CsrMatrix<T>& A, Index m)
{
    if (!A.isSquare()) throw DimensionError("bandExtract: matrix not square");
    checkBand(A.rows(), m);
    BandedMatrix<T> B(A.rows(), m, m);
    for (Index i = 0; i < A.rows(); i++)
        for (Index p = A.rowStarts()[i]; p < A.rowStarts()[i + 1]; p++) {
            const Index j = A.colIndices()[p];
            if (std::abs(i - j) <= m) B.ref(i, j) = A.values()[p];
        }
    return B;
}

template <typename T>
BandedMatrix<T> bandExtract(const BandedMatrix<T>& A, Index m)
{
    checkBand(A.size(), m);
    BandedMatrix<T> B(A.size(), m, m);
    for (Index i = 0; i < A.size(); i++)
        for (Index j = std::max<Index>(0, i - m); j <= std::min(A.size() - 1, i + m); j++) B.ref(i, j) = A(i, j);
    return B;
}

template <typename T>
CsrMatrix<T> bandExtractCsr(const CsrMatrix<T>& A, Index m)
{
    if (!A.isSquare()) throw DimensionError("bandExtract: matrix not square");
    checkBand(A.rows(), m);
    std::vector<Index> rs(A.rows() + 1, 0), ci;
    std::vector<T> vals;
    for (Index i = 0; i < A.rows(); i++) {
        for (Index p = A.rowStarts()[i]; p < A.rowStarts()[i + 1]; p++) {
            const Index j = A.colIndices()[p];
            if (std::abs(i - j) > m) continue;
            ci.push_back(j);
            vals.push_back(A.values()[p]);
        }
        rs[i + 1] = static_cast<Index>(ci.size());
    }
    return CsrMatrix<T>(A.rows(), A.cols(), std::move(rs), std::move(ci), std::move(vals));
}

template <typename T>
BandedMatrix<T> bandExtract(const DenseMatrix<T>& A, Index m)
{
    if (A.rows() != A.cols()) throw DimensionError("bandExtract: matrix not square");
    checkBand(A.rows(), m);
    BandedMatrix<T> B(A.rows(), m, m);
    for (Index i = 0; i < A.rows(); i++)
        for (Index j = std::max<Index>(0, i - m); j <= std::min(A.rows() - 1, i + m); j++) B.ref(i, j) = A(i, j);
    return B;
}

template <typename T>
double fillIn(const CsrMatrix<T>& Z, const CsrMatrix<T>& W, Index n)
{
    if (Z.rows() != n || Z.cols() != n || W.rows() != n || W.cols() != n)
        throw DimensionError("fillIn: factors must be n x n");
    const double nn = static_cast<double>(n);
    return (static_cast<double>(Z.nnz()) + static_cast<double>(W.nnz()) - nn) / (nn * nn);
}

template <typename T>
bool isHermitian(const CsrMatrix<T>& A, double tol)
{
    if (!A.isSquare()) return false;
    const CsrMatrix<T> H = adjoint(A);
    const double scale = std::max(1.0, A.infNorm());
    for (Index i = 0; i < A.rows(); i++) {
        Index p = A.rowStarts()[i], pe = A.rowStarts()[i + 1];
        Index q = H.rowStarts()[i], qe = H.rowStarts()[i + 1];
        while (p < pe || q < qe) {
            const Index ja = p < pe ? A.colIndices()[p] : A.cols();
            const Index jb = q < qe ? H.colIndices()[q] : H.cols();
            T a{}, b{};
            if (ja <= jb) a = A.values()[p++];
            if (jb <= ja) b = H.values()[q++];
            if (std::abs(a - b) > tol * scale) return false;
        }
    }
    return true;
}

#define MFU_SPARSE_OPS(T)                                                                      \
    template CsrMatrix<T> transpose(const CsrMatrix<T>&);                                      \
    template CsrMatrix<T> adjoint(const CsrMatrix<T>&);                                        \
    template CsrMatrix<T> multiply(const CsrMatrix<T>&, const CsrMatrix<T>&);                  \
    template CsrMatrix<T> add(const CsrMatrix<T>&, const CsrMatrix<T>&, T, T);                 \
    template CsrMatrix<T> scale(const CsrMatrix<T>&, T);                                       \
    template BandedMatrix<T> bandExtract(const CsrMatrix<T>&, Index);                          \
    template BandedMatrix<T> bandExtract(const BandedMatrix<T>&, Index);                       \
    template BandedMatrix<T> bandExtract(const DenseMatrix<T>&, Index);                        \
    template CsrMatrix<T> bandExtractCsr(const CsrMatrix<T>&, Index);                          \
    template double fillIn(const CsrMatrix<T>&, const CsrMatrix<T>&, Index);                   \
    template bool isHermitian(const CsrMatrix<T>&, double);                                    \
    template std::vector<promote_t<T, double>> matvec(const CsrMatrix<T>&, std::span<const double>); \
    template std::vector<cplx> matvec(const CsrMatrix<T>&, std::span<const cplx>);             \
    template std::vector<promote_t<T, double>> adjointMatvec(const CsrMatrix<T>&, std::span<const double>); \
    template std::vector<cplx> adjointMatvec(const CsrMatrix<T>&, std::span<const cplx>);      \
    template CsrMatrix<promote_t<T, double>> shiftedNegation(const CsrMatrix<T>&, double);     \
    template CsrMatrix<cplx> shiftedNegation(const CsrMatrix<T>&, cplx);

MFU_SPARSE_OPS(double)
MFU_SPARSE_OPS(cplx)

#undef MFU_SPARSE_OPS

}  // namespace mfu
