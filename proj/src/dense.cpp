/*==============================================================================
 *     File: dense.cpp
 *
 *  Description: Dense matrix container, LU, and symmetric/general eigenvalue
 *               kernels used as oracles.
 *
 *============================================================================*/

#include "mfu/dense.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>

namespace mfu {

namespace {

Index initialCap()
{
    if (const char* env = std::getenv("MFU_DENSE_CAP")) {
        try {
            Index v = std::stoll(env);
            if (v > 0) return v;
        } catch (const std::exception&) {
        }
    }
    return 2000;
}

std::atomic<Index>& capStorage()
{
    static std::atomic<Index> cap{initialCap()};
    return cap;
}

}  // namespace

Index denseCap() { return capStorage().load(); }

void setDenseCap(Index cap)
{
    if (cap <= 0) throw DomainError("dense cap must be positive");
    capStorage().store(cap);
}

/*------------------------------------------------------------------------------
 *         DenseMatrix
 *----------------------------------------------------------------------------*/
template <typename T>
DenseMatrix<T>::DenseMatrix(Index rows, Index cols, T fill) : rows_(rows), cols_(cols)
{
    if (rows < 0 || cols < 0) throw DimensionError("negative dense dimension");
    if (rows > denseCap() || cols > denseCap()) {
        throw DimensionError("dense matrix " + std::to_string(rows) + "x" + std::to_string(cols) +
                             " exceeds the dense cap of " + std::to_string(denseCap()));
    }
    data_.assign(static_cast<std::size_t>(rows * cols), fill);
}

template <typename T>
DenseMatrix<T> DenseMatrix<T>::identity(Index n)
{
    DenseMatrix I(n, n);
    for (Index i = 0; i < n; i++) I(i, i) = T{1};
    return I;
}

template <typename T>
DenseMatrix<T> DenseMatrix<T>::diagonal(std::span<const T> d)
{
    const auto n = static_cast<Index>(d.size());
    DenseMatrix D(n, n);
    for (Index i = 0; i < n; i++) D(i, i) = d[i];
    return D;
}

template <typename T>
std::vector<T> DenseMatrix<T>::column(Index j) const
{
    std::vector<T> c(rows_);
    for (Index i = 0; i < rows_; i++) c[i] = (*this)(i, j);
    return c;
}

template <typename T>
void DenseMatrix<T>::setColumn(Index j, std::span<const T> v)
{
    for (Index i = 0; i < rows_; i++) (*this)(i, j) = v[i];
}

template <typename T>
DenseMatrix<T> DenseMatrix<T>::transpose() const
{
    DenseMatrix R(cols_, rows_);
    for (Index i = 0; i < rows_; i++)
        for (Index j = 0; j < cols_; j++) R(j, i) = (*this)(i, j);
    return R;
}

template <typename T>
DenseMatrix<T> DenseMatrix<T>::adjoint() const
{
    DenseMatrix R(cols_, rows_);
    for (Index i = 0; i < rows_; i++)
        for (Index j = 0; j < cols_; j++) R(j, i) = conj_if((*this)(i, j));
    return R;
}

template <typename T>
DenseMatrix<T>& DenseMatrix<T>::operator+=(const DenseMatrix& B)
{
    if (rows_ != B.rows_ || cols_ != B.cols_) throw DimensionError("dense add: shape mismatch");
    for (std::size_t k = 0; k < data_.size(); k++) data_[k] += B.data_[k];
    return *this;
}

template <typename T>
DenseMatrix<T>& DenseMatrix<T>::operator-=(const DenseMatrix& B)
{
    if (rows_ != B.rows_ || cols_ != B.cols_) throw DimensionError("dense sub: shape mismatch");
    for (std::size_t k = 0; k < data_.size(); k++) data_[k] -= B.data_[k];
    return *this;
}

template <typename T>
DenseMatrix<T>& DenseMatrix<T>::operator*=(T s)
{
    for (auto& x : data_) x *= s;
    return *this;
}

template <typename T>
double DenseMatrix<T>::frobeniusNorm() const
{
    double s = 0.0;
    for (const auto& x : data_) s += std::norm(x);
    return std::sqrt(s);
}

template <typename T>
double DenseMatrix<T>::oneNorm() const
{
    double best = 0.0;
    for (Index j = 0; j < cols_; j++) {
        double s = 0.0;
        for (Index i = 0; i < rows_; i++) s += std::abs((*this)(i, j));
        best = std::max(best, s);
    }
    return best;
}

template <typename T>
double DenseMatrix<T>::infNorm() const
{
    double best = 0.0;
    for (Index i = 0; i < rows_; i++) {
        double s = 0.0;
        for (Index j = 0; j < cols_; j++) s += std::abs((*this)(i, j));
        best = std::max(best, s);
    }
    return best;
}

template <typename T>
double DenseMatrix<T>::maxAbs() const
{
    double best = 0.0;
    for (const auto& x : data_) best = std::max(best, static_cast<double>(std::abs(x)));
    return best;
}

template <typename T>
DenseMatrix<T> matmul(const DenseMatrix<T>& A, const DenseMatrix<T>& B)
{
    if (A.cols() != B.rows()) throw DimensionError("dense matmul: inner dimension mismatch");
    DenseMatrix<T> C(A.rows(), B.cols());
    for (Index i = 0; i < A.rows(); i++) {
        auto ci = C.row(i);
        for (Index k = 0; k < A.cols(); k++) {
            const T a = A(i, k);
            if (a == T{}) continue;
            auto bk = B.row(k);
            for (Index j = 0; j < B.cols(); j++) ci[j] += a * bk[j];
        }
    }
    return C;
}

template <typename T, typename U>
std::vector<promote_t<T, U>> matvec(const DenseMatrix<T>& A, std::span<const U> x)
{
    using R = promote_t<T, U>;
    if (static_cast<Index>(x.size()) != A.cols()) throw DimensionError("dense matvec: size mismatch");
    std::vector<R> y(A.rows());
    for (Index i = 0; i < A.rows(); i++) {
        R s{};
        auto ai = A.row(i);
        for (Index j = 0; j < A.cols(); j++) s += R(ai[j]) * R(x[j]);
        y[i] = s;
    }
    return y;
}

DenseMatrix<cplx> toComplex(const DenseMatrix<double>& A)
{
    DenseMatrix<cplx> C(A.rows(), A.cols());
    for (std::size_t k = 0; k < A.data().size(); k++) C.data()[k] = A.data()[k];
    return C;
}

DenseMatrix<double> realPart(const DenseMatrix<cplx>& A)
{
    DenseMatrix<double> R(A.rows(), A.cols());
    for (std::size_t k = 0; k < A.data().size(); k++) R.data()[k] = A.data()[k].real();
    return R;
}

DenseMatrix<double> imagPart(const DenseMatrix<cplx>& A)
{
    DenseMatrix<double> R(A.rows(), A.cols());
    for (std::size_t k = 0; k < A.data().size(); k++) R.data()[k] = A.data()[k].imag();
    return R;
}

/*------------------------------------------------------------------------------
 *         LU with partial pivoting
 *----------------------------------------------------------------------------*/
template <typename T>
DenseLU<T>::DenseLU(DenseMatrix<T> A) : lu_(std::move(A))
{
    const Index n = lu_.rows();
    if (lu_.cols() != n) throw DimensionError("LU requires a square matrix");
    perm_.resize(n);
    std::iota(perm_.begin(), perm_.end(), Index{0});

    for (Index k = 0; k < n; k++) {
        Index p = k;
        double best = std::abs(lu_(k, k));
        for (Index i = k + 1; i < n; i++) {
            double v = std::abs(lu_(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (best == 0.0) throw SingularMatrixError("dense LU: zero pivot", k);
        if (p != k) {
            std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(p).begin());
            std::swap(perm_[k], perm_[p]);
        }
        const T pivot = lu_(k, k);
        auto rk = lu_.row(k);
        for (Index i = k + 1; i < n; i++) {
            auto ri = lu_.row(i);
            const T l = ri[k] / pivot;
            ri[k] = l;
            if (l == T{}) continue;
            for (Index j = k + 1; j < n; j++) ri[j] -= l * rk[j];
        }
    }
}

template <typename T>
template <typename U>
std::vector<promote_t<T, U>> DenseLU<T>::solve(std::span<const U> b) const
{
    using R = promote_t<T, U>;
    const Index n = size();
    if (static_cast<Index>(b.size()) != n) throw DimensionError("LU solve: size mismatch");
    std::vector<R> x(n);
    for (Index i = 0; i < n; i++) x[i] = R(b[perm_[i]]);
    for (Index i = 0; i < n; i++) {
        auto ri = lu_.row(i);
        R s = x[i];
        for (Index j = 0; j < i; j++) s -= R(ri[j]) * x[j];
        x[i] = s;
    }
    for (Index i = n - 1; i >= 0; i--) {
        auto ri = lu_.row(i);
        R s = x[i];
        for (Index j = i + 1; j < n; j++) s -= R(ri[j]) * x[j];
        x[i] = s / R(ri[i]);
    }
    return x;
}

template <typename T>
DenseMatrix<T> DenseLU<T>::solve(const DenseMatrix<T>& B) const
{
    const Index n = size();
    if (B.rows() != n) throw DimensionError("LU solve: size mismatch");
    // Work on the transpose so that each right-hand side is contiguous.
    DenseMatrix<T> X = B.transpose();
    for (Index c = 0; c < X.rows(); c++) {
        auto col = X.row(c);
        std::vector<T> x(n);
        for (Index i = 0; i < n; i++) x[i] = col[perm_[i]];
        for (Index i = 0; i < n; i++) {
            auto ri = lu_.row(i);
            T s = x[i];
            for (Index j = 0; j < i; j++) s -= ri[j] * x[j];
            x[i] = s;
        }
        for (Index i = n - 1; i >= 0; i--) {
            auto ri = lu_.row(i);
            T s = x[i];
            for (Index j = i + 1; j < n; j++) s -= ri[j] * x[j];
            x[i] = s / ri[i];
        }
        std::copy(x.begin(), x.end(), col.begin());
    }
    return X.transpose();
}

template <typename T>
DenseMatrix<T> DenseLU<T>::inverse() const
{
    return solve(DenseMatrix<T>::identity(size()));
}

/*------------------------------------------------------------------------------
 *         Symmetric eigenvalue problem (Householder + implicit QL)
 *----------------------------------------------------------------------------*/
namespace {

// Householder reduction of the symmetric matrix held in z to tridiagonal form.
// On exit d holds the diagonal, e the subdiagonal in e[1..n-1], and z the
// accumulated orthogonal transformation.
void tred2(DenseMatrix<double>& z, std::vector<double>& d, std::vector<double>& e, bool vectors)
{
    const Index n = z.rows();
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    for (Index i = n - 1; i > 0; i--) {
        const Index l = i - 1;
        double h = 0.0;
        if (l > 0) {
            double scale = 0.0;
            for (Index k = 0; k <= l; k++) scale += std::abs(z(i, k));
            if (scale == 0.0) {
                e[i] = z(i, l);
            } else {
                for (Index k = 0; k <= l; k++) {
                    z(i, k) /= scale;
                    h += z(i, k) * z(i, k);
                }
                double f = z(i, l);
                double g = (f >= 0.0 ? -std::sqrt(h) : std::sqrt(h));
                e[i] = scale * g;
                h -= f * g;
                z(i, l) = f - g;
                f = 0.0;
                for (Index j = 0; j <= l; j++) {
                    if (vectors) z(j, i) = z(i, j) / h;
                    g = 0.0;
                    for (Index k = 0; k <= j; k++) g += z(j, k) * z(i, k);
                    for (Index k = j + 1; k <= l; k++) g += z(k, j) * z(i, k);
                    e[j] = g / h;
                    f += e[j] * z(i, j);
                }
                const double hh = f / (h + h);
                for (Index j = 0; j <= l; j++) {
                    f = z(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (Index k = 0; k <= j; k++) z(j, k) -= (f * e[k] + g * z(i, k));
                }
            }
        } else {
            e[i] = z(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (Index i = 0; i < n; i++) {
        if (vectors) {
            if (d[i] != 0.0) {
                for (Index j = 0; j < i; j++) {
                    double g = 0.0;
                    for (Index k = 0; k < i; k++) g += z(i, k) * z(k, j);
                    for (Index k = 0; k < i; k++) z(k, j) -= g * z(k, i);
                }
            }
            d[i] = z(i, i);
            z(i, i) = 1.0;
            for (Index j = 0; j < i; j++) z(j, i) = z(i, j) = 0.0;
        } else {
            d[i] = z(i, i);
        }
    }
}

// Implicit-shift QL on the tridiagonal (d, e) with e[1..n-1] the subdiagonal.
void tqli(std::vector<double>& d, std::vector<double>& e, DenseMatrix<double>* z)
{
    const Index n = static_cast<Index>(d.size());
    for (Index i = 1; i < n; i++) e[i - 1] = e[i];
    if (n > 0) e[n - 1] = 0.0;
    for (Index l = 0; l < n; l++) {
        int iter = 0;
        Index m;
        do {
            for (m = l; m < n - 1; m++) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m != l) {
                if (++iter == 60) throw Error("tridiagonal QL: no convergence");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                Index i;
                for (i = m - 1; i >= l; i--) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    e[i + 1] = (r = std::hypot(f, g));
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    d[i + 1] = g + (p = s * r);
                    g = c * r - b;
                    if (z) {
                        for (Index k = 0; k < z->rows(); k++) {
                            f = (*z)(k, i + 1);
                            (*z)(k, i + 1) = s * (*z)(k, i) + c * f;
                            (*z)(k, i) = c * (*z)(k, i) - s * f;
                        }
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

SymmetricEigen sortEigen(std::vector<double> d, DenseMatrix<double> z, bool vectors)
{
    const Index n = static_cast<Index>(d.size());
    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) { return d[a] < d[b]; });
    SymmetricEigen out;
    out.values.resize(n);
    for (Index k = 0; k < n; k++) out.values[k] = d[order[k]];
    if (vectors) {
        out.vectors = DenseMatrix<double>(n, n);
        for (Index k = 0; k < n; k++)
            for (Index i = 0; i < n; i++) out.vectors(i, k) = z(i, order[k]);
    }
    return out;
}

}  // namespace

SymmetricEigen symmetricEigen(const DenseMatrix<double>& A, bool want_vectors)
{
    if (A.rows() != A.cols()) throw DimensionError("symmetricEigen: matrix not square");
    DenseMatrix<double> z = A;
    std::vector<double> d, e;
    tred2(z, d, e, want_vectors);
    tqli(d, e, want_vectors ? &z : nullptr);
    return sortEigen(std::move(d), std::move(z), want_vectors);
}

SymmetricEigen tridiagonalEigen(std::vector<double> diag, std::vector<double> sub, bool want_vectors)
{
    const Index n = static_cast<Index>(diag.size());
    if (static_cast<Index>(sub.size()) + 1 != n && !(n == 0 && sub.empty()))
        throw DimensionError("tridiagonalEigen: subdiagonal length must be n-1");
    std::vector<double> e(n, 0.0);
    for (Index i = 1; i < n; i++) e[i] = sub[i - 1];
    DenseMatrix<double> z;
    if (want_vectors) z = DenseMatrix<double>::identity(n);
    tqli(diag, e, want_vectors ? &z : nullptr);
    return sortEigen(std::move(diag), std::move(z), want_vectors);
}

/*------------------------------------------------------------------------------
 *         General eigenvalues (Hessenberg + complex shifted QR)
 *----------------------------------------------------------------------------*/
std::vector<cplx> generalEigenvalues(const DenseMatrix<double>& A)
{
    const Index n = A.rows();
    if (A.cols() != n) throw DimensionError("generalEigenvalues: matrix not square");
    DenseMatrix<cplx> H = toComplex(A);

    // Householder reduction to upper Hessenberg form.
    for (Index k = 0; k + 2 < n + 0 && k < n - 2; k++) {
        double alpha = 0.0;
        for (Index i = k + 1; i < n; i++) alpha += std::norm(H(i, k));
        alpha = std::sqrt(alpha);
        if (alpha == 0.0) continue;
        std::vector<cplx> v(n, 0.0);
        const cplx x0 = H(k + 1, k);
        const cplx phase = std::abs(x0) == 0.0 ? cplx(1.0) : x0 / std::abs(x0);
        v[k + 1] = x0 + phase * alpha;
        for (Index i = k + 2; i < n; i++) v[i] = H(i, k);
        double vn = 0.0;
        for (Index i = k + 1; i < n; i++) vn += std::norm(v[i]);
        if (vn == 0.0) continue;
        // H <- (I - 2vv^H/vn) H (I - 2vv^H/vn)
        for (Index j = 0; j < n; j++) {
            cplx s = 0.0;
            for (Index i = k + 1; i < n; i++) s += std::conj(v[i]) * H(i, j);
            s *= 2.0 / vn;
            for (Index i = k + 1; i < n; i++) H(i, j) -= v[i] * s;
        }
        for (Index i = 0; i < n; i++) {
            cplx s = 0.0;
            for (Index j = k + 1; j < n; j++) s += H(i, j) * v[j];
            s *= 2.0 / vn;
            for (Index j = k + 1; j < n; j++) H(i, j) -= s * std::conj(v[j]);
        }
    }

    std::vector<cplx> eig(n);
    const double eps = std::numeric_limits<double>::epsilon();
    Index hi = n - 1;
    int iter = 0;
    while (hi >= 0) {
        if (hi == 0) {
            eig[0] = H(0, 0);
            break;
        }
        // Look for a negligible subdiagonal entry.
        Index lo = hi;
        while (lo > 0) {
            const double s = std::abs(H(lo, lo)) + std::abs(H(lo - 1, lo - 1));
            if (std::abs(H(lo, lo - 1)) <= eps * (s == 0.0 ? 1.0 : s)) break;
            lo--;
        }
        if (lo == hi) {
            eig[hi] = H(hi, hi);
            hi--;
            iter = 0;
            continue;
        }
        if (++iter > 100 * n) throw Error("generalEigenvalues: QR iteration did not converge");

        // Wilkinson shift from the trailing 2x2 block, exceptional shift now and then.
        const cplx a = H(hi - 1, hi - 1), b = H(hi - 1, hi), c = H(hi, hi - 1), d = H(hi, hi);
        const cplx tr = a + d, det = a * d - b * c;
        const cplx disc = std::sqrt(tr * tr - 4.0 * det);
        const cplx l1 = (tr + disc) / 2.0, l2 = (tr - disc) / 2.0;
        cplx mu = std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
        if (iter % 11 == 0) mu = d + cplx(std::abs(H(hi, hi - 1)), 0.0);

        // One QR step on the active window [lo, hi] via Givens rotations.
        for (Index i = lo; i <= hi; i++) H(i, i) -= mu;
        std::vector<std::pair<double, cplx>> rot(hi - lo);
        for (Index k = lo; k < hi; k++) {
            const cplx x = H(k, k), y = H(k + 1, k);
            const double r = std::hypot(std::abs(x), std::abs(y));
            double cs = 1.0;
            cplx sn = 0.0;
            if (r != 0.0) {
                cs = std::abs(x) / r;
                const cplx ph = std::abs(x) == 0.0 ? cplx(1.0) : x / std::abs(x);
                sn = ph * std::conj(y) / r;
            }
            rot[k - lo] = {cs, sn};
            for (Index j = k; j < n; j++) {
                const cplx t1 = H(k, j), t2 = H(k + 1, j);
                H(k, j) = cs * t1 + sn * t2;
                H(k + 1, j) = -std::conj(sn) * t1 + cs * t2;
            }
        }
        for (Index k = lo; k < hi; k++) {
            const auto [cs, sn] = rot[k - lo];
            for (Index i = 0; i <= std::min(k + 2, hi); i++) {
                const cplx t1 = H(i, k), t2 = H(i, k + 1);
                H(i, k) = cs * t1 + std::conj(sn) * t2;
                H(i, k + 1) = -sn * t1 + cs * t2;
            }
        }
        for (Index i = lo; i <= hi; i++) H(i, i) += mu;
    }
    return eig;
}

bool isPositiveDefinite(const DenseMatrix<double>& A)
{
    const Index n = A.rows();
    if (A.cols() != n) throw DimensionError("isPositiveDefinite: matrix not square");
    DenseMatrix<double> L(n, n);
    for (Index j = 0; j < n; j++) {
        double s = A(j, j);
        for (Index k = 0; k < j; k++) s -= L(j, k) * L(j, k);
        if (!(s > 0.0)) return false;
        L(j, j) = std::sqrt(s);
        for (Index i = j + 1; i < n; i++) {
            double t = A(i, j);
            for (Index k = 0; k < j; k++) t -= L(i, k) * L(j, k);
            L(i, j) = t / L(j, j);
        }
    }
    return true;
}

std::vector<double> singularValues(const DenseMatrix<double>& A)
{
    DenseMatrix<double> AtA = matmul(A.transpose(), A);
    auto eig = symmetricEigen(AtA, false);
    std::vector<double> s(eig.values.rbegin(), eig.values.rend());
    for (auto& x : s) x = std::sqrt(std::max(x, 0.0));
    return s;
}

template class DenseMatrix<double>;
template class DenseMatrix<cplx>;
template class DenseLU<double>;
template class DenseLU<cplx>;
template DenseMatrix<double> matmul(const DenseMatrix<double>&, const DenseMatrix<double>&);
template DenseMatrix<cplx> matmul(const DenseMatrix<cplx>&, const DenseMatrix<cplx>&);
template std::vector<double> matvec(const DenseMatrix<double>&, std::span<const double>);
template std::vector<cplx> matvec(const DenseMatrix<double>&, std::span<const cplx>);
template std::vector<cplx> matvec(const DenseMatrix<cplx>&, std::span<const double>);
template std::vector<cplx> matvec(const DenseMatrix<cplx>&, std::span<const cplx>);
template std::vector<double> DenseLU<double>::solve(std::span<const double>) const;
template std::vector<cplx> DenseLU<double>::solve(std::span<const cplx>) const;
template std::vector<cplx> DenseLU<cplx>::solve(std::span<const double>) const;
template std::vector<cplx> DenseLU<cplx>::solve(std::span<const cplx>) const;

}  // namespace mfu
