#include "mfu/banded.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace mfu {

template <typename T>
BandedMatrix<T>::BandedMatrix(Index n, Index lower_bw, Index upper_bw) : n_(n), kl_(lower_bw), ku_(upper_bw)
{
    if (n < 0 || lower_bw < 0 || upper_bw < 0) throw DimensionError("banded: negative size or bandwidth");
    if (n > 0 && (lower_bw > n - 1 || upper_bw > n - 1)) throw DimensionError("banded: bandwidth exceeds n-1");
    data_.assign(static_cast<std::size_t>(n * (kl_ + ku_ + 1)), T{});
}

template <typename T>
T BandedMatrix<T>::operator()(Index i, Index j) const
{
    if (!inBand(i, j)) return T{};
    return data_[i * (kl_ + ku_ + 1) + (j - i + kl_)];
}

template <typename T>
T& BandedMatrix<T>::ref(Index i, Index j)
{
    if (i < 0 || j < 0 || i >= n_ || j >= n_ || !inBand(i, j))
        throw DimensionError("banded: (" + std::to_string(i) + "," + std::to_string(j) + ") outside the band");
    return data_[i * (kl_ + ku_ + 1) + (j - i + kl_)];
}

template <typename T>
template <typename U>
std::vector<promote_t<T, U>> BandedMatrix<T>::multiply(std::span<const U> x) const
{
    using R = promote_t<T, U>;
    if (static_cast<Index>(x.size()) != n_) throw DimensionError("banded multiply: size mismatch");
    std::vector<R> y(n_);
    const Index w = kl_ + ku_ + 1;
    for (Index i = 0; i < n_; i++) {
        R s{};
        const Index j0 = std::max<Index>(0, i - kl_), j1 = std::min(n_ - 1, i + ku_);
        for (Index j = j0; j <= j1; j++) s += R(data_[i * w + (j - i + kl_)]) * R(x[j]);
        y[i] = s;
    }
    return y;
}

template <typename T>
DenseMatrix<T> BandedMatrix<T>::toDense() const
{
    DenseMatrix<T> D(n_, n_);
    for (Index i = 0; i < n_; i++)
        for (Index j = std::max<Index>(0, i - kl_); j <= std::min(n_ - 1, i + ku_); j++) D(i, j) = (*this)(i, j);
    return D;
}

template <typename T>
double BandedMatrix<T>::infNorm() const
{
    double best = 0.0;
    for (Index i = 0; i < n_; i++) {
        double s = 0.0;
        for (Index j = std::max<Index>(0, i - kl_); j <= std::min(n_ - 1, i + ku_); j++) s += std::abs((*this)(i, j));
        best = std::max(best, s);
    }
    return best;
}

template <typename T>
template <typename S>
BandedMatrix<promote_t<T, S>> BandedMatrix<T>::axpby(T s, const BandedMatrix<S>& other, promote_t<T, S> t) const
{
    using R = promote_t<T, S>;
    if (other.size() != n_) throw DimensionError("banded axpby: size mismatch");
    BandedMatrix<R> out(n_, std::max(kl_, other.lowerBandwidth()), std::max(ku_, other.upperBandwidth()));
    for (Index i = 0; i < n_; i++) {
        for (Index j = std::max<Index>(0, i - out.lowerBandwidth()); j <= std::min(n_ - 1, i + out.upperBandwidth()); j++)
            out.ref(i, j) = R(s) * R((*this)(i, j)) + t * R(other(i, j));
    }
    return out;
}

BandedMatrix<cplx> toComplex(const BandedMatrix<double>& B)
{
    BandedMatrix<cplx> C(B.size(), B.lowerBandwidth(), B.upperBandwidth());
    for (Index i = 0; i < B.size(); i++)
        for (Index j = std::max<Index>(0, i - B.lowerBandwidth()); j <= std::min(B.size() - 1, i + B.upperBandwidth()); j++)
            C.ref(i, j) = B(i, j);
    return C;
}

/*------------------------------------------------------------------------------
 *         LU
 *----------------------------------------------------------------------------*/
template <typename T>
BandedLU<T>::BandedLU(const BandedMatrix<T>& A)
    : n_(A.size()), kl_(A.lowerBandwidth()), width_(2 * A.lowerBandwidth() + A.upperBandwidth() + 1)
{
    const Index ku = A.upperBandwidth();
    lu_.assign(static_cast<std::size_t>(n_ * width_), T{});
    ipiv_.resize(n_);
    for (Index i = 0; i < n_; i++)
        for (Index j = std::max<Index>(0, i - kl_); j <= std::min(n_ - 1, i + ku); j++) at(i, j) = A(i, j);

    // Row i holds columns up to i+kl+ku after pivoting; stored window is [i-kl, i+kl+ku].
    const Index kuw = kl_ + ku;
    for (Index k = 0; k < n_; k++) {
        const Index last = std::min(n_ - 1, k + kl_);
        Index p = k;
        double best = std::abs(at(k, k));
        for (Index i = k + 1; i <= last; i++) {
            const double v = std::abs(at(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        ipiv_[k] = p;
        if (best == 0.0) throw SingularMatrixError("banded LU: zero pivot at index " + std::to_string(k), k);
        const Index jend = std::min(n_ - 1, k + kuw);
        if (p != k)
            for (Index j = k; j <= jend; j++) std::swap(at(k, j), at(p, j));
        const T pivot = at(k, k);
        for (Index i = k + 1; i <= last; i++) {
            T& lik = at(i, k);
            if (lik == T{}) continue;
            lik /= pivot;
            const T l = lik;
            for (Index j = k + 1; j <= jend; j++) at(i, j) -= l * at(k, j);
        }
    }
}

template <typename T>
template <typename U>
std::vector<promote_t<T, U>> BandedLU<T>::solve(std::span<const U> b) const
{
    using R = promote_t<T, U>;
    if (static_cast<Index>(b.size()) != n_) throw DimensionError("banded solve: size mismatch");
    std::vector<R> x(b.begin(), b.end());
    // Forward: apply the interchange at step k, then eliminate below.
    for (Index k = 0; k < n_; k++) {
        if (ipiv_[k] != k) std::swap(x[k], x[ipiv_[k]]);
        const R xk = x[k];
        if (xk == R{}) continue;
        const Index last = std::min(n_ - 1, k + kl_);
        for (Index i = k + 1; i <= last; i++) x[i] -= R(at(i, k)) * xk;
    }
    const Index kuw = width_ - 1 - kl_;
    for (Index i = n_ - 1; i >= 0; i--) {
        R s = x[i];
        const Index jend = std::min(n_ - 1, i + kuw);
        for (Index j = i + 1; j <= jend; j++) s -= R(at(i, j)) * x[j];
        x[i] = s / R(at(i, i));
    }
    return x;
}

template class BandedMatrix<double>;
template class BandedMatrix<cplx>;
template class BandedLU<double>;
template class BandedLU<cplx>;

template std::vector<double> BandedMatrix<double>::multiply(std::span<const double>) const;
template std::vector<cplx> BandedMatrix<double>::multiply(std::span<const cplx>) const;
template std::vector<cplx> BandedMatrix<cplx>::multiply(std::span<const double>) const;
template std::vector<cplx> BandedMatrix<cplx>::multiply(std::span<const cplx>) const;
template BandedMatrix<double> BandedMatrix<double>::axpby(double, const BandedMatrix<double>&, double) const;
template BandedMatrix<cplx> BandedMatrix<double>::axpby(double, const BandedMatrix<cplx>&, cplx) const;
template BandedMatrix<cplx> BandedMatrix<cplx>::axpby(cplx, const BandedMatrix<double>&, cplx) const;
template BandedMatrix<cplx> BandedMatrix<cplx>::axpby(cplx, const BandedMatrix<cplx>&, cplx) const;
template std::vector<double> BandedLU<double>::solve(std::span<const double>) const;
template std::vector<cplx> BandedLU<double>::solve(std::span<const cplx>) const;
template std::vector<cplx> BandedLU<cplx>::solve(std::span<const double>) const;
template std::vector<cplx> BandedLU<cplx>::solve(std::span<const cplx>) const;

}  // namespace mfu
