// Test-side reference computations. Deliberately simple and independent of
// the library algorithms: Gauss-Jordan, cyclic Jacobi, Taylor series.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "mfu/csr.h"
#include "mfu/dense.h"
#include "mfu/problems.h"

namespace oracle {

using mfu::cplx;
using mfu::Index;
template <typename T>
using Mat = std::vector<std::vector<T>>;

template <typename T>
Mat<T> fromDense(const mfu::DenseMatrix<T>& A)
{
    Mat<T> M(A.rows(), std::vector<T>(A.cols()));
    for (Index i = 0; i < A.rows(); i++)
        for (Index j = 0; j < A.cols(); j++) M[i][j] = A(i, j);
    return M;
}

template <typename T>
Mat<T> fromCsr(const mfu::CsrMatrix<T>& A)
{
    Mat<T> M(A.rows(), std::vector<T>(A.cols(), T{}));
    for (Index i = 0; i < A.rows(); i++)
        for (Index p = A.rowStarts()[i]; p < A.rowStarts()[i + 1]; p++) M[i][A.colIndices()[p]] += A.values()[p];
    return M;
}

template <typename T>
Mat<T> eye(Index n)
{
    Mat<T> M(n, std::vector<T>(n, T{}));
    for (Index i = 0; i < n; i++) M[i][i] = T{1};
    return M;
}

template <typename T>
Mat<T> mul(const Mat<T>& A, const Mat<T>& B)
{
    const std::size_t n = A.size(), k = B.size(), m = B.empty() ? 0 : B[0].size();
    Mat<T> C(n, std::vector<T>(m, T{}));
    for (std::size_t i = 0; i < n; i++)
        for (std::size_t l = 0; l < k; l++) {
            const T a = A[i][l];
            if (a == T{}) continue;
            for (std::size_t j = 0; j < m; j++) C[i][j] += a * B[l][j];
        }
    return C;
}

template <typename T>
std::vector<T> mulv(const Mat<T>& A, const std::vector<T>& x)
{
    std::vector<T> y(A.size(), T{});
    for (std::size_t i = 0; i < A.size(); i++)
        for (std::size_t j = 0; j < x.size(); j++) y[i] += A[i][j] * x[j];
    return y;
}

template <typename T>
Mat<T> adjoint(const Mat<T>& A)
{
    Mat<T> B(A[0].size(), std::vector<T>(A.size()));
    for (std::size_t i = 0; i < A.size(); i++)
        for (std::size_t j = 0; j < A[0].size(); j++) {
            if constexpr (mfu::is_complex_v<T>)
                B[j][i] = std::conj(A[i][j]);
            else
                B[j][i] = A[i][j];
        }
    return B;
}

// Gauss-Jordan with partial pivoting.
template <typename T>
Mat<T> inverse(Mat<T> A)
{
    const std::size_t n = A.size();
    Mat<T> X = eye<T>(static_cast<Index>(n));
    for (std::size_t k = 0; k < n; k++) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; i++)
            if (std::abs(A[i][k]) > std::abs(A[p][k])) p = i;
        if (std::abs(A[p][k]) == 0.0) throw std::runtime_error("oracle: singular");
        std::swap(A[p], A[k]);
        std::swap(X[p], X[k]);
        const T piv = A[k][k];
        for (std::size_t j = 0; j < n; j++) {
            A[k][j] /= piv;
            X[k][j] /= piv;
        }
        for (std::size_t i = 0; i < n; i++) {
            if (i == k || A[i][k] == T{}) continue;
            const T f = A[i][k];
            for (std::size_t j = 0; j < n; j++) {
                A[i][j] -= f * A[k][j];
                X[i][j] -= f * X[k][j];
            }
        }
    }
    return X;
}

template <typename T>
std::vector<T> solve(const Mat<T>& A, const std::vector<T>& b)
{
    return mulv(inverse(A), b);
}

template <typename T>
double frob(const Mat<T>& A)
{
    double s = 0.0;
    for (const auto& r : A)
        for (const auto& x : r) s += std::norm(x);
    return std::sqrt(s);
}

template <typename T>
double frobDiff(const Mat<T>& A, const Mat<T>& B)
{
    double s = 0.0;
    for (std::size_t i = 0; i < A.size(); i++)
        for (std::size_t j = 0; j < A[i].size(); j++) s += std::norm(A[i][j] - B[i][j]);
    return std::sqrt(s);
}

template <typename T, typename U>
double frobDiff(const mfu::DenseMatrix<T>& A, const Mat<U>& B)
{
    double s = 0.0;
    for (Index i = 0; i < A.rows(); i++)
        for (Index j = 0; j < A.cols(); j++) s += std::norm(cplx(A(i, j)) - cplx(B[i][j]));
    return std::sqrt(s);
}

template <typename T>
double vnorm(const std::vector<T>& x)
{
    double s = 0.0;
    for (const auto& v : x) s += std::norm(v);
    return std::sqrt(s);
}

template <typename T, typename U>
double relDiff(const std::vector<T>& x, const std::vector<U>& y)
{
    double s = 0.0, r = 0.0;
    for (std::size_t i = 0; i < x.size(); i++) {
        s += std::norm(cplx(x[i]) - cplx(y[i]));
        r += std::norm(cplx(y[i]));
    }
    return std::sqrt(s / r);
}

// Cyclic Jacobi eigen-decomposition of a real symmetric matrix.
inline void jacobiEigen(Mat<double> A, std::vector<double>& lambda, Mat<double>& Q)
{
    const std::size_t n = A.size();
    Q = eye<double>(static_cast<Index>(n));
    for (int sweep = 0; sweep < 100; sweep++) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; i++)
            for (std::size_t j = i + 1; j < n; j++) off += A[i][j] * A[i][j];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; p++)
            for (std::size_t q = p + 1; q < n; q++) {
                if (std::abs(A[p][q]) < 1e-300) continue;
                const double theta = (A[q][q] - A[p][p]) / (2.0 * A[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (std::size_t k = 0; k < n; k++) {
                    const double akp = A[k][p], akq = A[k][q];
                    A[k][p] = c * akp - s * akq;
                    A[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; k++) {
                    const double apk = A[p][k], aqk = A[q][k];
                    A[p][k] = c * apk - s * aqk;
                    A[q][k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; k++) {
                    const double qkp = Q[k][p], qkq = Q[k][q];
                    Q[k][p] = c * qkp - s * qkq;
                    Q[k][q] = s * qkp + c * qkq;
                }
            }
    }
    lambda.resize(n);
    for (std::size_t i = 0; i < n; i++) lambda[i] = A[i][i];
}

inline Mat<double> symFun(const Mat<double>& A, const std::function<double(double)>& f)
{
    std::vector<double> lam;
    Mat<double> Q;
    jacobiEigen(A, lam, Q);
    const std::size_t n = A.size();
    Mat<double> F(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; i++)
        for (std::size_t j = 0; j < n; j++) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; k++) s += Q[i][k] * f(lam[k]) * Q[j][k];
            F[i][j] = s;
        }
    return F;
}

inline std::vector<double> symEigenvalues(const Mat<double>& A)
{
    std::vector<double> lam;
    Mat<double> Q;
    jacobiEigen(A, lam, Q);
    std::sort(lam.begin(), lam.end());
    return lam;
}

// exp(A) by Taylor series in long double after scaling by 2^s, then squaring.
inline Mat<double> expm(const Mat<double>& A)
{
    const std::size_t n = A.size();
    long double nrm = 0.0L;
    for (const auto& r : A) {
        long double s = 0.0L;
        for (double x : r) s += std::fabs(x);
        nrm = std::max(nrm, s);
    }
    int sq = 0;
    while (nrm > 0.25L) {
        nrm /= 2.0L;
        sq++;
    }
    const long double scale = std::ldexp(1.0L, -sq);
    Mat<long double> B(n, std::vector<long double>(n));
    for (std::size_t i = 0; i < n; i++)
        for (std::size_t j = 0; j < n; j++) B[i][j] = A[i][j] * scale;
    Mat<long double> E = eye<long double>(static_cast<Index>(n)), term = E;
    for (int k = 1; k <= 30; k++) {
        term = mul(term, B);
        for (auto& r : term)
            for (auto& x : r) x /= k;
        for (std::size_t i = 0; i < n; i++)
            for (std::size_t j = 0; j < n; j++) E[i][j] += term[i][j];
    }
    for (int s = 0; s < sq; s++) E = mul(E, E);
    Mat<double> R(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; i++)
        for (std::size_t j = 0; j < n; j++) R[i][j] = static_cast<double>(E[i][j]);
    return R;
}

// Random matrices, all through the library's seeded stream for determinism.
inline Mat<double> randomDiagDominant(Index n, std::uint64_t seed, double density = 0.3)
{
    auto rng = mfu::seededRandom(seed);
    Mat<double> A(n, std::vector<double>(n, 0.0));
    for (Index i = 0; i < n; i++) {
        double rs = 0.0;
        for (Index j = 0; j < n; j++) {
            if (i == j || rng.uniform() > density) continue;
            A[i][j] = 2.0 * rng.uniform() - 1.0;
            rs += std::abs(A[i][j]);
        }
        A[i][i] = rs + 1.0 + rng.uniform();
    }
    return A;
}

inline Mat<double> randomSpd(Index n, std::uint64_t seed)
{
    auto rng = mfu::seededRandom(seed);
    Mat<double> B(n, std::vector<double>(n));
    for (auto& r : B)
        for (auto& x : r) x = 2.0 * rng.uniform() - 1.0;
    Mat<double> A = mul(adjoint(B), B);
    for (Index i = 0; i < n; i++) A[i][i] += static_cast<double>(n);
    return A;
}

template <typename T>
mfu::CsrMatrix<T> toCsr(const Mat<T>& A)
{
    std::vector<mfu::Triplet<T>> t;
    for (std::size_t i = 0; i < A.size(); i++)
        for (std::size_t j = 0; j < A[i].size(); j++)
            if (A[i][j] != T{}) t.push_back({static_cast<Index>(i), static_cast<Index>(j), A[i][j]});
    return mfu::CsrMatrix<T>::fromTriplets(static_cast<Index>(A.size()), static_cast<Index>(A[0].size()),
                                            std::move(t));
}

}  // namespace oracle
