#include "mfu/dense_fun.h"

#include <cmath>
#include <limits>

namespace mfu {

namespace {

template <typename T>
DenseMatrix<T> addScaledIdentity(DenseMatrix<T> A, T s)
{
    for (Index i = 0; i < A.rows(); i++) A(i, i) += s;
    return A;
}

template <typename T>
void axpy(DenseMatrix<T>& Y, T a, const DenseMatrix<T>& X)
{
    for (std::size_t k = 0; k < Y.data().size(); k++) Y.data()[k] += a * X.data()[k];
}

template <typename T>
bool allFinite(const DenseMatrix<T>& A)
{
    for (const auto& x : A.data())
        if (!std::isfinite(std::abs(x))) return false;
    return true;
}

}  // namespace

template <typename T>
DenseMatrix<T> expm(const DenseMatrix<T>& A)
{
    const Index n = A.rows();
    if (A.cols() != n) throw DimensionError("expm: matrix not square");
    static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                   1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                   670442572800.0,      33522128640.0,       1323241920.0,
                                   40840800.0,          960960.0,            16380.0,
                                   182.0,               1.0};
    constexpr double theta13 = 5.371920351148152;
    const double nrm = A.oneNorm();
    int s = 0;
    if (nrm > theta13) s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
    DenseMatrix<T> X = A;
    if (s > 0) X *= T(std::ldexp(1.0, -s));

    const DenseMatrix<T> I = DenseMatrix<T>::identity(n);
    const DenseMatrix<T> X2 = matmul(X, X);
    const DenseMatrix<T> X4 = matmul(X2, X2);
    const DenseMatrix<T> X6 = matmul(X4, X2);

    DenseMatrix<T> inner = X6 * T(b[13]);
    axpy(inner, T(b[11]), X4);
    axpy(inner, T(b[9]), X2);
    DenseMatrix<T> Uarg = matmul(X6, inner);
    axpy(Uarg, T(b[7]), X6);
    axpy(Uarg, T(b[5]), X4);
    axpy(Uarg, T(b[3]), X2);
    axpy(Uarg, T(b[1]), I);
    const DenseMatrix<T> U = matmul(X, Uarg);

    DenseMatrix<T> innerV = X6 * T(b[12]);
    axpy(innerV, T(b[10]), X4);
    axpy(innerV, T(b[8]), X2);
    DenseMatrix<T> V = matmul(X6, innerV);
    axpy(V, T(b[6]), X6);
    axpy(V, T(b[4]), X4);
    axpy(V, T(b[2]), X2);
    axpy(V, T(b[0]), I);

    DenseMatrix<T> R = DenseLU<T>(V - U).solve(V + U);
    for (int k = 0; k < s; k++) R = matmul(R, R);
    return R;
}

template <typename T>
DenseMatrix<T> sqrtmDenmanBeavers(const DenseMatrix<T>& A)
{
    const Index n = A.rows();
    DenseMatrix<T> Y = A;
    DenseMatrix<T> Z = DenseMatrix<T>::identity(n);
    const double tol = 1e2 * std::numeric_limits<double>::epsilon();
    for (int it = 0; it < 100; it++) {
        const DenseMatrix<T> Yi = DenseLU<T>(Y).inverse();
        const DenseMatrix<T> Zi = DenseLU<T>(Z).inverse();
        DenseMatrix<T> Yn = (Y + Zi) * T(0.5);
        DenseMatrix<T> Zn = (Z + Yi) * T(0.5);
        const double diff = (Yn - Y).frobeniusNorm();
        const double scale = Yn.frobeniusNorm();
        Y = std::move(Yn);
        Z = std::move(Zn);
        if (!allFinite(Y)) throw DomainError("sqrtm: iteration diverged (eigenvalue on the branch cut?)");
        if (diff <= tol * scale) return Y;
    }
    throw DomainError("sqrtm: Denman-Beavers iteration did not converge");
}

template <typename T>
DenseMatrix<T> logm(const DenseMatrix<T>& A)
{
    const Index n = A.rows();
    if (A.cols() != n) throw DimensionError("logm: matrix not square");
    const DenseMatrix<T> I = DenseMatrix<T>::identity(n);
    DenseMatrix<T> X = A;
    int s = 0;
    while ((X - I).oneNorm() > 0.25) {
        if (++s > 64) throw DomainError("logm: too many square roots (eigenvalue on the branch cut?)");
        try {
            X = sqrtmDenmanBeavers(X);
        } catch (const SingularMatrixError&) {
            throw DomainError("logm: singular matrix (eigenvalue at 0)");
        }
    }
    // log(I + B) = sum_j alpha_j (I + beta_j B)^{-1} B, ||B|| <= 1/4.
    const DenseMatrix<T> B = X - I;
    const PartialFractionExpansion p = padeLog(8);
    DenseMatrix<T> L(n, n);
    for (Index j = 0; j < 8; j++) {
        DenseMatrix<T> M = B * T(p.beta[j]);
        M = addScaledIdentity(std::move(M), T(1.0));
        axpy(L, T(p.alpha[j]), DenseLU<T>(M).solve(B));
    }
    L *= T(std::ldexp(1.0, s));
    return L;
}

template <typename T>
DenseMatrix<T> powm(const DenseMatrix<T>& A, double alpha)
{
    return expm(logm(A) * T(alpha));
}

bool isSymmetric(const DenseMatrix<double>& A, double tol)
{
    if (A.rows() != A.cols()) return false;
    const double scale = std::max(1.0, A.maxAbs());
    for (Index i = 0; i < A.rows(); i++)
        for (Index j = i + 1; j < A.cols(); j++)
            if (std::abs(A(i, j) - A(j, i)) > tol * scale) return false;
    return true;
}

DenseMatrix<double> symmetricFun(const DenseMatrix<double>& A, const FunctionSpec& psi)
{
    const SymmetricEigen eig = symmetricEigen(A, true);
    const Index n = A.rows();
    std::vector<double> f(n);
    for (Index k = 0; k < n; k++) {
        const double lam = eig.values[k];
        if (psi.kind != FunctionSpec::Kind::exp && lam <= 0.0)
            throw DomainError("symmetricFun: eigenvalue " + std::to_string(lam) + " on the branch cut of " + psi.name());
        f[k] = psi(cplx(lam, 0.0)).real();
    }
    // Q diag(f) Q^T
    DenseMatrix<double> QF = eig.vectors;
    for (Index i = 0; i < n; i++)
        for (Index k = 0; k < n; k++) QF(i, k) *= f[k];
    return matmul(QF, eig.vectors.transpose());
}

namespace {

template <typename T>
DenseMatrix<T> generalFun(const DenseMatrix<T>& H, const FunctionSpec& psi)
{
    switch (psi.kind) {
        case FunctionSpec::Kind::exp: return expm(H);
        case FunctionSpec::Kind::log: return logm(H);
        case FunctionSpec::Kind::power: return powm(H, psi.alpha);
        case FunctionSpec::Kind::user: break;
    }
    throw DomainError("denseFun: user functions need a symmetric matrix");
}

}  // namespace

DenseMatrix<double> denseFun(const DenseMatrix<double>& H, const FunctionSpec& psi)
{
    if (isSymmetric(H)) return symmetricFun(H, psi);
    return generalFun(H, psi);
}

DenseMatrix<cplx> denseFun(const DenseMatrix<cplx>& H, const FunctionSpec& psi)
{
    bool real = true;
    for (const auto& x : H.data())
        if (x.imag() != 0.0) real = false;
    if (real) return toComplex(denseFun(realPart(H), psi));
    return generalFun(H, psi);
}

template DenseMatrix<double> expm(const DenseMatrix<double>&);
template DenseMatrix<cplx> expm(const DenseMatrix<cplx>&);
template DenseMatrix<double> sqrtmDenmanBeavers(const DenseMatrix<double>&);
template DenseMatrix<cplx> sqrtmDenmanBeavers(const DenseMatrix<cplx>&);
template DenseMatrix<double> logm(const DenseMatrix<double>&);
template DenseMatrix<cplx> logm(const DenseMatrix<cplx>&);
template DenseMatrix<double> powm(const DenseMatrix<double>&, double);
template DenseMatrix<cplx> powm(const DenseMatrix<cplx>&, double);

}  // namespace mfu
