#include "mfu/krylov.h"

#include <chrono>
#include <cmath>
#include <limits>

#include "mfu/dense_fun.h"
#include "mfu/sparse_ops.h"

namespace mfu {

namespace {

using Clock = std::chrono::steady_clock;

template <typename T>
T dotc(std::span<const T> x, std::span<const T> y)
{
    T s{};
    for (std::size_t i = 0; i < x.size(); i++) s += conj_if(x[i]) * y[i];
    return s;
}

template <typename T>
std::vector<T> applyPrec(const LinearOperator<T>& op, std::span<const T> v)
{
    if (op.hasPreconditioner()) return op.precondition(v);
    return std::vector<T>(v.begin(), v.end());
}

template <typename T>
double trueResidual(const LinearOperator<T>& op, std::span<const T> b, std::span<const T> x, double bnorm)
{
    std::vector<T> r = op.apply(x);
    for (std::size_t i = 0; i < r.size(); i++) r[i] = b[i] - r[i];
    return norm2<T>(r) / bnorm;
}

}  // namespace

template <typename T>
double norm2(std::span<const T> x)
{
    double s = 0.0;
    for (const auto& v : x) s += std::norm(v);
    return std::sqrt(s);
}

template <typename T>
LinearOperator<T> makeOperator(const CsrMatrix<T>& A)
{
    return makeOperator(std::make_shared<const CsrMatrix<T>>(A));
}

template <typename T>
LinearOperator<T> makeOperator(std::shared_ptr<const CsrMatrix<T>> A)
{
    LinearOperator<T> op;
    op.n = A->rows();
    op.apply = [A](std::span<const T> x) { return matvec(*A, x); };
    return op;
}

LinearOperator<cplx> makeShiftedOperator(const CsrMatrix<double>& A, cplx xi)
{
    return makeShiftedOperator(std::make_shared<const CsrMatrix<double>>(A), xi);
}

LinearOperator<cplx> makeShiftedOperator(std::shared_ptr<const CsrMatrix<double>> A, cplx xi)
{
    LinearOperator<cplx> op;
    op.n = A->rows();
    op.apply = [A, xi](std::span<const cplx> x) {
        std::vector<cplx> y = matvec(*A, x);
        for (std::size_t i = 0; i < y.size(); i++) y[i] = xi * x[i] - y[i];
        return y;
    };
    return op;
}

/*------------------------------------------------------------------------------
 *         CG
 *----------------------------------------------------------------------------*/
template <typename T>
std::pair<std::vector<T>, IterStats> cg(const LinearOperator<T>& op, std::span<const T> b, double tol, Index maxit)
{
    const auto t0 = Clock::now();
    IterStats st;
    st.solver = "cg";
    const Index n = op.n;
    if (static_cast<Index>(b.size()) != n) throw DimensionError("cg: size mismatch");
    std::vector<T> x(n, T{});
    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        st.converged = true;
        return {x, st};
    }
    std::vector<T> r(b.begin(), b.end());
    std::vector<T> z = applyPrec<T>(op, r);
    std::vector<T> p = z;
    T rz = dotc<T>(r, z);
    double res = 1.0;
    st.residual_history.push_back(res);
    for (Index it = 1; it <= maxit; it++) {
        const std::vector<T> q = op.apply(p);
        st.matvec_count++;
        const T pq = dotc<T>(p, q);
        if (pq == T{}) break;
        const T alpha = rz / pq;
        for (Index i = 0; i < n; i++) {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        res = norm2<T>(r) / bnorm;
        st.residual_history.push_back(res);
        st.iterations = static_cast<double>(it);
        if (res <= tol) {
            st.converged = true;
            break;
        }
        z = applyPrec<T>(op, r);
        const T rz_new = dotc<T>(r, z);
        const T beta = rz_new / rz;
        rz = rz_new;
        for (Index i = 0; i < n; i++) p[i] = z[i] + beta * p[i];
    }
    st.final_relative_residual = res;
    st.true_relative_residual = trueResidual<T>(op, b, x, bnorm);
    st.elapsed_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return {x, st};
}

/*------------------------------------------------------------------------------
 *         BiCGSTAB, right preconditioned: A P y = b, x = P y
 *----------------------------------------------------------------------------*/
template <typename T>
std::pair<std::vector<T>, IterStats> bicgstab(const LinearOperator<T>& op, std::span<const T> b, double tol,
                                              Index maxit)
{
    const auto t0 = Clock::now();
    IterStats st;
    st.solver = "bicgstab";
    const Index n = op.n;
    if (static_cast<Index>(b.size()) != n) throw DimensionError("bicgstab: size mismatch");
    std::vector<T> x(n, T{});
    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        st.converged = true;
        return {x, st};
    }
    std::vector<T> r(b.begin(), b.end());
    const std::vector<T> rhat = r;
    std::vector<T> p(n, T{}), v(n, T{}), s(n);
    T rho{1}, alpha{1}, omega{1};
    double res = 1.0;
    st.residual_history.push_back(res);

    for (Index it = 1; it <= maxit; it++) {
        const T rho_new = dotc<T>(rhat, r);
        if (rho_new == T{}) break;
        const T beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for (Index i = 0; i < n; i++) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        const std::vector<T> phat = applyPrec<T>(op, p);
        v = op.apply(phat);
        st.matvec_count++;
        const T rv = dotc<T>(rhat, v);
        if (rv == T{}) break;
        alpha = rho / rv;
        for (Index i = 0; i < n; i++) {
            s[i] = r[i] - alpha * v[i];
            x[i] += alpha * phat[i];
        }
        res = norm2<T>(s) / bnorm;
        st.residual_history.push_back(res);
        st.iterations = static_cast<double>(it) - 0.5;
        if (res <= tol) {
            st.converged = true;
            break;
        }
        const std::vector<T> shat = applyPrec<T>(op, s);
        const std::vector<T> t = op.apply(shat);
        st.matvec_count++;
        const double tt = norm2<T>(t);
        if (tt == 0.0) break;
        omega = dotc<T>(t, s) / T(tt * tt);
        for (Index i = 0; i < n; i++) {
            x[i] += omega * shat[i];
            r[i] = s[i] - omega * t[i];
        }
        res = norm2<T>(r) / bnorm;
        st.residual_history.push_back(res);
        st.iterations = static_cast<double>(it);
        if (res <= tol) {
            st.converged = true;
            break;
        }
        if (omega == T{}) break;
    }
    st.final_relative_residual = res;
    st.true_relative_residual = trueResidual<T>(op, b, x, bnorm);
    st.elapsed_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return {x, st};
}

/*------------------------------------------------------------------------------
 *         Arnoldi
 *----------------------------------------------------------------------------*/
namespace {

// Extends the decomposition by one column. Returns false on breakdown.
template <typename T>
bool arnoldiStep(const LinearOperator<T>& op, std::vector<std::vector<T>>& V, std::vector<std::vector<T>>& Hcols)
{
    const std::size_t j = V.size() - 1;
    std::vector<T> w = op.apply(V[j]);
    const double wnorm0 = norm2<T>(w);
    std::vector<T> h(j + 2, T{});
    for (std::size_t i = 0; i <= j; i++) {
        const T hij = dotc<T>(V[i], w);
        h[i] = hij;
        for (std::size_t k = 0; k < w.size(); k++) w[k] -= hij * V[i][k];
    }
    double wnorm = norm2<T>(w);
    // One reorthogonalization pass when cancellation was severe.
    if (wnorm < 0.7071 * wnorm0) {
        for (std::size_t i = 0; i <= j; i++) {
            const T c = dotc<T>(V[i], w);
            h[i] += c;
            for (std::size_t k = 0; k < w.size(); k++) w[k] -= c * V[i][k];
        }
        wnorm = norm2<T>(w);
    }
    h[j + 1] = T(wnorm);
    Hcols.push_back(h);
    if (wnorm <= 1e-13 * std::max(wnorm0, std::numeric_limits<double>::min())) return false;
    for (auto& x : w) x /= T(wnorm);
    V.push_back(std::move(w));
    return true;
}

template <typename T>
DenseMatrix<T> assembleH(const std::vector<std::vector<T>>& Hcols, Index rows, Index cols)
{
    DenseMatrix<T> H(rows, cols);
    for (Index j = 0; j < cols; j++)
        for (Index i = 0; i < rows && i < static_cast<Index>(Hcols[j].size()); i++) H(i, j) = Hcols[j][i];
    return H;
}

}  // namespace

template <typename T>
ArnoldiDecomposition<T> arnoldi(const LinearOperator<T>& op, std::span<const T> v, Index m)
{
    if (static_cast<Index>(v.size()) != op.n) throw DimensionError("arnoldi: size mismatch");
    if (m < 1 || m > op.n) throw DomainError("arnoldi: need 1 <= m <= n");
    const double beta = norm2(v);
    if (beta == 0.0) throw DomainError("arnoldi: zero starting vector");
    ArnoldiDecomposition<T> out;
    out.V.emplace_back(v.begin(), v.end());
    for (auto& x : out.V[0]) x /= T(beta);
    std::vector<std::vector<T>> Hcols;
    for (Index j = 0; j < m; j++) {
        if (!arnoldiStep(op, out.V, Hcols)) {
            out.breakdown = true;
            break;
        }
    }
    out.m = static_cast<Index>(Hcols.size());
    out.H = assembleH(Hcols, out.m + 1, out.m);
    if (out.breakdown) out.H(out.m, out.m - 1) = T{};
    return out;
}

template <typename T>
std::pair<std::vector<T>, IterStats> krylovFunAction(const LinearOperator<T>& op, std::span<const T> v,
                                                     const FunctionSpec& psi, double gamma_tol, Index m_max)
{
    const auto t0 = Clock::now();
    IterStats st;
    st.solver = "arnoldi";
    const Index n = op.n;
    if (static_cast<Index>(v.size()) != n) throw DimensionError("krylovFunAction: size mismatch");
    const double beta = norm2(v);
    std::vector<T> y(n, T{});
    if (beta == 0.0) {
        st.converged = true;
        return {y, st};
    }
    m_max = std::min(m_max, n);
    std::vector<std::vector<T>> V;
    V.emplace_back(v.begin(), v.end());
    for (auto& x : V[0]) x /= T(beta);
    std::vector<std::vector<T>> Hcols;
    std::vector<T> fe1;
    for (Index m = 1; m <= m_max; m++) {
        const bool ok = arnoldiStep(op, V, Hcols);
        st.matvec_count++;
        const DenseMatrix<T> Hm = assembleH(Hcols, m, m);
        const DenseMatrix<T> F = denseFun(Hm, psi);
        fe1 = F.column(0);
        const double hnext = ok ? std::abs(Hcols.back()[m]) : 0.0;
        const double gamma = hnext * std::abs(fe1[m - 1]);
        st.residual_history.push_back(gamma);
        st.iterations = static_cast<double>(m);
        st.final_relative_residual = gamma;
        if (!ok || gamma < gamma_tol) {
            st.converged = true;
            break;
        }
    }
    const Index m = static_cast<Index>(fe1.size());
    for (Index j = 0; j < m; j++) {
        const T c = T(beta) * fe1[j];
        for (Index i = 0; i < n; i++) y[i] += c * V[j][i];
    }
    st.elapsed_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return {y, st};
}

template double norm2(std::span<const double>);
template double norm2(std::span<const cplx>);
template LinearOperator<double> makeOperator(const CsrMatrix<double>&);
template LinearOperator<cplx> makeOperator(const CsrMatrix<cplx>&);
template LinearOperator<double> makeOperator(std::shared_ptr<const CsrMatrix<double>>);
template LinearOperator<cplx> makeOperator(std::shared_ptr<const CsrMatrix<cplx>>);

#define MFU_KRYLOV(T)                                                                                        \
    template std::pair<std::vector<T>, IterStats> cg(const LinearOperator<T>&, std::span<const T>, double, Index); \
    template std::pair<std::vector<T>, IterStats> bicgstab(const LinearOperator<T>&, std::span<const T>, double,   \
                                                           Index);                                           \
    template ArnoldiDecomposition<T> arnoldi(const LinearOperator<T>&, std::span<const T>, Index);          \
    template std::pair<std::vector<T>, IterStats> krylovFunAction(const LinearOperator<T>&, std::span<const T>, \
                                                                  const FunctionSpec&, double, Index);

MFU_KRYLOV(double)
MFU_KRYLOV(cplx)

#undef MFU_KRYLOV

}  // namespace mfu
