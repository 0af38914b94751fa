#include <doctest.h>

#include <numbers>

#include "mfu/dense_fun.h"
#include "mfu/factorizations.h"
#include "mfu/krylov.h"
#include "mfu/matfun.h"
#include "mfu/problems.h"
#include "mfu/rational.h"
#include "mfu/shifted_update.h"
#include "mfu/sparse_ops.h"
#include "oracles.h"

using namespace mfu;

namespace {

CsrMatrix<double> randomSparse(Index n, double density, std::uint64_t seed, bool symmetric = false)
{
    auto rng = seededRandom(seed);
    std::vector<Triplet<double>> t;
    for (Index i = 0; i < n; i++)
        for (Index j = symmetric ? i : 0; j < n; j++)
            if (i == j || rng.uniform() < density) {
                const double v = 2.0 * rng.uniform() - 1.0;
                t.push_back({i, j, v});
                if (symmetric && i != j) t.push_back({j, i, v});
            }
    return CsrMatrix<double>::fromTriplets(n, n, t);
}

template <typename T>
double arnoldiRelationResidual(const CsrMatrix<T>& A, const ArnoldiDecomposition<T>& d)
{
    // ||A V_m - V_{m+1} H||_F
    double s = 0.0;
    for (Index j = 0; j < d.m; j++) {
        auto Av = matvec(A, std::span<const T>(d.V[j]));
        for (Index i = 0; i <= std::min<Index>(j + 1, static_cast<Index>(d.V.size()) - 1); i++)
            for (Index k = 0; k < A.rows(); k++) Av[k] -= d.H(i, j) * d.V[i][k];
        for (auto& x : Av) s += std::norm(x);
    }
    return std::sqrt(s);
}

template <typename T>
double orthogonalityDefect(const ArnoldiDecomposition<T>& d)
{
    double s = 0.0;
    for (std::size_t i = 0; i < d.V.size(); i++)
        for (std::size_t j = 0; j < d.V.size(); j++) {
            T ip{};
            for (std::size_t k = 0; k < d.V[i].size(); k++) ip += conj_if(d.V[i][k]) * d.V[j][k];
            s += std::norm(ip - (i == j ? T{1} : T{}));
        }
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("cg on the identity")
{
    auto op = makeOperator(CsrMatrix<double>::identity(5));
    std::vector<double> b{1, 2, 3, 4, 5};
    auto [x, st] = cg(op, std::span<const double>(b), 1e-12, 10);
    CHECK(st.converged);
    CHECK(st.iterations <= 1.0);
    for (int i = 0; i < 5; i++) CHECK(x[i] == doctest::Approx(b[i]));
}

TEST_CASE("cg finite termination on a 2 x 2 system")
{
    std::vector<double> d{2, 3};
    auto op = makeOperator(CsrMatrix<double>::diagonal(d));
    std::vector<double> b{2, 3};
    auto [x, st] = cg(op, std::span<const double>(b), 1e-14, 10);
    CHECK(st.iterations <= 2.0);
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("cg on the polynomial decay matrix")
{
    auto A = genPolyDecay(1000);
    auto op = makeOperator(A);
    std::vector<double> b(1000, 1.0);
    auto [x, st] = cg(op, std::span<const double>(b), 1e-9, 2000);
    CHECK(st.converged);
    CHECK(st.true_relative_residual <= 1e-8);
    // baseline from the first verified run
    CHECK(st.iterations == doctest::Approx(53.0).epsilon(0.1));
    MESSAGE("cg iterations on the polynomial decay matrix: " << st.iterations);
}

TEST_CASE("bicgstab on the identity")
{
    auto op = makeOperator(CsrMatrix<double>::identity(4));
    std::vector<double> b{1, -1, 2, 0.5};
    auto [x, st] = bicgstab(op, std::span<const double>(b), 1e-12, 10);
    CHECK(st.converged);
    CHECK(st.iterations <= 1.0);
}

TEST_CASE("bicgstab on a complex diagonally dominant system")
{
    auto Ad = oracle::randomDiagDominant(50, 12);
    oracle::Mat<cplx> Ac(50, std::vector<cplx>(50));
    auto rng = seededRandom(13);
    for (Index i = 0; i < 50; i++)
        for (Index j = 0; j < 50; j++) Ac[i][j] = Ad[i][j] == 0.0 ? 0.0 : cplx(Ad[i][j], i == j ? 0.0 : 0.3 * (rng.uniform() - 0.5));
    auto A = oracle::toCsr(Ac);
    std::vector<cplx> b(50);
    for (auto& v : b) v = cplx(rng.uniform(), rng.uniform() - 0.5);
    const double tol = 1e-10;
    auto [x, st] = bicgstab(makeOperator(A), std::span<const cplx>(b), tol, 500);
    CHECK(st.converged);
    CHECK(oracle::relDiff(x, oracle::solve(Ac, b)) <= 10 * tol * 10);
    CHECK(st.true_relative_residual <= 10 * tol);
    // iteration counts move in half steps
    CHECK(std::fmod(st.iterations * 2.0, 1.0) == 0.0);
}

TEST_CASE("converged solves satisfy the true residual bound")
{
    for (std::uint64_t s : {1u, 2u, 3u, 4u}) {
        auto A = oracle::toCsr(oracle::randomDiagDominant(80, s));
        std::vector<double> b(80);
        for (Index i = 0; i < 80; i++) b[i] = std::sin(0.1 * i + s);
        for (double tol : {1e-4, 1e-8}) {
            auto [x, st] = bicgstab(makeOperator(A), std::span<const double>(b), tol, 500);
            REQUIRE(st.converged);
            CHECK(st.true_relative_residual <= 10 * tol);
        }
        auto S = oracle::toCsr(oracle::randomSpd(40, s));
        std::vector<double> c(40, 1.0);
        auto [y, st] = cg(makeOperator(S), std::span<const double>(c), 1e-10, 200);
        REQUIRE(st.converged);
        CHECK(st.true_relative_residual <= 1e-9);
    }
}

TEST_CASE("identity preconditioner leaves iteration counts unchanged")
{
    auto A = genExpDecay(200, 0.3, 0.6);
    std::vector<double> b(200, 1.0);
    auto plain = makeOperator(A);
    auto withId = plain;
    withId.precondition = [](std::span<const double> v) { return std::vector<double>(v.begin(), v.end()); };
    auto [x1, s1] = bicgstab(plain, std::span<const double>(b), 1e-10, 500);
    auto [x2, s2] = bicgstab(withId, std::span<const double>(b), 1e-10, 500);
    CHECK(s1.iterations == s2.iterations);
    CHECK(x1 == x2);
    auto S = genExpDecay(200, 0.8, 0.8);
    auto p = makeOperator(S);
    auto q = p;
    q.precondition = withId.precondition;
    auto [y1, t1] = cg(p, std::span<const double>(b), 1e-10, 500);
    auto [y2, t2] = cg(q, std::span<const double>(b), 1e-10, 500);
    CHECK(t1.iterations == t2.iterations);
}

TEST_CASE("maxit reached returns the iterate without throwing")
{
    auto A = genPolyDecay(300);
    std::vector<double> b(300, 1.0);
    auto [x, st] = cg(makeOperator(A), std::span<const double>(b), 1e-14, 3);
    CHECK_FALSE(st.converged);
    CHECK(x.size() == 300);
}

TEST_CASE("preconditioned shifted solve on the localized matrix")
{
    // AINV factors are bidiagonal here, so g_1 keeps the whole product
    const Index n = 500;
    auto A = genExpDecay(n, 0.2, 0.5);
    auto si = spectralInterval(A);
    auto pfe = contourPFE(FunctionSpec::log(), si.a, si.b, 7);
    SeedConfig cfg;
    cfg.tau = 0.1;
    auto F = std::make_shared<const InverseFactors<double>>(
        std::get<InverseFactors<double>>(seedPreconditioner(A, cfg)));
    auto E = computeCorrection(*F, CorrectionStrategy::product_of_extracts, 1);
    std::vector<cplx> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    double total = 0.0;
    for (Index j = 0; j < pfe.size(); j++) {
        auto op = makeShiftedOperator(A, pfe.poles[j]);
        auto P = std::make_shared<ShiftedApproxInverse<double>>(F, E, pfe.poles[j]);
        op.precondition = [P](std::span<const cplx> x) { return P->apply(x); };
        auto [x, st] = bicgstab(op, std::span<const cplx>(v), 1e-6, 500);
        total += st.iterations;
    }
    const double mean = total / static_cast<double>(pfe.size());
    MESSAGE("mean preconditioned iterations: " << mean);
    CHECK(mean == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("arnoldi on the identity breaks down at once")
{
    auto op = makeOperator(CsrMatrix<double>::identity(6));
    std::vector<double> v{1, 2, 3, 4, 5, 6};
    auto d = arnoldi(op, std::span<const double>(v), 4);
    CHECK(d.breakdown);
    CHECK(d.m == 1);
    CHECK(d.H(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("arnoldi relation and orthogonality")
{
    auto A = randomSparse(100, 0.05, 3);
    std::vector<double> v(100);
    for (Index i = 0; i < 100; i++) v[i] = std::cos(1.0 + i);
    auto d = arnoldi(makeOperator(A), std::span<const double>(v), 20);
    CHECK(d.m == 20);
    CHECK(arnoldiRelationResidual(A, d) <= 1e-12 * A.frobeniusNorm());
    CHECK(orthogonalityDefect(d) <= 1e-12);

    auto Ac = toComplex(A);
    std::vector<cplx> vc(v.begin(), v.end());
    vc[0] = cplx(1.0, 1.0);
    auto dc = arnoldi(makeOperator(Ac), std::span<const cplx>(vc), 15);
    CHECK(arnoldiRelationResidual(Ac, dc) <= 1e-12 * Ac.frobeniusNorm());
    CHECK(orthogonalityDefect(dc) <= 1e-12);
}

TEST_CASE("arnoldi on symmetric input is tridiagonal")
{
    auto A = randomSparse(120, 0.05, 8, true);
    std::vector<double> v(120, 1.0);
    auto d = arnoldi(makeOperator(A), std::span<const double>(v), 30);
    double off = 0.0;
    for (Index i = 0; i < d.H.rows(); i++)
        for (Index j = 0; j < d.H.cols(); j++)
            if (std::abs(i - j) > 1) off += d.H(i, j) * d.H(i, j);
    CHECK(std::sqrt(off) <= 1e-12 * A.frobeniusNorm());
}

TEST_CASE("arnoldi basis is shift invariant")
{
    auto A = randomSparse(60, 0.1, 21);
    std::vector<double> v(60);
    for (Index i = 0; i < 60; i++) v[i] = 1.0 / (1.0 + i);
    auto rng = seededRandom(4);
    const double sigma = 3.0 * rng.uniform() - 1.5;
    std::vector<Triplet<double>> t;
    for (Index i = 0; i < 60; i++) t.push_back({i, i, sigma});
    auto As = add(A, CsrMatrix<double>::fromTriplets(60, 60, t));
    auto d1 = arnoldi(makeOperator(A), std::span<const double>(v), 10);
    auto d2 = arnoldi(makeOperator(As), std::span<const double>(v), 10);
    for (Index j = 0; j < 10; j++) {
        double same = 0.0, flip = 0.0;
        for (Index k = 0; k < 60; k++) {
            same = std::max(same, std::abs(d1.V[j][k] - d2.V[j][k]));
            flip = std::max(flip, std::abs(d1.V[j][k] + d2.V[j][k]));
        }
        CHECK(std::min(same, flip) <= 1e-10);
    }
}

TEST_CASE("krylov exp on the identity")
{
    auto op = makeOperator(CsrMatrix<double>::identity(7));
    std::vector<double> v{1, -2, 3, 0, 5, 1, 1};
    auto [y, st] = krylovFunAction(op, std::span<const double>(v), FunctionSpec::exp());
    CHECK(st.iterations == 1.0);
    for (int i = 0; i < 7; i++) CHECK(y[i] == doctest::Approx(std::numbers::e * v[i]).epsilon(1e-14));
}

TEST_CASE("krylov exp on a negative diagonal")
{
    std::vector<double> d(50), v(50);
    for (Index i = 0; i < 50; i++) {
        d[i] = -static_cast<double>(i + 1);
        v[i] = 1.0 + 0.01 * i;
    }
    auto [y, st] = krylovFunAction(makeOperator(CsrMatrix<double>::diagonal(d)), std::span<const double>(v),
                                   FunctionSpec::exp(), 1e-12, 50);
    CHECK(st.converged);
    for (Index i = 0; i < 50; i++) CHECK(std::abs(y[i] - std::exp(d[i]) * v[i]) <= 1e-10);
}

TEST_CASE("krylov exp on the advection diffusion operator")
{
    auto A = genAdvectionDiffusion2D(10, AdvectionDiffusionCoefficients::standard(), true);
    std::vector<double> v(100, 1.0);
    auto [y, st] = krylovFunAction(makeOperator(A), std::span<const double>(v), FunctionSpec::exp(), 1e-6);
    CHECK(st.converged);
    auto ref = oracle::mulv(oracle::expm(oracle::fromCsr(A)), v);
    const double err = oracle::relDiff(y, ref);
    MESSAGE("Arnoldi relative error " << err << " after " << st.iterations << " steps");
    CHECK(err <= 1e-5);

    // stopping quantity falls by at least 10x between m = 5 and m = 30
    auto [y30, s30] = krylovFunAction(makeOperator(A), std::span<const double>(v), FunctionSpec::exp(), 0.0, 30);
    REQUIRE(s30.residual_history.size() >= 30);
    CHECK(s30.residual_history[29] * 10.0 <= s30.residual_history[4]);
}

TEST_CASE("krylov m_max reached flags non-convergence")
{
    auto A = genAdvectionDiffusion2D(10, AdvectionDiffusionCoefficients::standard(), true);
    std::vector<double> v(100, 1.0);
    auto [y, st] = krylovFunAction(makeOperator(A), std::span<const double>(v), FunctionSpec::exp(), 1e-14, 3);
    CHECK_FALSE(st.converged);
}

TEST_CASE("denseFun kernels")
{
    auto Z = DenseMatrix<double>(3, 3);
    CHECK(denseFun(Z, FunctionSpec::exp()).data() == DenseMatrix<double>::identity(3).data());

    std::vector<double> d{1.0, 2.0};
    auto E = expm(DenseMatrix<double>::diagonal(d));
    CHECK(std::abs(E(0, 0) - std::exp(1.0)) <= 1e-14 * std::exp(1.0));
    CHECK(std::abs(E(1, 1) - std::exp(2.0)) <= 1e-14 * std::exp(2.0));
    CHECK(E(0, 1) == 0.0);

    // nonsymmetric exp against the Taylor oracle
    auto rng = seededRandom(6);
    DenseMatrix<double> N(12, 12);
    for (auto& x : N.data()) x = 2.0 * rng.uniform() - 1.0;
    CHECK(oracle::frobDiff(expm(N), oracle::expm(oracle::fromDense(N))) <=
          1e-12 * oracle::frob(oracle::expm(oracle::fromDense(N))));
}

TEST_CASE("log inverts exp for symmetric B with norm at most one")
{
    auto rng = seededRandom(14);
    for (int trial = 0; trial < 5; trial++) {
        DenseMatrix<double> B(15, 15);
        for (Index i = 0; i < 15; i++)
            for (Index j = 0; j <= i; j++) B(i, j) = B(j, i) = 2.0 * rng.uniform() - 1.0;
        double nrm = 0.0;
        for (double s : singularValues(B)) nrm = std::max(nrm, s);
        B *= 1.0 / nrm;
        auto L = denseFun(denseFun(B, FunctionSpec::exp()), FunctionSpec::log());
        CHECK((L - B).frobeniusNorm() <= 1e-10);
        // the nonsymmetric kernel too
        auto L2 = logm(expm(B));
        CHECK((L2 - B).frobeniusNorm() <= 1e-10);
    }
}

TEST_CASE("log of a matrix with a nonpositive eigenvalue is a domain error")
{
    std::vector<double> d{1.0, -1.0};
    CHECK_THROWS_AS(denseFun(DenseMatrix<double>::diagonal(d), FunctionSpec::log()), DomainError);
}

TEST_CASE("power via exp of log")
{
    auto A = genPolyDecay(20).toDense();
    auto S = powm(A, 0.5);
    auto SS = matmul(S, S);
    CHECK((SS - A).frobeniusNorm() <= 1e-10 * A.frobeniusNorm());
}
