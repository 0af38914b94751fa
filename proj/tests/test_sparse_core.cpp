#include <doctest.h>

#include <cfloat>
#include <sstream>

#include "mfu/banded.h"
#include "mfu/mmio.h"
#include "mfu/problems.h"
#include "mfu/sparse_ops.h"
#include "oracles.h"

using namespace mfu;

namespace {

CsrMatrix<double> randomSparse(Index n, double density, std::uint64_t seed)
{
    auto rng = seededRandom(seed);
    std::vector<Triplet<double>> t;
    for (Index i = 0; i < n; i++)
        for (Index j = 0; j < n; j++)
            if (rng.uniform() < density) t.push_back({i, j, 2.0 * rng.uniform() - 1.0});
    return CsrMatrix<double>::fromTriplets(n, n, t);
}

}  // namespace

TEST_CASE("csr structure invariants")
{
    auto A = CsrMatrix<double>::fromTriplets(3, 3, {{2, 0, 1.0}, {0, 2, 2.0}, {0, 1, 3.0}, {0, 2, 4.0}});
    CHECK(A.rowStarts().front() == 0);
    CHECK(A.rowStarts().back() == A.nnz());
    CHECK(A.nnz() == 3);  // duplicates summed
    CHECK(A.at(0, 2) == 6.0);
    CHECK(A.colIndices()[0] == 1);
    CHECK(A.colIndices()[1] == 2);
    CHECK_THROWS_AS(CsrMatrix<double>(2, 2, {0, 2, 2}, {1, 0}, {1.0, 1.0}), Error);
}

TEST_CASE("matvec examples")
{
    auto I = CsrMatrix<double>::identity(3);
    std::vector<double> x{1, 2, 3};
    CHECK(matvec(I, std::span<const double>(x)) == x);

    std::vector<double> d{2, 3}, ones{1, 1};
    auto D = CsrMatrix<double>::diagonal(d);
    CHECK(matvec(D, std::span<const double>(ones)) == std::vector<double>{2, 3});

    auto A = randomSparse(8, 0.4, 11);
    std::vector<double> v{0.3, -1, 2, 0.5, 0.25, -0.75, 1.5, 4};
    auto y = matvec(A, std::span<const double>(v));
    auto ref = oracle::mulv(oracle::fromCsr(A), v);
    for (int i = 0; i < 8; i++) CHECK(std::abs(y[i] - ref[i]) <= 1e-14);

    std::vector<double> bad{1, 2};
    CHECK_THROWS_AS(matvec(A, std::span<const double>(bad)), DimensionError);
}

TEST_CASE("matvec promotes real times complex")
{
    auto A = randomSparse(6, 0.5, 3);
    std::vector<cplx> x(6, cplx(1.0, 2.0));
    auto y = matvec(A, std::span<const cplx>(x));
    auto ref = oracle::mulv(oracle::fromCsr(toComplex(A)), x);
    CHECK(oracle::relDiff(y, ref) <= 1e-15);
}

TEST_CASE("bandExtract")
{
    auto I = CsrMatrix<double>::identity(4);
    CHECK(bandExtract(I, 0).toDense().data() == I.toDense().data());

    std::vector<Triplet<double>> t;
    for (Index i = 0; i < 6; i++) {
        t.push_back({i, i, 4.0});
        if (i > 0) t.push_back({i, i - 1, -1.0});
        if (i < 5) t.push_back({i, i + 1, -2.0});
    }
    auto T = CsrMatrix<double>::fromTriplets(6, 6, t);
    CHECK(bandExtract(T, 1).toDense().data() == T.toDense().data());

    auto E = genExpDecay(5, 0.5, 0.5);
    auto g0 = bandExtract(E, 0).toDense();
    CHECK(g0.data() == DenseMatrix<double>::identity(5).data());

    CHECK_THROWS_AS(bandExtract(E, -1), DomainError);
    CHECK_THROWS_AS(bandExtract(E, 5), DomainError);
}

TEST_CASE("bandExtract idempotent and full band is identity map")
{
    auto A = randomSparse(12, 0.5, 5);
    for (Index m : {0, 1, 3, 7}) {
        auto once = bandExtract(A, m);
        auto twice = bandExtract(once, m);
        CHECK(once.toDense().data() == twice.toDense().data());
    }
    CHECK(bandExtract(A, 11).toDense().data() == A.toDense().data());
}

TEST_CASE("bandedSolve examples")
{
    BandedMatrix<double> M(2, 0, 0);
    M.set(0, 0, 2.0);
    M.set(1, 1, 4.0);
    std::vector<double> b{2, 4};
    auto x = bandedSolve(M, std::span<const double>(b));
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(1.0));

    BandedMatrix<cplx> Mc(2, 0, 0);
    Mc.set(0, 0, cplx(0, 1));
    Mc.set(1, 1, cplx(0, 2));
    std::vector<cplx> bc{cplx(0, 1), cplx(0, 2)};
    auto xc = bandedSolve(Mc, std::span<const cplx>(bc));
    CHECK(std::abs(xc[0] - 1.0) <= 1e-15);
    CHECK(std::abs(xc[1] - 1.0) <= 1e-15);

    auto rng = seededRandom(9);
    BandedMatrix<cplx> T(10, 1, 1);
    for (Index i = 0; i < 10; i++)
        for (Index j = std::max<Index>(0, i - 1); j <= std::min<Index>(9, i + 1); j++)
            T.set(i, j, cplx(rng.uniform() - 0.5, rng.uniform() - 0.5));
    std::vector<cplx> rhs(10);
    for (auto& r : rhs) r = cplx(rng.uniform(), rng.uniform());
    auto sol = bandedSolve(T, std::span<const cplx>(rhs));
    auto ref = oracle::solve(oracle::fromDense(T.toDense()), rhs);
    CHECK(oracle::relDiff(sol, ref) <= 1e-12);
}

TEST_CASE("bandedSolve reports the singular pivot")
{
    BandedMatrix<double> M(3, 1, 1);
    M.set(0, 0, 1.0);
    M.set(1, 1, 0.0);
    M.set(2, 2, 1.0);
    std::vector<double> b{1, 1, 1};
    try {
        bandedSolve(M, std::span<const double>(b));
        FAIL("expected SingularMatrixError");
    } catch (const SingularMatrixError& e) {
        CHECK(e.index == 1);
    }
}

TEST_CASE("bandedSolve residual bound on random banded systems")
{
    auto rng = seededRandom(2024);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; trial++) {
        const Index n = 1 + static_cast<Index>(rng.below(200));
        const Index kl = std::min<Index>(n - 1, static_cast<Index>(rng.below(6)));
        const Index ku = std::min<Index>(n - 1, static_cast<Index>(rng.below(6)));
        BandedMatrix<double> M(n, kl, ku);
        for (Index i = 0; i < n; i++)
            for (Index j = std::max<Index>(0, i - kl); j <= std::min(n - 1, i + ku); j++)
                M.set(i, j, 2.0 * rng.uniform() - 1.0);
        std::vector<double> b(n);
        for (auto& v : b) v = rng.uniform();
        std::vector<double> x;
        try {
            x = bandedSolve(M, std::span<const double>(b));
        } catch (const SingularMatrixError&) {
            continue;
        }
        auto r = M.multiply(std::span<const double>(x));
        double res = 0.0, xn = 0.0;
        for (Index i = 0; i < n; i++) {
            res = std::max(res, std::abs(r[i] - b[i]));
            xn = std::max(xn, std::abs(x[i]));
        }
        worst = std::max(worst, res / (n * DBL_EPSILON * M.infNorm() * xn));
    }
    CHECK(worst <= 100.0);
}

TEST_CASE("matrix market reading")
{
    std::istringstream id("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n2 2 1\n");
    auto I = std::get<CsrMatrix<double>>(readMatrixMarket(id));
    CHECK(I.nnz() == 2);

    std::istringstream sym("%%MatrixMarket matrix coordinate real symmetric\n% c\n2 2 3\n1 1 2\n2 1 1\n2 2 2\n");
    auto S = std::get<CsrMatrix<double>>(readMatrixMarket(sym));
    CHECK(S.nnz() == 4);
    CHECK(S.at(0, 1) == 1.0);
    CHECK(S.at(1, 0) == 1.0);

    std::istringstream dup("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.5\n1 1 2\n");
    CHECK(std::get<CsrMatrix<double>>(readMatrixMarket(dup)).at(0, 0) == 3.5);

    std::istringstream cx("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 -2\n");
    CHECK(std::get<CsrMatrix<cplx>>(readMatrixMarket(cx)).at(0, 0) == cplx(1, -2));
}

TEST_CASE("matrix market errors")
{
    std::istringstream hdr("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n");
    CHECK_THROWS_AS(readMatrixMarket(hdr), FormatError);
    std::istringstream pat("%%MatrixMarket matrix coordinate pattern general\n2 2 1\n1 1\n");
    CHECK_THROWS_AS(readMatrixMarket(pat), FormatError);
    std::istringstream range("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n");
    CHECK_THROWS_AS(readMatrixMarket(range), FormatError);
    std::istringstream junk("hello\n");
    CHECK_THROWS_AS(readMatrixMarket(junk), FormatError);
}

TEST_CASE("matrix market round trip is bit exact")
{
    auto A = randomSparse(50, 0.2, 77);
    std::stringstream s1;
    writeMatrixMarket(A, s1);
    auto B = std::get<CsrMatrix<double>>(readMatrixMarket(s1));
    CHECK(B.values() == A.values());
    CHECK(B.colIndices() == A.colIndices());
    std::stringstream s2;
    writeMatrixMarket(B, s2);
    auto C = std::get<CsrMatrix<double>>(readMatrixMarket(s2));
    CHECK(C.values() == B.values());

    std::vector<double> x(50, 1.0);
    auto ya = matvec(A, std::span<const double>(x));
    auto yc = matvec(C, std::span<const double>(x));
    CHECK(oracle::relDiff(yc, ya) <= 1e-15);

    CsrMatrix<cplx> Z = toComplex(A);
    std::stringstream s3;
    writeMatrixMarket(Z, s3);
    CHECK(std::get<CsrMatrix<cplx>>(readMatrixMarket(s3)).values() == Z.values());
}

TEST_CASE("fillIn formula")
{
    auto I = CsrMatrix<double>::identity(100);
    CHECK(fillIn(I, I, 100) == doctest::Approx(0.01));

    std::vector<Triplet<double>> t;
    for (Index i = 0; i < 10; i++)
        for (Index j = i; j < 10; j++) t.push_back({i, j, 1.0});
    auto U = CsrMatrix<double>::fromTriplets(10, 10, t);
    CHECK(fillIn(U, U, 10) == doctest::Approx(1.0));
}

TEST_CASE("transpose and adjoint")
{
    auto A = randomSparse(7, 0.4, 21);
    auto At = transpose(A);
    for (Index i = 0; i < 7; i++)
        for (Index j = 0; j < 7; j++) CHECK(At.at(j, i) == A.at(i, j));
    CsrMatrix<cplx> Z = toComplex(A);
    auto Zh = adjoint(Z);
    CHECK(Zh.at(0, 0) == std::conj(Z.at(0, 0)));
}

TEST_CASE("dense cap guard")
{
    const Index old = denseCap();
    setDenseCap(10);
    CHECK_THROWS_AS(DenseMatrix<double>(11, 11), Error);
    setDenseCap(old);
    CHECK(denseCap() == old);
}
