#include "mfu/matfun.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <sstream>

#include "mfu/banded.h"
#include "mfu/dense_fun.h"
#include "mfu/sparse_ops.h"

namespace mfu {

namespace {

using Clock = std::chrono::steady_clock;
using VecApply = std::function<std::vector<cplx>(std::span<const cplx>)>;

double secondsSince(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string poleLabel(Index j, cplx xi)
{
    std::ostringstream os;
    os.precision(6);
    os << "pole " << j + 1 << " (xi = " << xi.real() << (xi.imag() < 0 ? " - " : " + ") << std::abs(xi.imag())
       << "i)";
    return os.str();
}

// Runs f for pole j, re-raising numerical failures with the pole attached.
template <typename F>
auto atPole(Index j, cplx xi, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const SingularMatrixError& e) {
        throw SingularMatrixError(poleLabel(j, xi) + ": " + e.what(), j);
    } catch (const BreakdownError& e) {
        throw BreakdownError(poleLabel(j, xi) + ": " + e.what(), j);
    }
}

CsrMatrix<double> effectiveMatrix(const FunmRequest& req)
{
    if (!req.A.isSquare()) throw DimensionError("funm: matrix not square");
    if (req.pfe.kind == PfeKind::pade_log) {
        return add(req.A, CsrMatrix<double>::identity(req.A.rows()), 1.0, -1.0);
    }
    return req.A;
}

// A pole whose term is the conjugate of its predecessor's (real A and real
// factors only).
bool conjugateOfPrevious(const PartialFractionExpansion& pfe, Index j)
{
    if (j == 0) return false;
    const cplx xi = pfe.poles[j], xp = pfe.poles[j - 1];
    return xi.imag() != 0.0 && xi == std::conj(xp) && pfe.coeffs[j] == std::conj(pfe.coeffs[j - 1]);
}

/*------------------------------------------------------------------------------
 *         Exact resolvent solves
 *----------------------------------------------------------------------------*/
constexpr Index kBandedDirectMax = 64;

class ResolventSolver {
public:
    ResolventSolver(const CsrMatrix<double>& B, cplx xi)
    {
        const Index bw = std::max(B.lowerBandwidth(), B.upperBandwidth());
        const CsrMatrix<cplx> M = shiftedNegation(B, xi);
        if (bw <= kBandedDirectMax) {
            banded_ = std::make_unique<BandedLU<cplx>>(bandExtract(M, std::min(bw, B.rows() - 1)));
        } else {
            if (B.rows() > denseCap())
                throw DomainError("direct: matrix of size " + std::to_string(B.rows()) +
                                  " with wide band exceeds the dense cap");
            dense_ = std::make_unique<DenseLU<cplx>>(M.toDense());
        }
    }

    std::vector<cplx> solve(std::span<const cplx> b) const
    {
        if (banded_) return banded_->solve(b);
        return dense_->solve(b);
    }

private:
    std::unique_ptr<BandedLU<cplx>> banded_;
    std::unique_ptr<DenseLU<cplx>> dense_;
};

/*------------------------------------------------------------------------------
 *         Seed factorization and shifted operators
 *----------------------------------------------------------------------------*/
class Seed {
public:
    Seed(const CsrMatrix<double>& B, const PartialFractionExpansion& pfe, const UpdateConfig& cfg)
    {
        const auto t0 = Clock::now();
        shift_ = selectSeedPole(pfe, cfg.seed_policy, cfg.seed_index);
        const bool real_shift = shift_.imag() == 0.0;
        SeedConfig sc;
        sc.method = cfg.method.value_or(real_shift ? SeedMethod::ainv : SeedMethod::invt);
        sc.tau = cfg.tau;
        sc.tau_L = cfg.tau_L;
        sc.tau_Z = cfg.tau_Z;
        method_ = sc.method == SeedMethod::ainv ? "ainv" : "invt";
        AnyInverseFactors any = seedPreconditioner(B, sc, shift_);
        std::visit(
            [&](auto& F) {
                using T = typename std::decay_t<decltype(F.Z)>::value_type;
                const CorrectionChoice def = defaultCorrection(F);
                const CorrectionStrategy strat = cfg.correction.value_or(def.strategy);
                const Index m = cfg.correction ? cfg.m : def.m;
                fill_in_ = mfu::fillIn(F.Z, F.W, F.size());
                auto Fp = std::make_shared<const InverseFactors<T>>(std::move(F));
                auto E = std::make_shared<const CorrectionMatrix<T>>(computeCorrection(*Fp, strat, m));
                real_factors_ = !is_complex_v<T>;
                const Index cap = cfg.band_cap;
                factory_ = [Fp, E, cap](cplx xi) -> VecApply {
                    auto P = std::make_shared<ShiftedApproxInverse<T>>(Fp, *E, xi, cap);
                    return [P](std::span<const cplx> v) { return P->apply(v); };
                };
            },
            any);
        seconds_ = secondsSince(t0);
    }

    VecApply shifted(cplx xi) const { return factory_(xi); }
    cplx shift() const { return shift_; }
    bool realFactors() const { return real_factors_; }
    double fillIn() const { return fill_in_; }
    double seconds() const { return seconds_; }
    const std::string& method() const { return method_; }

private:
    cplx shift_{};
    std::string method_;
    bool real_factors_ = true;
    double fill_in_ = 0.0;
    double seconds_ = 0.0;
    std::function<VecApply(cplx)> factory_;
};

std::vector<cplx> unitVector(Index n, Index k)
{
    std::vector<cplx> e(n, cplx{});
    e[k] = 1.0;
    return e;
}

// Dense complex product B * S for sparse real B.
DenseMatrix<cplx> sparseTimesDense(const CsrMatrix<double>& B, const DenseMatrix<cplx>& S)
{
    const Index n = B.rows(), m = S.cols();
    DenseMatrix<cplx> R(n, m);
    const auto& rs = B.rowStarts();
    const auto& ci = B.colIndices();
    const auto& va = B.values();
    for (Index i = 0; i < n; i++)
        for (Index p = rs[i]; p < rs[i + 1]; p++) {
            const double a = va[p];
            const Index k = ci[p];
            for (Index j = 0; j < m; j++) R(i, j) += a * S(k, j);
        }
    return R;
}

DenseMatrix<double> applyMultiplier(const PartialFractionExpansion& pfe, const CsrMatrix<double>& B,
                                    const DenseMatrix<cplx>& S)
{
    const Index n = S.rows();
    DenseMatrix<double> F(n, n);
    switch (pfe.multiplier) {
        case Multiplier::none:
            for (Index i = 0; i < n; i++)
                for (Index j = 0; j < n; j++) F(i, j) = S(i, j).real();
            for (Index i = 0; i < n; i++) F(i, i) += pfe.c0.real();
            break;
        case Multiplier::left_A: {
            const DenseMatrix<cplx> R = sparseTimesDense(B, S);
            for (Index i = 0; i < n; i++)
                for (Index j = 0; j < n; j++) F(i, j) = R(i, j).real();
            break;
        }
        case Multiplier::left_A_imag: {
            DenseMatrix<double> Im(n, n);
            for (Index i = 0; i < n; i++)
                for (Index j = 0; j < n; j++) Im(i, j) = S(i, j).imag();
            const DenseMatrix<cplx> R = sparseTimesDense(B, toComplex(Im));
            for (Index i = 0; i < n; i++)
                for (Index j = 0; j < n; j++) F(i, j) = pfe.gamma * R(i, j).real();
            break;
        }
    }
    return F;
}

std::vector<double> applyMultiplier(const PartialFractionExpansion& pfe, const CsrMatrix<double>& B,
                                    std::span<const double> v, const std::vector<cplx>& S)
{
    const Index n = static_cast<Index>(S.size());
    std::vector<double> y(n);
    switch (pfe.multiplier) {
        case Multiplier::none:
            for (Index i = 0; i < n; i++) y[i] = pfe.c0.real() * v[i] + S[i].real();
            break;
        case Multiplier::left_A: {
            const std::vector<cplx> r = matvec(B, std::span<const cplx>(S));
            for (Index i = 0; i < n; i++) y[i] = r[i].real();
            break;
        }
        case Multiplier::left_A_imag: {
            std::vector<double> im(n);
            for (Index i = 0; i < n; i++) im[i] = S[i].imag();
            const std::vector<double> r = matvec(B, std::span<const double>(im));
            for (Index i = 0; i < n; i++) y[i] = pfe.gamma * r[i];
            break;
        }
    }
    return y;
}

void checkPfe(const PartialFractionExpansion& pfe)
{
    if (pfe.poles.empty()) throw DomainError("funm: empty partial fraction expansion");
    if (pfe.poles.size() != pfe.coeffs.size()) throw DimensionError("funm: poles and coefficients differ in length");
}

}  // namespace

/*------------------------------------------------------------------------------
 *         Names
 *----------------------------------------------------------------------------*/
std::string toString(FunmMethod m)
{
    switch (m) {
        case FunmMethod::direct: return "direct";
        case FunmMethod::update: return "update";
        case FunmMethod::krylov: return "krylov";
        case FunmMethod::iterative: return "iterative";
    }
    return "?";
}

FunmMethod parseFunmMethod(const std::string& s)
{
    if (s == "direct") return FunmMethod::direct;
    if (s == "update") return FunmMethod::update;
    if (s == "krylov" || s == "arnoldi") return FunmMethod::krylov;
    if (s == "iterative" || s == "none") return FunmMethod::iterative;
    throw DomainError("unknown method '" + s + "'");
}

std::string toString(SeedPolicy p)
{
    switch (p) {
        case SeedPolicy::matrix_itself: return "matrix_itself";
        case SeedPolicy::first_pole: return "first_pole";
        case SeedPolicy::largest_modulus_pole: return "largest_modulus_pole";
        case SeedPolicy::index: return "index";
    }
    return "?";
}

SeedPolicy parseSeedPolicy(const std::string& s)
{
    if (s == "matrix_itself" || s == "matrix") return SeedPolicy::matrix_itself;
    if (s == "first_pole" || s == "first") return SeedPolicy::first_pole;
    if (s == "largest_modulus_pole" || s == "largest") return SeedPolicy::largest_modulus_pole;
    if (s == "index") return SeedPolicy::index;
    throw DomainError("unknown seed policy '" + s + "'");
}

std::string toString(SolverKind s)
{
    switch (s) {
        case SolverKind::none: return "none";
        case SolverKind::cg: return "cg";
        case SolverKind::bicgstab: return "bicgstab";
    }
    return "?";
}

SolverKind parseSolverKind(const std::string& s)
{
    if (s == "none") return SolverKind::none;
    if (s == "cg" || s == "pcg") return SolverKind::cg;
    if (s == "bicgstab") return SolverKind::bicgstab;
    throw DomainError("unknown solver '" + s + "'");
}

cplx selectSeedPole(const PartialFractionExpansion& pfe, SeedPolicy policy, Index index)
{
    if (pfe.poles.empty()) throw DomainError("selectSeedPole: empty expansion");
    switch (policy) {
        case SeedPolicy::matrix_itself: return {0.0, 0.0};
        case SeedPolicy::first_pole: return pfe.poles.front();
        case SeedPolicy::largest_modulus_pole: {
            Index best = 0;
            for (Index j = 1; j < pfe.size(); j++)
                if (std::abs(pfe.poles[j]) > std::abs(pfe.poles[best])) best = j;
            return pfe.poles[best];
        }
        case SeedPolicy::index:
            if (index < 0 || index > pfe.size())
                throw DomainError("selectSeedPole: index " + std::to_string(index) + " outside 0.." +
                                  std::to_string(pfe.size()));
            return index == 0 ? cplx{} : pfe.poles[index - 1];
    }
    return {};
}

double FunmResult::meanIterations() const
{
    if (per_pole_stats.empty()) return 0.0;
    double s = 0.0;
    for (const auto& st : per_pole_stats) s += st.iterations;
    return s / static_cast<double>(per_pole_stats.size());
}

/*------------------------------------------------------------------------------
 *         Matrix output
 *----------------------------------------------------------------------------*/
FunmResult evalFunm(const FunmRequest& req)
{
    const auto t0 = Clock::now();
    checkPfe(req.pfe);
    if (req.method != FunmMethod::direct && req.method != FunmMethod::update)
        throw DomainError("evalFunm: method must be direct or update");
    if (req.method == FunmMethod::update && !req.update_config)
        throw DomainError("evalFunm: update method needs an update configuration");
    const CsrMatrix<double> B = effectiveMatrix(req);
    const Index n = B.rows();
    if (n > denseCap())
        throw DomainError("evalFunm: n = " + std::to_string(n) + " exceeds the dense cap " +
                          std::to_string(denseCap()));

    FunmResult res;
    std::unique_ptr<Seed> seed;
    if (req.method == FunmMethod::update) {
        seed = std::make_unique<Seed>(B, req.pfe, *req.update_config);
        res.setup_seconds = seed->seconds();
        res.fill_in = seed->fillIn();
        res.seed_shift = seed->shift();
        res.seed_method = seed->method();
    }
    const bool pair_reuse = req.method == FunmMethod::direct || seed->realFactors();

    DenseMatrix<cplx> S(n, n);
    DenseMatrix<cplx> term(n, n);
    for (Index j = 0; j < req.pfe.size(); j++) {
        const cplx xi = req.pfe.poles[j], c = req.pfe.coeffs[j];
        if (pair_reuse && conjugateOfPrevious(req.pfe, j)) {
            for (std::size_t k = 0; k < S.data().size(); k++) S.data()[k] += std::conj(term.data()[k]);
            continue;
        }
        atPole(j, xi, [&] {
            std::function<std::vector<cplx>(std::span<const cplx>)> solve;
            std::unique_ptr<ResolventSolver> rs;
            if (seed) {
                solve = seed->shifted(xi);
            } else {
                rs = std::make_unique<ResolventSolver>(B, xi);
                solve = [&rs](std::span<const cplx> b) { return rs->solve(b); };
            }
            for (Index k = 0; k < n; k++) {
                const std::vector<cplx> e = unitVector(n, k);
                const std::vector<cplx> x = solve(e);
                for (Index i = 0; i < n; i++) term(i, k) = c * x[i];
            }
            return 0;
        });
        for (std::size_t k = 0; k < S.data().size(); k++) S.data()[k] += term.data()[k];
    }
    res.matrix = applyMultiplier(req.pfe, B, S);
    res.total_seconds = secondsSince(t0);
    return res;
}

/*------------------------------------------------------------------------------
 *         Vector output
 *----------------------------------------------------------------------------*/
FunmResult evalFunmAction(const FunmRequest& req)
{
    const auto t0 = Clock::now();
    if (!req.v) throw DomainError("evalFunmAction: vector v is required");
    const Index n = req.A.rows();
    if (static_cast<Index>(req.v->size()) != n) throw DimensionError("evalFunmAction: size of v does not match A");
    const std::vector<double>& v = *req.v;
    FunmResult res;

    if (req.method == FunmMethod::krylov) {
        if (!req.psi) throw DomainError("evalFunmAction: the krylov path needs the function psi");
        const LinearOperator<double> op = makeOperator(req.A);
        auto [y, st] = krylovFunAction<double>(op, v, *req.psi, req.solver_config.gamma_tol, req.solver_config.m_max);
        res.vector = std::move(y);
        res.converged = st.converged;
        res.per_pole_stats.push_back(std::move(st));
        res.total_seconds = secondsSince(t0);
        return res;
    }

    checkPfe(req.pfe);
    if (req.method == FunmMethod::update && !req.update_config)
        throw DomainError("evalFunmAction: update method needs an update configuration");
    const CsrMatrix<double> B = effectiveMatrix(req);
    const auto Bshared = std::make_shared<const CsrMatrix<double>>(B);
    const Index N = req.pfe.size();

    std::vector<Index> order = req.processing_order;
    if (order.empty()) {
        order.resize(N);
        for (Index j = 0; j < N; j++) order[j] = j;
    } else {
        std::vector<Index> sorted = order;
        std::sort(sorted.begin(), sorted.end());
        for (Index j = 0; j < static_cast<Index>(sorted.size()); j++)
            if (sorted[j] != j || static_cast<Index>(sorted.size()) != N)
                throw DomainError("evalFunmAction: processing order is not a permutation of the poles");
    }

    std::unique_ptr<Seed> seed;
    if (req.method == FunmMethod::update) {
        seed = std::make_unique<Seed>(B, req.pfe, *req.update_config);
        res.setup_seconds = seed->seconds();
        res.fill_in = seed->fillIn();
        res.seed_shift = seed->shift();
        res.seed_method = seed->method();
    }

    const std::vector<cplx> vc(v.begin(), v.end());
    const SolverConfig& sc = req.solver_config;
    std::vector<std::vector<cplx>> terms(N);
    res.per_pole_stats.resize(N);

    for (Index j : order) {
        const cplx xi = req.pfe.poles[j];
        IterStats& st = res.per_pole_stats[j];
        terms[j] = atPole(j, xi, [&]() -> std::vector<cplx> {
            if (req.method == FunmMethod::direct) {
                const auto ts = Clock::now();
                std::vector<cplx> w = ResolventSolver(B, xi).solve(vc);
                st.solver = "direct";
                st.converged = true;
                st.elapsed_seconds = secondsSince(ts);
                return w;
            }
            LinearOperator<cplx> op = makeShiftedOperator(Bshared, xi);
            if (seed) op.precondition = seed->shifted(xi);
            if (sc.solver == SolverKind::none) {
                if (!seed) throw DomainError("evalFunmAction: solver none requires the update method");
                const auto ts = Clock::now();
                std::vector<cplx> w = op.precondition(vc);
                st.solver = "none";
                st.converged = true;
                st.elapsed_seconds = secondsSince(ts);
                return w;
            }
            auto [w, s] = sc.solver == SolverKind::cg ? cg<cplx>(op, vc, sc.tol, sc.maxit)
                                                      : bicgstab<cplx>(op, vc, sc.tol, sc.maxit);
            st = std::move(s);
            return w;
        });
        if (!st.converged) res.converged = false;
    }

    std::vector<cplx> S(n, cplx{});
    for (Index j = 0; j < N; j++) {
        const cplx c = req.pfe.coeffs[j];
        for (Index i = 0; i < n; i++) S[i] += c * terms[j][i];
    }
    res.vector = applyMultiplier(req.pfe, B, v, S);
    res.total_seconds = secondsSince(t0);
    return res;
}

/*------------------------------------------------------------------------------
 *         Oracles and estimates
 *----------------------------------------------------------------------------*/
DenseMatrix<double> denseReference(const DenseMatrix<double>& A, const FunctionSpec& psi)
{
    if (A.rows() > denseCap())
        throw DomainError("denseReference: n = " + std::to_string(A.rows()) + " exceeds the dense cap");
    if (isSymmetric(A)) return symmetricFun(A, psi);
    return denseFun(A, psi);
}

DenseMatrix<double> denseReference(const CsrMatrix<double>& A, const FunctionSpec& psi)
{
    if (A.rows() > denseCap())
        throw DomainError("denseReference: n = " + std::to_string(A.rows()) + " exceeds the dense cap");
    return denseReference(A.toDense(), psi);
}

ErrorEstimate errorEstimate(Index N, double tau, double a, double b, double c_beta)
{
    if (!(a > 0.0 && b > a)) throw DomainError("errorEstimate: need 0 < a < b");
    ErrorEstimate e;
    const double pi2 = std::numbers::pi * std::numbers::pi;
    e.E1 = std::exp(-pi2 * static_cast<double>(N) / (std::log(b / a) + 3.0));
    e.E2 = c_beta * tau;
    return e;
}

SpectralInterval spectralInterval(const CsrMatrix<double>& A, bool power_iteration, Index iterations)
{
    const Index n = A.rows();
    SpectralInterval s;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    const auto& rs = A.rowStarts();
    const auto& ci = A.colIndices();
    const auto& va = A.values();
    for (Index i = 0; i < n; i++) {
        double d = 0.0, r = 0.0;
        for (Index p = rs[i]; p < rs[i + 1]; p++) {
            if (ci[p] == i)
                d += va[p];
            else
                r += std::abs(va[p]);
        }
        lo = std::min(lo, d - r);
        hi = std::max(hi, d + r);
    }
    s.a = lo;
    s.b = hi;
    s.method = "gershgorin";
    if (!power_iteration || n == 0) return s;

    // Rayleigh quotient of the power iteration for x -> shift x + sign A x.
    auto dominant = [&](double shift, double sign) {
        std::vector<double> x(n);
        for (Index i = 0; i < n; i++) x[i] = 1.0 + 0.1 * std::sin(static_cast<double>(i + 1));
        double rq = 0.0;
        for (Index it = 0; it < iterations; it++) {
            const double nx = norm2<double>(x);
            for (auto& t : x) t /= nx;
            std::vector<double> y = matvec(A, std::span<const double>(x));
            double num = 0.0;
            for (Index i = 0; i < n; i++) {
                y[i] = shift * x[i] + sign * y[i];
                num += x[i] * y[i];
            }
            rq = num;
            x = std::move(y);
        }
        return rq;
    };
    const double bmax = dominant(0.0, 1.0);
    const double upper = std::max(bmax, hi);
    const double amin = upper - dominant(upper, -1.0);
    s.b = bmax;
    s.a = amin;
    s.method = "power";
    return s;
}

}  // namespace mfu
