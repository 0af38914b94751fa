#include "mfu/bench.h"

#include <cmath>
#include <fstream>
#include <limits>

#include "mfu/sparse_ops.h"

namespace mfu {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

double trace(const CsrMatrix<double>& A)
{
    double t = 0.0;
    for (double d : A.diagonalValues()) t += d;
    return t;
}

std::string describeSeed(const UpdateConfig& u)
{
    std::string s = toString(u.seed_policy);
    if (u.seed_policy == SeedPolicy::index) s += ":" + std::to_string(u.seed_index);
    return s;
}

std::string seedMethodName(const UpdateConfig& u)
{
    if (!u.method) return "auto";
    return *u.method == SeedMethod::ainv ? "ainv" : "invt";
}

std::string correctionName(const UpdateConfig& u)
{
    return u.correction ? toString(*u.correction) : "default";
}

ProblemSpec withSize(ProblemSpec p, Index n)
{
    p.n = n;
    return p;
}

std::vector<Index> sizesOf(const std::vector<Index>& sizes, const ProblemSpec& p)
{
    if (sizes.empty()) return {p.n};
    return sizes;
}

}  // namespace

ArgumentSign parseArgumentSign(const std::string& s)
{
    if (s == "auto") return ArgumentSign::automatic;
    if (s == "plus" || s == "A") return ArgumentSign::plus;
    if (s == "minus" || s == "-A") return ArgumentSign::minus;
    throw DomainError("unknown sign '" + s + "' (auto, plus, minus)");
}

CsrMatrix<double> functionArgument(const CsrMatrix<double>& A, const std::string& psi, ArgumentSign sign,
                                   bool* negated)
{
    bool neg = sign == ArgumentSign::minus;
    if (sign == ArgumentSign::automatic) neg = psi == "exp" && trace(A) > 0.0;
    if (negated) *negated = neg;
    return neg ? scale(A, -1.0) : A;
}

PartialFractionExpansion buildExpansion(const CsrMatrix<double>& Aarg, const ExpansionOptions& opt)
{
    std::string kind = opt.pfe;
    if (kind == "auto") kind = opt.psi == "exp" ? "chebyshev" : (opt.psi == "log" ? "contour" : "contour");
    if (kind == "chebyshev") {
        if (opt.psi != "exp") throw DomainError("the Chebyshev expansion approximates exp only");
        return chebyshevExp(opt.N);
    }
    if (kind == "pade") {
        if (opt.psi != "log") throw DomainError("the Pade expansion approximates log only");
        return padeLog(opt.N);
    }
    if (kind == "contour") {
        double a, b;
        if (opt.interval) {
            a = opt.interval->first;
            b = opt.interval->second;
        } else {
            const SpectralInterval si = spectralInterval(Aarg);
            a = si.a;
            b = si.b;
        }
        return contourPFE(FunctionSpec::parse(opt.psi), a, b, opt.N);
    }
    throw DomainError("unknown expansion '" + opt.pfe + "' (auto, chebyshev, pade, contour)");
}

std::vector<double> makeVector(const std::string& spec, Index n)
{
    std::vector<double> v(n);
    if (spec == "ones") {
        std::fill(v.begin(), v.end(), 1.0);
    } else if (spec == "unit") {
        std::fill(v.begin(), v.end(), 1.0 / std::sqrt(static_cast<double>(n)));
    } else if (spec == "normalized-index") {
        for (Index i = 0; i < n; i++) v[i] = static_cast<double>(i + 1) / static_cast<double>(n);
    } else if (spec.rfind("file:", 0) == 0) {
        const std::string path = spec.substr(5);
        std::ifstream in(path);
        if (!in) throw FormatError("cannot open vector file '" + path + "'");
        v.clear();
        double x;
        while (in >> x) v.push_back(x);
        if (!in.eof()) throw FormatError("vector file '" + path + "': not a list of numbers");
        if (static_cast<Index>(v.size()) != n)
            throw FormatError("vector file '" + path + "' has " + std::to_string(v.size()) + " entries, expected " +
                              std::to_string(n));
    } else {
        throw DomainError("unknown vector '" + spec + "' (ones, unit, normalized-index, file:<path>)");
    }
    return v;
}

double relativeError(const DenseMatrix<double>& X, const DenseMatrix<double>& ref)
{
    return (X - ref).frobeniusNorm() / ref.frobeniusNorm();
}

double relativeError(const std::vector<double>& x, const std::vector<double>& ref)
{
    double e = 0.0, r = 0.0;
    for (std::size_t i = 0; i < x.size(); i++) {
        e += (x[i] - ref[i]) * (x[i] - ref[i]);
        r += ref[i] * ref[i];
    }
    return std::sqrt(e / r);
}

/*------------------------------------------------------------------------------
 *         funm
 *----------------------------------------------------------------------------*/
ExperimentReport cmdFunm(const FunmOptions& opt)
{
    ExperimentReport rep("funm", {"n", "method", "psi", "argument", "pfe", "N", "seed_method", "seed", "tau", "tau_L",
                                  "tau_Z", "correction", "m", "rel_error", "fill_in", "seconds"});
    rep.addMeta("family", toString(opt.problem.family));
    rep.addMeta("rng_seed", std::to_string(opt.problem.rng_seed));
    for (Index n : sizesOf(opt.sizes, opt.problem)) {
        const CsrMatrix<double> A = generate(withSize(opt.problem, n));
        bool neg = false;
        const CsrMatrix<double> Aarg = functionArgument(A, opt.expansion.psi, opt.expansion.sign, &neg);
        const PartialFractionExpansion pfe = buildExpansion(Aarg, opt.expansion);
        std::optional<DenseMatrix<double>> ref;
        if (opt.oracle && Aarg.rows() <= denseCap())
            ref = denseReference(Aarg, FunctionSpec::parse(opt.expansion.psi));
        for (FunmMethod method : opt.methods) {
            FunmRequest req;
            req.A = Aarg;
            req.pfe = pfe;
            req.method = method;
            if (method == FunmMethod::update) req.update_config = opt.update;
            const FunmResult res = evalFunm(req);
            const bool upd = method == FunmMethod::update;
            rep.addRow({fmtInt(Aarg.rows()), toString(method), opt.expansion.psi, neg ? "-A" : "A", toString(pfe.kind),
                        fmtInt(pfe.N), upd ? res.seed_method : "-", upd ? describeSeed(opt.update) : "-",
                        upd ? fmtSci(opt.update.tau) : "-", upd ? fmtSci(opt.update.tau_L) : "-",
                        upd ? fmtSci(opt.update.tau_Z) : "-", upd ? correctionName(opt.update) : "-",
                        upd && opt.update.correction ? fmtInt(opt.update.m) : "-",
                        fmtSci(ref ? relativeError(res.matrix, *ref) : kNaN), fmtSci(res.fill_in),
                        fmtSci(res.total_seconds)});
        }
    }
    return rep;
}

/*------------------------------------------------------------------------------
 *         funmv
 *----------------------------------------------------------------------------*/
ExperimentReport cmdFunmv(const FunmvOptions& opt)
{
    FunmMethod method = opt.method;
    if (!opt.precondition && method == FunmMethod::update) method = FunmMethod::iterative;

    if (opt.n_sweep) {
        ExperimentReport rep("funmv_nsweep", {"N", "mean_iterations", "converged", "diff_norm", "seconds"});
        rep.addMeta("family", toString(opt.problem.family));
        rep.addMeta("method", toString(method));
        const CsrMatrix<double> A = generate(opt.problem);
        bool neg = false;
        const CsrMatrix<double> Aarg = functionArgument(A, opt.expansion.psi, opt.expansion.sign, &neg);
        rep.addMeta("argument", neg ? "-A" : "A");
        const std::vector<double> v = makeVector(opt.vector, Aarg.rows());
        ExpansionOptions eo = opt.expansion;
        std::string kind = eo.pfe == "auto" ? (eo.psi == "exp" ? "chebyshev" : "contour") : eo.pfe;
        if (kind == "contour" && !eo.interval) {
            const SpectralInterval si = spectralInterval(Aarg);
            eo.interval = std::make_pair(si.a, si.b);
        }
        std::vector<double> prev;
        for (Index N = opt.n_sweep->first; N <= opt.n_sweep->second; N++) {
            if (kind == "chebyshev" && N % 2 != 0) continue;
            eo.N = N;
            FunmRequest req;
            req.A = Aarg;
            req.pfe = buildExpansion(Aarg, eo);
            req.method = method;
            if (method == FunmMethod::update) req.update_config = opt.update;
            req.solver_config = opt.solver;
            req.v = v;
            const FunmResult res = evalFunmAction(req);
            const double diff = prev.empty() ? kNaN : relativeError(prev, res.vector);
            rep.addRow({fmtInt(N), fmtSci(res.meanIterations()), fmtBool(res.converged), fmtSci(diff),
                        fmtSci(res.total_seconds)});
            prev = res.vector;
        }
        return rep;
    }

    ExperimentReport rep("funmv", {"n", "method", "solver", "psi", "argument", "pfe", "N", "mean_iterations",
                                   "converged", "rel_error", "fill_in", "setup_seconds", "seconds"});
    rep.addMeta("family", toString(opt.problem.family));
    rep.addMeta("vector", opt.vector);
    rep.addMeta("tol", fmtSci(opt.solver.tol));
    if (method == FunmMethod::update) {
        rep.addMeta("seed", describeSeed(opt.update));
        rep.addMeta("seed_method", seedMethodName(opt.update));
        rep.addMeta("tau", fmtSci(opt.update.tau));
        rep.addMeta("tau_L", fmtSci(opt.update.tau_L));
        rep.addMeta("tau_Z", fmtSci(opt.update.tau_Z));
        rep.addMeta("correction", correctionName(opt.update));
    }
    for (Index n : sizesOf(opt.sizes, opt.problem)) {
        const CsrMatrix<double> A = generate(withSize(opt.problem, n));
        bool neg = false;
        const CsrMatrix<double> Aarg = functionArgument(A, opt.expansion.psi, opt.expansion.sign, &neg);
        const std::vector<double> v = makeVector(opt.vector, Aarg.rows());
        FunmRequest req;
        req.A = Aarg;
        req.method = method;
        req.v = v;
        req.solver_config = opt.solver;
        req.psi = FunctionSpec::parse(opt.expansion.psi);
        if (method != FunmMethod::krylov) req.pfe = buildExpansion(Aarg, opt.expansion);
        if (method == FunmMethod::update) req.update_config = opt.update;
        const FunmResult res = evalFunmAction(req);
        double err = kNaN;
        if (opt.oracle && Aarg.rows() <= denseCap()) {
            const DenseMatrix<double> F = denseReference(Aarg, *req.psi);
            err = relativeError(res.vector, matvec(F, std::span<const double>(v)));
        }
        const std::string solver = method == FunmMethod::direct   ? "direct"
                                   : method == FunmMethod::krylov ? "arnoldi"
                                                                  : toString(opt.solver.solver);
        rep.addRow({fmtInt(Aarg.rows()), toString(method), solver, opt.expansion.psi, neg ? "-A" : "A",
                    method == FunmMethod::krylov ? "-" : toString(req.pfe.kind),
                    method == FunmMethod::krylov ? "-" : fmtInt(req.pfe.N), fmtSci(res.meanIterations()),
                    fmtBool(res.converged), fmtSci(err), fmtSci(res.fill_in), fmtSci(res.setup_seconds),
                    fmtSci(res.total_seconds)});
    }
    return rep;
}

/*------------------------------------------------------------------------------
 *         tau / band sweep
 *----------------------------------------------------------------------------*/
ExperimentReport cmdSweepTauBand(const SweepOptions& opt)
{
    ExperimentReport rep("sweep_tau_band", {"tau", "m", "rel_error", "fill_in", "seconds"});
    const CsrMatrix<double> A = generate(opt.problem);
    bool neg = false;
    const CsrMatrix<double> Aarg = functionArgument(A, "exp", opt.sign, &neg);
    const Index n = Aarg.rows();
    rep.addMeta("family", toString(opt.problem.family));
    rep.addMeta("n", fmtInt(n));
    rep.addMeta("argument", neg ? "-A" : "A");
    rep.addMeta("N", fmtInt(opt.N));
    rep.addMeta("correction", toString(opt.correction));
    const DenseMatrix<double> ref = denseReference(Aarg, FunctionSpec::exp());
    FunmRequest req;
    req.A = Aarg;
    req.pfe = chebyshevExp(opt.N);
    req.method = FunmMethod::update;
    for (double tau : opt.taus) {
        for (Index m : opt.ms) {
            const Index mm = m < 0 ? n - 1 : std::min(m, n - 1);
            UpdateConfig u;
            u.method = SeedMethod::ainv;
            u.tau = tau;
            u.correction = opt.correction;
            u.m = mm;
            u.band_cap = std::max<Index>(kDefaultBandCap, mm);
            req.update_config = u;
            const FunmResult res = evalFunm(req);
            rep.addRow({fmtSci(tau), fmtInt(mm), fmtSci(relativeError(res.matrix, ref)), fmtSci(res.fill_in),
                        fmtSci(res.total_seconds)});
        }
    }
    return rep;
}

/*------------------------------------------------------------------------------
 *         seed pole study
 *----------------------------------------------------------------------------*/
ExperimentReport cmdSeedPoleStudy(const SeedStudyOptions& opt)
{
    ExperimentReport rep("seed_pole_study",
                         {"j", "seed_re", "seed_im", "seed_modulus", "mean_iterations", "converged", "fill_in", "seconds"});
    const CsrMatrix<double> A = generate(opt.problem);
    bool neg = false;
    const CsrMatrix<double> Aarg = functionArgument(A, opt.expansion.psi, opt.expansion.sign, &neg);
    const std::vector<double> v = makeVector(opt.vector, Aarg.rows());
    FunmRequest req;
    req.A = Aarg;
    req.pfe = buildExpansion(Aarg, opt.expansion);
    req.v = v;
    req.solver_config = opt.solver;

    req.method = FunmMethod::iterative;
    const FunmResult plain = evalFunmAction(req);
    rep.addMeta("family", toString(opt.problem.family));
    rep.addMeta("n", fmtInt(Aarg.rows()));
    rep.addMeta("argument", neg ? "-A" : "A");
    rep.addMeta("pfe", toString(req.pfe.kind));
    rep.addMeta("N", fmtInt(req.pfe.N));
    rep.addMeta("tau_L", fmtSci(opt.update.tau_L));
    rep.addMeta("tau_Z", fmtSci(opt.update.tau_Z));
    rep.addMeta("unpreconditioned_mean_iterations", fmtSci(plain.meanIterations()));

    req.method = FunmMethod::update;
    for (Index j = 0; j <= req.pfe.size(); j++) {
        UpdateConfig u = opt.update;
        u.seed_policy = SeedPolicy::index;
        u.seed_index = j;
        req.update_config = u;
        const FunmResult res = evalFunmAction(req);
        const cplx s = res.seed_shift;
        rep.addRow({fmtInt(j), fmtSci(s.real()), fmtSci(s.imag()), fmtSci(std::abs(s)), fmtSci(res.meanIterations()),
                    fmtBool(res.converged), fmtSci(res.fill_in), fmtSci(res.total_seconds)});
    }
    return rep;
}

/*------------------------------------------------------------------------------
 *         decay probe
 *----------------------------------------------------------------------------*/
ExperimentReport cmdDecayProbe(const ProblemSpec& problem)
{
    ExperimentReport rep("decay_probe", {"n", "bandwidth", "banded", "kappa2", "inv_norm2", "theory_applicable", "beta",
                                         "beta_tilde", "c", "empirical_slope", "off_diagonal_max", "bound_holds",
                                         "worst_ratio"});
    rep.addMeta("family", toString(problem.family));
    const CsrMatrix<double> A = generate(problem);
    const DecayReport d = decayProbe(A);
    rep.addRow({fmtInt(d.n), fmtInt(d.bandwidth), fmtBool(d.banded), fmtSci(d.kappa2), fmtSci(d.inv_norm2),
                fmtBool(d.theory_applicable), fmtSci(d.beta), fmtSci(d.beta_tilde), fmtSci(d.c),
                fmtSci(d.empirical_slope), fmtSci(d.off_diagonal_max), fmtBool(d.bound_holds),
                fmtSci(d.worst_ratio)});
    return rep;
}

}  // namespace mfu
