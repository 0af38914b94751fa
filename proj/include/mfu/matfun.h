/*==============================================================================
 *     File: matfun.h
 *
 *  Description: Evaluation of f(A) and f(A) v from a partial fraction
 *               expansion. Resolvents are inverted exactly (direct), replaced
 *               by updated approximate inverses of one seed factorization
 *               (update), or solved iteratively. The action path can also run
 *               the plain Arnoldi approximation (krylov).
 *
 *               Only real A is accepted. For a pade_log expansion the driver
 *               works with B = A - I, since the expansion is one of log(I + B).
 *
 *============================================================================*/

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mfu/csr.h"
#include "mfu/dense.h"
#include "mfu/factorizations.h"
#include "mfu/krylov.h"
#include "mfu/rational.h"
#include "mfu/shifted_update.h"

namespace mfu {

/// iterative: every pole is solved by the Krylov solver without preconditioner.
enum class FunmMethod { direct, update, krylov, iterative };

std::string toString(FunmMethod m);
FunmMethod parseFunmMethod(const std::string& s);

enum class SeedPolicy { matrix_itself, first_pole, largest_modulus_pole, index };

std::string toString(SeedPolicy p);
SeedPolicy parseSeedPolicy(const std::string& s);

/// Seed shift for a policy. index 0 means -A, 1..N the poles.
cplx selectSeedPole(const PartialFractionExpansion& pfe, SeedPolicy policy, Index index = 0);

struct UpdateConfig {
    /// Unset: AINV for a real seed shift, INVT for a complex one.
    std::optional<SeedMethod> method;
    double tau = 0.1;
    double tau_L = 1e-2;
    double tau_Z = 1e-1;
    /// Unset: defaultCorrection of the seed factors.
    std::optional<CorrectionStrategy> correction;
    Index m = 1;
    SeedPolicy seed_policy = SeedPolicy::matrix_itself;
    Index seed_index = 0;
    Index band_cap = kDefaultBandCap;
};

enum class SolverKind { none, cg, bicgstab };

std::string toString(SolverKind s);
SolverKind parseSolverKind(const std::string& s);

struct SolverConfig {
    /// none with method=update applies P_xi once instead of iterating.
    SolverKind solver = SolverKind::bicgstab;
    double tol = 1e-8;
    Index maxit = 1000;
    double gamma_tol = 1e-6;  // krylov path
    Index m_max = 200;        // krylov path
};

struct FunmRequest {
    CsrMatrix<double> A;
    PartialFractionExpansion pfe;
    FunmMethod method = FunmMethod::direct;
    std::optional<UpdateConfig> update_config;
    SolverConfig solver_config;
    std::optional<std::vector<double>> v;
    /// Needed by the krylov path only.
    std::optional<FunctionSpec> psi;
    /// Order in which the action path processes the poles; accumulation is
    /// always ascending. Empty: ascending.
    std::vector<Index> processing_order;
};

struct ErrorEstimate {
    double E1 = 0.0;
    double E2 = 0.0;
};

struct FunmResult {
    DenseMatrix<double> matrix;   // evalFunm
    std::vector<double> vector;   // evalFunmAction
    std::vector<IterStats> per_pole_stats;
    double total_seconds = 0.0;
    double setup_seconds = 0.0;   // seed factorization and correction
    double fill_in = 0.0;         // 0 unless an update seed was built
    bool converged = true;
    std::optional<ErrorEstimate> error_estimate;
    cplx seed_shift{0.0, 0.0};
    std::string seed_method;

    double meanIterations() const;
};

FunmResult evalFunm(const FunmRequest& req);
FunmResult evalFunmAction(const FunmRequest& req);

/// Dense f(A): eigendecomposition for symmetric A, otherwise the
/// scaling-and-squaring kernels.
DenseMatrix<double> denseReference(const CsrMatrix<double>& A, const FunctionSpec& psi);
DenseMatrix<double> denseReference(const DenseMatrix<double>& A, const FunctionSpec& psi);

/// E1 = exp(-pi^2 N / (log(b/a) + 3)) with unit constant, E2 = c_beta tau.
/// Qualitative estimator only.
ErrorEstimate errorEstimate(Index N, double tau, double a, double b, double c_beta);

struct SpectralInterval {
    double a = 0.0;
    double b = 0.0;
    std::string method;
};

/// Gershgorin bounds, optionally tightened by power iteration on A and on
/// b I - A. Intended for symmetric positive definite A; the lower end from
/// power iteration converges slowly and is only an estimate.
SpectralInterval spectralInterval(const CsrMatrix<double>& A, bool power_iteration = true, Index iterations = 300);

}  // namespace mfu
