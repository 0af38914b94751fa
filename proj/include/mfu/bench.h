/*==============================================================================
 *     File: bench.h
 *
 *  Description: Experiments behind the mfu_bench subcommands. Each returns an
 *               ExperimentReport with a fixed column set.
 *
 *============================================================================*/

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mfu/matfun.h"
#include "mfu/problems.h"
#include "mfu/report.h"

namespace mfu {

/// Which matrix the function is applied to. auto: -A when psi is exp and
/// trace(A) > 0 (the Chebyshev approximant is valid on the negative axis),
/// otherwise A.
enum class ArgumentSign { automatic, plus, minus };

ArgumentSign parseArgumentSign(const std::string& s);

struct ExpansionOptions {
    std::string psi = "exp";
    std::string pfe = "auto";  // auto, chebyshev, pade, contour
    Index N = 8;
    ArgumentSign sign = ArgumentSign::automatic;
    std::optional<std::pair<double, double>> interval;  // contour [a, b]
};

struct FunmOptions {
    ProblemSpec problem;
    std::vector<Index> sizes;  // empty: problem.n
    ExpansionOptions expansion;
    std::vector<FunmMethod> methods{FunmMethod::update, FunmMethod::direct};
    UpdateConfig update;
    bool oracle = true;
};

struct FunmvOptions {
    ProblemSpec problem;
    std::vector<Index> sizes;
    ExpansionOptions expansion;
    FunmMethod method = FunmMethod::update;
    bool precondition = true;  // false turns update into iterative
    UpdateConfig update;
    SolverConfig solver;
    std::string vector = "ones";  // ones, unit, normalized-index, file:<path>
    bool oracle = true;
    std::optional<std::pair<Index, Index>> n_sweep;
};

struct SweepOptions {
    ProblemSpec problem;
    std::vector<double> taus{0.0, 1e-2, 1e-1};
    std::vector<Index> ms{0, 1, 2, 4, 8, 16, -1};  // -1: n-1
    Index N = 16;
    CorrectionStrategy correction = CorrectionStrategy::exact_product_then_extract;
    ArgumentSign sign = ArgumentSign::automatic;
};

struct SeedStudyOptions {
    ProblemSpec problem;
    ExpansionOptions expansion;
    UpdateConfig update;
    SolverConfig solver;
    std::string vector = "normalized-index";
};

/// The matrix the expansion is applied to, after the sign rule.
CsrMatrix<double> functionArgument(const CsrMatrix<double>& A, const std::string& psi, ArgumentSign sign,
                                   bool* negated = nullptr);

PartialFractionExpansion buildExpansion(const CsrMatrix<double>& Aarg, const ExpansionOptions& opt);

std::vector<double> makeVector(const std::string& spec, Index n);

ExperimentReport cmdFunm(const FunmOptions& opt);
ExperimentReport cmdFunmv(const FunmvOptions& opt);
ExperimentReport cmdSweepTauBand(const SweepOptions& opt);
ExperimentReport cmdSeedPoleStudy(const SeedStudyOptions& opt);
ExperimentReport cmdDecayProbe(const ProblemSpec& problem);

double relativeError(const DenseMatrix<double>& X, const DenseMatrix<double>& ref);
double relativeError(const std::vector<double>& x, const std::vector<double>& ref);

}  // namespace mfu
