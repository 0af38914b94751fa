/*==============================================================================
 *     File: problems.h
 *
 *  Description: Deterministic test matrices: exponential and polynomial
 *               off-diagonal decay, a 3D reaction-diffusion operator with a
 *               random sparse perturbation, and a 2D advection-diffusion
 *               operator with variable coefficients.
 *
 *============================================================================*/

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>

#include "mfu/csr.h"

namespace mfu {

/// splitmix64 stream.
class SeededRandom {
public:
    explicit SeededRandom(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform in [0, n).
    std::uint64_t below(std::uint64_t n);

private:
    std::uint64_t state_;
};

SeededRandom seededRandom(std::uint64_t seed);

/// a_ij = exp(-alpha (i-j)) for i >= j, exp(-beta (j-i)) for i < j,
/// keeping |i-j| <= keep_offdiagonals.
CsrMatrix<double> genExpDecay(Index n, double alpha, double beta, Index keep_offdiagonals = 15);

/// a_ij = 1 / (2 + (i-j)^2), all entries stored.
CsrMatrix<double> genPolyDecay(Index n);

inline constexpr Index kMaxGridPoints = Index{1} << 21;

/// k times the 7-point Laplacian on the unit cube (Dirichlet, h = 1/(n+1)),
/// so the diagonal is -6k/h^2, plus ceil(fill_fraction n^6) distinct random
/// entries uniform in (0,1).
CsrMatrix<double> genReactionDiffusion3D(Index n_per_dim, double k = 1e-8, double fill_fraction = 0.001,
                                         std::uint64_t rng_seed = 1);

struct AdvectionDiffusionCoefficients {
    double k1 = 1e-2;
    std::function<double(double)> k2;  // of y
    std::function<double(double)> t1;  // of x
    std::function<double(double)> t2;  // of y

    static AdvectionDiffusionCoefficients standard();
    static AdvectionDiffusionCoefficients constant(double k1, double k2, double t1, double t2);
};

/// Conservative 5-point diffusion with coefficients at the cell faces and
/// first-order upwind convection, Dirichlet boundary, unknowns ordered with
/// x fastest. Size n_per_dim^2. grid_units multiplies the operator by h^2.
CsrMatrix<double> genAdvectionDiffusion2D(Index n_per_dim,
                                          const AdvectionDiffusionCoefficients& coef =
                                              AdvectionDiffusionCoefficients::standard(),
                                          bool grid_units = false);

enum class ProblemFamily { exp_decay, poly_decay, reaction_diffusion_3d, advection_diffusion_2d, matrix_market };

std::string toString(ProblemFamily f);
ProblemFamily parseProblemFamily(const std::string& s);

struct ProblemSpec {
    ProblemFamily family = ProblemFamily::exp_decay;
    Index n = 100;           // matrix size, or grid points per dimension for PDE families
    double alpha = 1.0;
    double beta = 1.0;
    Index keep = 15;
    double k = 1e-8;
    double fill_fraction = 0.001;
    std::uint64_t rng_seed = 1;
    bool grid_units = false;  // advection_diffusion_2d
    std::string path;        // matrix_market

    /// key=value lines, '#' comments.
    static ProblemSpec parse(std::istream& in);
    static ProblemSpec parse(const std::string& text);
    std::string toText() const;
};

CsrMatrix<double> generate(const ProblemSpec& spec);

}  // namespace mfu
