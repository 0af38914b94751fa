/*==============================================================================
 *     File: rational.h
 *
 *  Description: Partial fraction expansions of matrix functions,
 *
 *        none:         f(A) = c0 I + sum_j c_j (xi_j I - A)^{-1}
 *        left_A:       f(A) = A sum_j c_j (xi_j I - A)^{-1}
 *        left_A_imag:  f(A) = gamma A Im sum_j c_j (xi_j I - A)^{-1}
 *
 *               together with their generators: the Chebyshev (CF) rational
 *               approximation of exp, the diagonal Pade approximant of log(1+x)
 *               and the elliptic-map midpoint rule for a contour around [a,b].
 *
 *============================================================================*/

#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "mfu/types.h"

namespace mfu {

using cplxl = std::complex<long double>;

/// Scalar function applied to a matrix.
struct FunctionSpec {
    enum class Kind { exp, log, power, user };
    Kind kind = Kind::exp;
    double alpha = 1.0;                 // exponent for power
    std::function<cplx(cplx)> fn;       // user-supplied, analytic off (-inf, 0]
    std::string label;

    static FunctionSpec exp();
    static FunctionSpec log();
    static FunctionSpec power(double alpha);
    static FunctionSpec user(std::function<cplx(cplx)> f, std::string label = "user");
    /// "exp", "log", "sqrt", "power:<alpha>".
    static FunctionSpec parse(const std::string& s);

    cplx operator()(cplx z) const;
    std::string name() const;
};

enum class PfeKind { chebyshev_exp, pade_log, contour };
enum class Multiplier { none, left_A, left_A_imag };

std::string toString(PfeKind k);
std::string toString(Multiplier m);

struct PartialFractionExpansion {
    PfeKind kind = PfeKind::chebyshev_exp;
    Index N = 0;
    cplx c0{0.0, 0.0};
    std::vector<cplx> poles;
    std::vector<cplx> coeffs;
    double gamma = 1.0;
    Multiplier multiplier = Multiplier::none;
    double a = 0.0, b = 0.0;  // spectral interval (contour)

    // Native Pade form: log(1+x) ~ x sum alpha_j / (1 + beta_j x).
    std::vector<double> alpha, beta;

    // Extended-precision shadow of (c0, poles, coeffs) used by evalScalar
    // when present.
    cplxl c0_ext{0.0L, 0.0L};
    std::vector<cplxl> poles_ext, coeffs_ext;

    Index size() const { return static_cast<Index>(poles.size()); }
};

/// Supported degrees: 2, 4, ..., 16. Approximates e^z for z in (-inf, 0],
/// so R_N(x) ~ e^{-x} for x >= 0 is evalScalar(pfe, -x).
PartialFractionExpansion chebyshevExp(Index N);
std::vector<Index> chebyshevSupportedDegrees();
/// Uniform error of the tabulated approximation on (-inf, 0].
double chebyshevTabulatedError(Index N);

/// N-point Gauss-Legendre on [0,1]: alpha are the weights, beta the nodes.
PartialFractionExpansion padeLog(Index N);

/// Midpoint rule on the elliptic-map contour around [a,b]:
/// f(A) = gamma A Im sum c_j (xi_j I - A)^{-1}.
PartialFractionExpansion contourPFE(const FunctionSpec& psi, double a, double b, Index N);

/// Nodes x and weights w of N-point Gauss-Legendre on [0,1].
void gaussLegendre01(Index N, std::vector<double>& x, std::vector<double>& w);

cplx evalScalar(const PartialFractionExpansion& pfe, cplx x);

/// JSON text record: kind, N, gamma, c0, poles, coeffs as [re, im] pairs.
std::string pfeToJson(const PartialFractionExpansion& pfe);
PartialFractionExpansion pfeFromJson(const std::string& text);

}  // namespace mfu
