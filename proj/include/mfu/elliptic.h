/*==============================================================================
 *     File: elliptic.h
 *
 *  Description: Complete elliptic integral of the first kind (AGM) and the
 *               Jacobi elliptic functions sn, cn, dn for complex arguments in
 *               the strip |Im t| < K(k').
 *
 *============================================================================*/

#pragma once

#include "mfu/types.h"

namespace mfu {

struct EllipticK {
    double K;       // K(k)
    double Kprime;  // K(k'), k' = sqrt(1 - k^2)
};

/// 0 <= k < 1, otherwise DomainError.
EllipticK ellipticK(double k);

struct EllipticValues {
    cplx sn, cn, dn;
    double k = 0.0;
    double K = 0.0;
    double Kprime = 0.0;
};

/// Real argument with parameter mc = 1 - k^2 (descending Landen/Gauss).
void jacobiReal(double u, double mc, double& sn, double& cn, double& dn);

/// sn, cn, dn(t | k) for complex t with |Im t| < K(k').
EllipticValues jacobiElliptic(cplx t, double k);

}  // namespace mfu
