#include "mfu/elliptic.h"

#include <cmath>
#include <limits>
#include <numbers>

namespace mfu {

namespace {

// K(k) = pi / (2 agm(1, k')), with the complementary modulus passed directly
// so that k close to 1 keeps full relative accuracy.
double agmK(double kprime)
{
    if (kprime == 0.0) return INFINITY;
    double a = 1.0, b = kprime;
    for (int it = 0; it < 64; it++) {
        const double an = 0.5 * (a + b);
        const double bn = std::sqrt(a * b);
        a = an;
        b = bn;
        if (std::abs(a - b) <= 4.0 * std::numeric_limits<double>::epsilon() * a) break;
    }
    return std::numbers::pi / (a + b);
}

}  // namespace

EllipticK ellipticK(double k)
{
    if (!(k >= 0.0) || k >= 1.0) throw DomainError("ellipticK: modulus must lie in [0, 1)");
    const double kp = std::sqrt((1.0 - k) * (1.0 + k));
    return {agmK(kp), agmK(k)};
}

void jacobiReal(double u, double mc, double& sn, double& cn, double& dn)
{
    constexpr double CA = 1.0e-9;
    if (mc == 0.0) {
        cn = 1.0 / std::cosh(u);
        dn = cn;
        sn = std::tanh(u);
        return;
    }
    double em[16], en[16];
    double a = 1.0, c = 1.0, emc = mc;
    int l = 0;
    dn = 1.0;
    for (int i = 0; i < 16; i++) {
        l = i;
        em[i] = a;
        en[i] = (emc = std::sqrt(emc));
        c = 0.5 * (a + emc);
        if (std::abs(a - emc) <= CA * a) break;
        emc *= a;
        a = c;
    }
    u *= c;
    sn = std::sin(u);
    cn = std::cos(u);
    if (sn != 0.0) {
        a = cn / sn;
        c *= a;
        for (int ii = l; ii >= 0; ii--) {
            const double b = em[ii];
            a *= c;
            c *= dn;
            dn = (en[ii] + a) / (b + a);
            a = c / b;
        }
        a = 1.0 / std::sqrt(c * c + 1.0);
        sn = (sn >= 0.0 ? a : -a);
        cn = c * sn;
    }
}

EllipticValues jacobiElliptic(cplx t, double k)
{
    const EllipticK KK = ellipticK(k);
    if (std::abs(t.imag()) >= KK.Kprime) throw DomainError("jacobiElliptic: |Im t| must be below K(k')");
    const double k2 = k * k;
    double s, c, d, s1, c1, d1;
    jacobiReal(t.real(), (1.0 - k) * (1.0 + k), s, c, d);
    // Imaginary offset via Jacobi's imaginary transformation with modulus k'.
    jacobiReal(t.imag(), k2, s1, c1, d1);
    const double den = c1 * c1 + k2 * s * s * s1 * s1;
    EllipticValues v;
    v.sn = cplx(s * d1, c * d * s1 * c1) / den;
    v.cn = cplx(c * c1, -s * d * s1 * d1) / den;
    v.dn = cplx(d * c1 * d1, -k2 * s * c * s1) / den;
    v.k = k;
    v.K = KK.K;
    v.Kprime = KK.Kprime;
    return v;
}

}  // namespace mfu
