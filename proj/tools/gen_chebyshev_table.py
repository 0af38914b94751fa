#!/usr/bin/env python3
"""Offline generator for the embedded Chebyshev rational table of exp.

Computes, for each even degree N in 2..16, the Caratheodory-Fejer (CF)
near-best type (N, N) rational approximation r(z) = c0 + sum_k a_k/(z - z_k)
of exp(z) on (-inf, 0], following the classical CF construction on the
transplanted interval t = (z + s)/(s - z) with scale s = 9. Everything is done
in mpmath at high precision so the double-precision table is correct to the
last digit, and the constant term c0 is fixed by the minimax condition on a
dense grid.

Output is a C++ source fragment written to stdout. Usage:

    python3 tools/gen_chebyshev_table.py > src/chebyshev_table.inc
"""
import sys

import mpmath as mp
import numpy as np

mp.mp.dps = 60
K = 100        # Chebyshev coefficients kept
NF = 2048      # sample points on the unit circle
SCALE = 9


def chebyshev_coeffs():
    w = [mp.expjpi(2 * mp.mpf(j) / NF) for j in range(NF)]
    t = [mp.re(x) for x in w]
    F = []
    for tj in t:
        if tj == -1:
            F.append(mp.mpf(0))
        else:
            F.append(mp.exp(SCALE * (tj - 1) / (tj + 1)))
    # real(fft(F))/NF, only the first K+1 entries are needed
    c = []
    for k in range(K + 1):
        s = mp.fsum(F[j] * mp.cospi(2 * mp.mpf(j * k % NF) / NF) for j in range(NF))
        c.append(s / NF)
    return w, c


def polyval_asc(coeffs, x):
    acc = mp.mpf(0)
    for a in reversed(coeffs):
        acc = acc * x + a
    return acc


def cf(n, w, c, eig):
    evals, evecs = eig
    order = sorted(range(K), key=lambda i: -abs(evals[i]))
    idx = order[n]
    lam = evals[idx]
    s = abs(lam)
    v = [evecs[i, idx] for i in range(K)]
    # symmetric Hankel: left singular vector is sign(lam) * v
    sg = 1 if lam > 0 else -1
    u_rev = [sg * v[K - 1 - i] for i in range(K)]  # U(K:-1:1, n+1)

    f_vals = [polyval_asc(c[:K + 1], x) for x in w]
    # fft(x)(k) = sum_j x_j * conj(w_k)^j
    rt = []
    for j, x in enumerate(w):
        xc = mp.conj(x)
        b = polyval_asc(u_rev, xc) / polyval_asc(v, xc)
        rt.append(f_vals[j] - s * x ** K * b)

    # roots of v (MATLAB roots(v) treats v(1) as leading coefficient)
    vd = np.array([complex(x) for x in v])
    approx = np.roots(vd)
    outside = [r for r in approx if abs(r) > 1]
    assert len(outside) == n, (n, len(outside))
    poly_desc = [mp.mpf(x) for x in v]

    def pv(z):
        return mp.polyval(poly_desc, z)

    dpoly = [poly_desc[i] * (len(poly_desc) - 1 - i) for i in range(len(poly_desc) - 1)]

    def dpv(z):
        return mp.polyval(dpoly, z)

    qk = []
    for r in outside:
        z = mp.mpc(r.real, r.imag)
        for _ in range(100):
            dz = pv(z) / dpv(z)
            z -= dz
            if abs(dz) < mp.mpf(10) ** (-mp.mp.dps + 5):
                break
        qk.append(z)

    # qc = poly(qk), descending
    qc = [mp.mpc(1)]
    for q in qk:
        nxt = qc + [mp.mpc(0)]
        for i in range(1, len(nxt)):
            nxt[i] -= q * qc[i - 1]
        qc = nxt
    pt = [rt[j] * mp.polyval(qc, w[j]) for j in range(NF)]
    ptc_asc = []
    for k in range(n + 1):
        acc = mp.fsum(pt[j] * mp.conj(w[j]) ** k for j in range(NF))
        ptc_asc.append(mp.re(acc) / NF)
    ptc = list(reversed(ptc_asc))

    zk, ak = [], []
    for k, q in enumerate(qk):
        others = [qq for i, qq in enumerate(qk) if i != k]
        q2 = mp.mpc(1)
        for o in others:
            q2 *= (q - o)
        ck = mp.polyval(ptc, q) / q2
        z = SCALE * (q - 1) ** 2 / (q + 1) ** 2
        ak.append(4 * ck * z / (q ** 2 - 1))
        zk.append(z)

    # Symmetrize: poles come in conjugate pairs, enforce exactly.
    pairs = []
    used = [False] * n
    for i in range(n):
        if used[i]:
            continue
        best, bd = None, None
        for j in range(n):
            if j != i and not used[j]:
                d = abs(zk[j] - mp.conj(zk[i]))
                if bd is None or d < bd:
                    best, bd = j, d
        used[i] = used[best] = True
        z = (zk[i] + mp.conj(zk[best])) / 2
        a = (ak[i] + mp.conj(ak[best])) / 2
        pairs.append((z, a))

    def r_noconst(x):
        return mp.re(mp.fsum(2 * a / (x - z) for z, a in pairs))

    grid = [mp.mpf(k) / 100 for k in range(0, 10001)] + [mp.mpf(200), mp.mpf(1000), mp.mpf(10) ** 6]
    errs = [r_noconst(-x) - mp.exp(-x) for x in grid]
    emax, emin = max(errs), min(errs)
    c0 = -(emax + emin) / 2
    sup = max(abs(e + c0) for e in errs)
    return pairs, c0, sup, s


def main():
    w, c = chebyshev_coeffs()
    H = mp.matrix(K, K)
    for i in range(K):
        for j in range(K):
            H[i, j] = c[i + j + 1] if i + j + 1 <= K else mp.mpf(0)
    eig = mp.eigsy(H)
    out = sys.stdout
    out.write("// Generated by tools/gen_chebyshev_table.py. Do not edit.\n")
    out.write("// Per degree: c0 followed by one (pole, coefficient) record per conjugate\n")
    out.write("// pair with Im(pole) > 0; r(z) = c0 + sum a/(z - p) + conj(a)/(z - conj(p)).\n")
    for n in range(2, 17, 2):
        pairs, c0, sup, s = cf(n, w, c, eig)
        sys.stderr.write(f"N={n:2d} sup error {mp.nstr(sup, 5)}  singular value {mp.nstr(s, 5)}\n")
        pairs = [(z, a) if mp.im(z) > 0 else (mp.conj(z), mp.conj(a)) for z, a in pairs]
        pairs.sort(key=lambda p: mp.im(p[0]))
        out.write(f"{{{n}, \"{mp.nstr(c0, 25, min_fixed=1, max_fixed=0)}\", {mp.nstr(sup, 6)}, {{\n")
        for z, a in pairs:
            vals = [mp.re(z), mp.im(z), mp.re(a), mp.im(a)]
            out.write("    {" + ", ".join('"' + mp.nstr(x, 25, min_fixed=1, max_fixed=0) + '"' for x in vals) + "},\n")
        out.write("}},\n")


if __name__ == "__main__":
    main()
