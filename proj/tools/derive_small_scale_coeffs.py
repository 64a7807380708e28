#!/usr/bin/env python3
"""Offline derivations for the spherical-function series coefficients.

Run:  python3 tools/derive_small_scale_coeffs.py

Part 1 -- small-scale expansion coefficients b~_1, b~_2, b~_3.

The radial spherical function phi_lambda on H^n solves

    phi'' + (n-1) coth(r) phi' + (lambda^2 + rho^2) phi = 0,   rho = (n-1)/2,

with phi = 1 + O(r^2). Writing its even Taylor series phi = sum_p a_p(s) r^{2p}
(s = lambda^2) and matching against

    phi ~ sum_m r^{2m} b~_m(r) j_{m + n/2 - 1}(lambda r),

where j_nu(z) = Gamma(nu+1)(z/2)^{-nu} J_nu(z) = sum_k d_k(nu) s^k r^{2k},
gives for each q = m + j the triangular system over k

    sum_{m+j=q} beta_{m,j} d_k(m + n/2 - 1) = [s^k] a_{q+k},

whose unique solution yields the Taylor coefficients beta_{m,j} of
b~_m(r) = sum_j beta_{m,j} r^{2j}. The script verifies: (i) the extra
equations k > q hold identically in n (the rearrangement is exact to the
expanded order), (ii) the m = 0 row reproduces the Taylor series of
(r/sinh r)^{(n-1)/2}. The m >= 1 coefficients all carry the factor
(n-3)(n-1), so the series terminates on H^3 where
phi_lambda(r) = sin(lambda r)/(lambda sinh r) exactly.

The printed b~_1, b~_2, b~_3 coefficients are the ones frozen into
src/hn_geometry.cpp.

Part 2 -- large-scale tail coefficients.

Substituting Phi_lambda(r) = e^{(i lambda - rho) r} G(w), w = e^{-2r}, into
the same ODE gives a two-term recursion for G(w) = sum_l G_l w^l:

    l (l - i lambda) G_l = (l + rho - 1)(l + rho - 1 - i lambda) G_{l-1},

with G_0 = 1. This is the expansion evaluated by phi_large_tail (stable for
arbitrarily large |lambda|, unlike the raw 2F1 power series whose terms grow
exponentially before converging). On H^3 (rho = 1) every G_l = 1, resumming
to e^{i lambda r} / (2 sinh r).
"""

import sympy as sp


def derive_small_scale(P=9, QMAX=4):
    n, s, r, w = sp.symbols('n s r w', positive=True)
    rho = (n - 1) / 2

    a = [sp.Integer(1)] + [sp.symbols(f'a{p}') for p in range(1, P + 1)]
    phi = sum(a[p] * r**(2 * p) for p in range(P + 1))
    cothser = sp.series(sp.coth(r), r, 0, 2 * P + 4).removeO()
    resid = sp.expand(
        sp.diff(phi, r, 2) + (n - 1) * sp.expand(cothser * sp.diff(phi, r)) +
        (s + rho**2) * phi)
    sol = {}
    for p in range(P):
        cp = resid.coeff(r, 2 * p).subs(sol)
        apn = sp.symbols(f'a{p+1}')
        sol[apn] = sp.expand(sp.solve(sp.Eq(cp, 0), apn)[0])
    A = [sp.Integer(1)] + [sp.expand(sol[sp.symbols(f'a{p}')])
                           for p in range(1, P + 1)]

    def dcoef(k, m):
        nu = m + n / 2 - 1
        prod = sp.Integer(1)
        for i in range(1, k + 1):
            prod *= (nu + i)
        return sp.Rational((-1)**k, 1) / (sp.factorial(k) * 4**k * prod)

    beta = {}
    for q in range(QMAX + 1):
        unks = [sp.symbols(f'b_{m}_{q-m}') for m in range(q + 1)]
        eqs = []
        for k in range(q + 1):
            lhs = sum(unks[m] * dcoef(k, m) for m in range(q + 1))
            eqs.append(lhs - A[q + k].coeff(s, k))
        vals = list(sp.linsolve(eqs, unks))[0]
        for m in range(q + 1):
            beta[(m, q - m)] = sp.cancel(sp.together(vals[m]))

    # consistency: extra k-equations hold identically in n
    for q in range(QMAX + 1):
        for k in range(q + 1, min(q + 3, P - q) + 1):
            lhs = sum(beta[(m, q - m)] * dcoef(k, m) for m in range(q + 1))
            d = sp.simplify(lhs - A[q + k].coeff(s, k))
            assert d == 0, (q, k, d)
    print('consistency: rearrangement exact through r^%d' % (2 * P))

    b0ser = sp.series((r / sp.sinh(r))**rho, r, 0, 2 * QMAX + 2).removeO()
    for j in range(QMAX + 1):
        d = sp.simplify(beta[(0, j)] - b0ser.coeff(r, 2 * j))
        assert d == 0, (j, d)
    print('b~_0 matches (r/sinh r)^rho')

    for m in (1, 2, 3):
        print(f'b~_{m}(r) coefficients (r^0, r^2, ...):')
        for j in range(QMAX + 1 - m):
            print(f'  r^{2*j}:', sp.factor(beta[(m, j)]))


def derive_large_scale_recursion():
    w, lam, rho, n = sp.symbols('w lambda rho n')
    G = sp.Function('G')
    mu = sp.I * lam - rho
    Gw = sp.Derivative(G(w), w)
    Gww = sp.Derivative(G(w), w, 2)
    upp = mu**2 * G(w) + 2 * mu * (-2 * w) * Gw + 4 * w**2 * Gww + 4 * w * Gw
    up = mu * G(w) + (-2 * w) * Gw
    eq = upp + (n - 1) * (1 + w) / (1 - w) * up + (lam**2 + rho**2) * G(w)
    eq = sp.expand(sp.simplify(eq * (1 - w)).subs(n, 2 * rho + 1))
    A = sp.Poly(sp.expand(eq.coeff(G(w))), w).all_coeffs()[::-1]
    B = sp.Poly(sp.expand(eq.coeff(Gw)), w).all_coeffs()[::-1]
    C = sp.Poly(sp.expand(eq.coeff(Gww)), w).all_coeffs()[::-1]
    l = sp.symbols('l', positive=True)
    coefGl = A[0] + B[1] * l + C[2] * l * (l - 1)
    coefGlm1 = A[1] + B[2] * (l - 1) + C[3] * (l - 1) * (l - 2)
    print('recursion:')
    print(' ', sp.factor(sp.simplify(coefGl)), '* G_l =',
          sp.factor(sp.simplify(-coefGlm1)), '* G_{l-1}')


if __name__ == '__main__':
    derive_small_scale()
    derive_large_scale_recursion()
