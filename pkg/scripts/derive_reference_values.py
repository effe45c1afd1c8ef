"""Compute the frozen reference values used by the test suite.

Everything here runs on mpmath at 40 digits or on exact rationals, and never
touches the package's evaluation paths, so the numbers are independent
oracles.  Re-run after changing a test fixture and paste the output into the
corresponding test module.

    python3 scripts/derive_reference_values.py
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

import mpmath as mp

mp.mp.dps = 40


def rising(x, n):
    out = Fraction(1)
    for j in range(n):
        out *= x + j
    return out


def poly_1f1(a: int, b, k):
    """Coefficients of 1F1(-a; b; k t) in t, exactly."""
    return [rising(-a, j) / (rising(b, j) * factorial(j)) * k**j for j in range(a + 1)]


def exact_laplace_poly(d: int, h, factors):
    """int t^(d-1) e^(-ht) prod 1F1(-a; b; k t) dt for integer d, exactly."""
    poly = [Fraction(1)]
    for a, b, k in factors:
        c = poly_1f1(a, b, k)
        out = [Fraction(0)] * (len(poly) + len(c) - 1)
        for i, u in enumerate(poly):
            for j, v in enumerate(c):
                out[i + j] += u * v
        poly = out
    return sum(cj * factorial(d + j - 1) / h ** (d + j) for j, cj in enumerate(poly))


def f1_exact(a, b, bp, c, x, y):
    """F1 with b = -1: the m-sum stops at 1, the n-sum is a 2F1 in closed form."""
    return sum(
        rising(a, m) * rising(b, m) / (rising(c, m) * factorial(m)) * x**m
        * mp.hyp2f1(a + m, bp, c + m, y)
        for m in range(-b + 1)
    )


def spiked_element(n, m, g, alpha):
    def u(k, x):
        return (-1) ** k * x ** (g - mp.mpf(1) / 2) * mp.exp(-x * x / 2) * mp.hyp1f1(-k, g, x * x)

    def inner(k, l, a):
        return mp.quad(lambda x: u(k, x) * u(l, x) * x ** (-a), [0, 1, 4, mp.inf])

    return inner(n, m, alpha) / mp.sqrt(inner(n, n, 0) * inner(m, m, 0))


def kratzer_element(n, m, A, B, l, alpha):
    s = l if A == 0 else -mp.mpf(1) / 2 + mp.sqrt(4 * A + (2 * l + 1) ** 2) / 2

    def u(k, r):
        beta = B / (k + s + 1)
        return r**s * mp.exp(-beta * r / 2) * mp.hyp1f1(-k, 2 * s + 2, beta * r)

    def inner(k, q, a):
        return mp.quad(lambda r: u(k, r) * u(q, r) * r ** (2 + a), [0, 2, 10, mp.inf])

    return inner(n, m, alpha) / mp.sqrt(inner(n, n, 0) * inner(m, m, 0))


def main():
    f2 = mp.appellf2
    rows = {
        "F2 v* (2.5; .5, 1.5; 2, 3; .3, .4)": f2(2.5, 0.5, 1.5, 2, 3, 0.3, 0.4),
        "F2 (3; .5, .7; 2, 2; .2, .3)": f2(3, 0.5, 0.7, 2, 2, 0.2, 0.3),
        "F2 (3; .4, .6; 2, 3; .2, .25)": f2(3, 0.4, 0.6, 2, 3, 0.2, 0.25),
        "F2 (3.5; .3, .8; 1.5, 2.5; .15, .2)": f2(3.5, 0.3, 0.8, 1.5, 2.5, 0.15, 0.2),
        "F2 (2; .5, .5; 1.5, 1.5; .2, .3)": f2(2, 0.5, 0.5, 1.5, 1.5, 0.2, 0.3),
        "F2 (1.2; .7, .7; 2, 2; .3, -.3)": f2(1.2, 0.7, 0.7, 2, 2, 0.3, -0.3),
        "F2 (1.7; -.4, 2.2; 1.1, .6; .35, -.45)": f2(1.7, -0.4, 2.2, 1.1, 0.6, 0.35, -0.45),
        "F2 (4.2; 1.3, .9; 2.7, 1.9; .05, .8)": f2(4.2, 1.3, 0.9, 2.7, 1.9, 0.05, 0.8),
        "F1 (1; 2, 2; 2; .2, .3)": mp.appellf1(1, 2, 2, 2, 0.2, 0.3),
        "F1 (2; -1, 1; 3; .5, .25)": f1_exact(2, -1, 1, 3, mp.mpf(0.5), mp.mpf(0.25)),
        "finite F1 (3, 0, 0, 3; -.425, -.076)": mp.gamma(4) * mp.gamma(4) / mp.gamma(8)
        * mp.appellf1(4, 1, 1, 8, -0.425, -0.076),
        "2F1 (.5, 1.5; 2.5; -.7)": mp.hyp2f1(0.5, 1.5, 2.5, -0.7),
        "2F1 (83.75, 42.1; 80.83; .7286)": mp.hyp2f1(
            2.7553875123201608 + 80, 2.1080702487722593 + 40, 0.8259422339964104 + 80, 0.7286362651664684),
        "1F1 (.7; 1.9; -12.5)": mp.hyp1f1(0.7, 1.9, -12.5),
        "3F2 (.5, 1.5, 2; 3, 3.5; .9)": mp.hyp3f2(0.5, 1.5, 2, 3, 3.5, 0.9),
        "Laplace Gamma(3) 2F1(3, .5; 2; .3)": 2 * mp.hyp2f1(3, 0.5, 2, 0.3),
        "Laplace (4, 2; 2, 4, 1; 1, 2, .5)": mp.quad(
            lambda t: t**3 * mp.exp(-2 * t) * mp.hyp1f1(2, 4, t) * mp.hyp1f1(1, 2, 0.5 * t), [0, 5, 20, mp.inf]),
        # |x|+|y| > 1 yet the integral converges because k < 0
        "F2 (3; .5, .7; 2, 2; -.8, .5) via Laplace": mp.quad(
            lambda t: t**2 * mp.exp(-t) * mp.hyp1f1(0.5, 2, -0.8 * t) * mp.hyp1f1(0.7, 2, 0.5 * t),
            [0, 5, 20, 80, mp.inf]) / 2,
        "spiked <1|x^-1|1> gamma=2": spiked_element(1, 1, 2, 1),
        "spiked <2|x^-1.5|4> gamma=1.6": spiked_element(2, 4, mp.mpf("1.6"), 1.5),
        "kratzer <1|r^2|0> A=0 B=2 l=0": kratzer_element(1, 0, 0, 2, 0, 2),
        "kratzer <2|r^1|3> A=1 B=2 l=0": kratzer_element(2, 3, 1, 2, 0, 1),
    }
    for key, val in rows.items():
        print(f"{key:45s} {mp.nstr(val, 17)}")

    exact = {
        # Lemma 6 terminating case outside the series domain (c=2, s=1, p=1, k'=0.9)
        "L6 (c=2,s=1,p=1,a=-2,a'=-1,k=1.2,k'=.9,h=1)": exact_laplace_poly(
            3, Fraction(1), [(2, Fraction(2), Fraction(6, 5)), (1, Fraction(1), Fraction(9, 10))]),
        "L6 (c=2,s=1,p=1,a=-2,a'=-1,k=1.2,k'=-2,h=1)": exact_laplace_poly(
            3, Fraction(1), [(2, Fraction(2), Fraction(6, 5)), (1, Fraction(1), Fraction(-2))]),
        "J (g=2,s=1,p=0,a=-1,a'=-1,k=.3,k'=.4,h=1)": exact_laplace_poly(
            3, Fraction(1), [(1, Fraction(2), Fraction(3, 10)), (1, Fraction(2), Fraction(2, 5))]),
        "J (g=1,s=0,p=0,a=-1,a'=-2,k=1,k'=2,h=1.5)": exact_laplace_poly(
            1, Fraction(3, 2), [(1, Fraction(1), Fraction(1)), (2, Fraction(1), Fraction(2))]),
    }
    for key, val in exact.items():
        print(f"{key:45s} {val} = {float(val)!r}")


if __name__ == "__main__":
    main()
