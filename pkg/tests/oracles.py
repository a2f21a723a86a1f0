"""Independent reference computations used by the tests.

None of these call into the package's arithmetic: they use exact rationals,
sympy series, brute-force enumeration or mpmath.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import mpmath
import numpy as np
import sympy


def vp_fraction(x: Fraction, p: int) -> int:
    if x == 0:
        return 10**9
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def fraction_mod(x: Fraction, p: int, K: int) -> int:
    N = p**K
    return x.numerator * pow(x.denominator, -1, N) % N


def log_series_rational(x: int, p: int, K: int) -> int:
    """log_p(x) mod p^K for an integer x = 1 mod p, by exact partial sums."""
    y = Fraction(x - 1)
    total = Fraction(0)
    i = 1
    # terms y^i / i have valuation >= i - log_p(i); stop well past K
    while i - math.log(i, p) < K + 3:
        total += (-1) ** (i + 1) * y**i / i
        i += 1
    return fraction_mod(total, p, K)


def bernoulli_egf(nmax: int) -> list[Fraction]:
    """B_0..B_nmax from the series t/(e^t - 1) (B_1 = -1/2)."""
    t = sympy.symbols("t")
    ser = sympy.series(t / (sympy.exp(t) - 1), t, 0, nmax + 1).removeO()
    return [Fraction(str(ser.coeff(t, n) * sympy.factorial(n))) for n in range(nmax + 1)]


def generalized_bernoulli_egf(values: dict, f: int, nmax: int) -> list[Fraction]:
    """B_{n,chi} from sum_a chi(a) t e^{a t} / (e^{f t} - 1), chi given as {a: value}."""
    t = sympy.symbols("t")
    expr = sum(v * t * sympy.exp(a * t) for a, v in values.items() if v) / (sympy.exp(f * t) - 1)
    ser = sympy.series(expr, t, 0, nmax + 1).removeO()
    return [Fraction(str(sympy.nsimplify(ser.coeff(t, n) * sympy.factorial(n)))) for n in range(nmax + 1)]


def brute_tate_orders(S: np.ndarray, p: int, e: int, t: int, m: int = 0) -> tuple[int, int]:
    """(|H^0|, |H^-1|) of (Z/p^e)^g with sigma acting by S, by enumeration.

    The subgroup is generated by tau = sigma^(p^m), of order p^(t-m).
    """
    N = p**e
    g = S.shape[0]
    S = S.astype(object) % N
    tau = np.eye(g, dtype=object)
    for _ in range(p**m):
        tau = (tau @ S) % N
    norm = np.zeros((g, g), dtype=object)
    power = np.eye(g, dtype=object)
    for _ in range(p ** (t - m)):
        norm = (norm + power) % N
        power = (power @ tau) % N
    elems = [np.array(v, dtype=object) for v in itertools.product(range(N), repeat=g)]
    fixed = sum(1 for x in elems if not ((x @ tau - x) % N).any())
    images_norm = {tuple((x @ norm) % N) for x in elems}
    kernel_norm = sum(1 for x in elems if not ((x @ norm) % N).any())
    images_diff = {tuple((x @ tau - x) % N) for x in elems}
    return fixed // len(images_norm), kernel_norm // len(images_diff)


def analytic_class_number(D: int, log_eps: float) -> int:
    """h from h log(eps) = -1/2 sum_{a<D} chi(a) log sin(pi a / D)."""
    mpmath.mp.dps = 30
    total = mpmath.mpf(0)
    for a in range(1, D):
        k = sympy.jacobi_symbol(D, a) if a % 2 else _kronecker(D, a)
        if k:
            total += k * mpmath.log(mpmath.sin(mpmath.pi * a / D))
    h = -total / 2 / log_eps
    r = int(mpmath.nint(h))
    assert abs(h - r) < 1e-8, h
    return r


def _kronecker(D: int, a: int) -> int:
    return int(sympy.ntheory.residue_ntheory.jacobi_symbol(D, a)) if a % 2 else _kron_even(D, a)


def _kron_even(D: int, a: int) -> int:
    r = 1
    while a % 2 == 0:
        if D % 2 == 0:
            return 0
        r *= 1 if D % 8 in (1, 7) else -1
        a //= 2
    return r * (int(sympy.jacobi_symbol(D, a)) if a > 1 else 1)


def pell_unit(d: int) -> tuple[int, int, int]:
    """Least (x, y) with x^2 - D y^2 = +-4, y > 0, via sympy's diop_DN.

    Returns (x, y, norm) with eps = (x + y sqrt(D))/2 in terms of the field discriminant D.
    """
    from sympy.solvers.diophantine.diophantine import diop_DN

    D = d if d % 4 == 1 else 4 * d
    best = None
    for sign in (-1, 1):
        for x, y in diop_DN(D, 4 * sign):
            x, y = abs(int(x)), abs(int(y))
            if y == 0:
                continue
            size = x + y * math.sqrt(D)
            if best is None or size < best[0] - 1e-9:
                best = (size, x, y, sign)
    return best[1], best[2], best[3]


def resultant_valuation(P: list[int], Q: list[int], p: int) -> int:
    """v_p of Res(P, Q) for integer polynomials (low degree first)."""
    T = sympy.symbols("T")
    a = sum(c * T**i for i, c in enumerate(P))
    b = sum(c * T**i for i, c in enumerate(Q))
    r = int(sympy.resultant(a, b, T))
    if r == 0:
        return 10**9
    v = 0
    while r % p == 0:
        r //= p
        v += 1
    return v
