"""Truncated p-adic arithmetic in Z_p and its unramified extensions.

Elements live in Z_p[x]/(g) reduced modulo p^K, where g is a monic
polynomial irreducible mod p (g = x for Z_p itself).  Coefficients are
stored low degree first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from sympy import n_order
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor_sqf, gf_gcdex

__all__ = [
    "PadicElement",
    "PadicError",
    "valuation",
    "teichmuller",
    "padic_log",
    "hensel_root",
    "unramified_embed_root_of_unity",
    "vp",
]

Z_P = (0, 1)
_INT64_SAFE = 2**62


class PadicError(ValueError):
    """Domain error in a p-adic operation."""


def vp(n: int, p: int) -> float:
    """Valuation of an ordinary integer (``math.inf`` for 0)."""
    if n == 0:
        return math.inf
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _mulmod_poly(a, b, g, N):
    """(a*b mod g) mod N with a, b of length deg g."""
    d = len(g) - 1
    if d == 1:
        return ((a[0] * b[0]) % N,)
    if N * N * d < _INT64_SAFE:
        prod = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)) % N
        return _reduce_np(prod, g, N)
    return _mulmod_generic(a, b, g, N)


def _mulmod_generic(a, b, g, N):
    d = len(g) - 1
    prod = [0] * (2 * d - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _reduce_list(prod, g, N)


def _reduce_list(c, g, N):
    d = len(g) - 1
    c = [x % N for x in c]
    for i in range(len(c) - 1, d - 1, -1):
        t = c[i]
        if t:
            for j in range(d + 1):
                c[i - d + j] = (c[i - d + j] - t * g[j]) % N
    c = c[:d] + [0] * (d - len(c))
    return tuple(c)


def _reduce_np(c, g, N):
    d = len(g) - 1
    garr = np.asarray(g, dtype=np.int64)
    c = c.copy()
    for i in range(len(c) - 1, d - 1, -1):
        t = int(c[i])
        if t:
            c[i - d:i + 1] = (c[i - d:i + 1] - t * garr) % N
    out = [int(x) for x in c[:d]]
    out += [0] * (d - len(out))
    return tuple(out)


@dataclass(frozen=True)
class PadicElement:
    """Element of the degree-d unramified extension of Z_p, known mod p^K."""

    p: int
    prec: int
    coeffs: tuple[int, ...]
    modulus: tuple[int, ...] = Z_P

    def __post_init__(self):
        d = len(self.modulus) - 1
        N = self.p**self.prec
        if self.modulus[-1] != 1 or d < 1:
            raise PadicError("basis modulus must be monic of degree >= 1")
        c = tuple(int(x) % N for x in self.coeffs)
        if len(c) < d:
            c = c + (0,) * (d - len(c))
        elif len(c) > d:
            c = _reduce_list(list(c), self.modulus, N)
        object.__setattr__(self, "coeffs", c)

    # construction helpers
    @classmethod
    def from_int(cls, value, p, prec, modulus=Z_P):
        return cls(p, prec, (value,), modulus)

    @property
    def degree(self) -> int:
        return len(self.modulus) - 1

    @property
    def N(self) -> int:
        return self.p**self.prec

    def _coerce(self, other):
        if isinstance(other, PadicElement):
            if other.p != self.p or other.modulus != self.modulus:
                raise PadicError("incompatible p-adic parents")
            return other
        if isinstance(other, int):
            return PadicElement(self.p, self.prec, (other,), self.modulus)
        return NotImplemented

    def _common(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return None, None
        K = min(self.prec, other.prec)
        return K, other

    def __add__(self, other):
        K, o = self._common(other)
        if o is None:
            return NotImplemented
        return PadicElement(self.p, K, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)), self.modulus)

    __radd__ = __add__

    def __neg__(self):
        return PadicElement(self.p, self.prec, tuple(-a for a in self.coeffs), self.modulus)

    def __sub__(self, other):
        K, o = self._common(other)
        if o is None:
            return NotImplemented
        return PadicElement(self.p, K, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)), self.modulus)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        K, o = self._common(other)
        if o is None:
            return NotImplemented
        N = self.p**K
        if self.degree == 1 and self.modulus == Z_P:
            return PadicElement(self.p, K, (self.coeffs[0] * o.coeffs[0],))
        c = _mulmod_poly(self.coeffs, o.coeffs, self.modulus, N)
        return PadicElement(self.p, K, c, self.modulus)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        if self.modulus == Z_P:
            return PadicElement(self.p, self.prec, (pow(self.coeffs[0], e, self.N),))
        result = self.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = PadicElement(self.p, self.prec, (other,), self.modulus)
        if not isinstance(other, PadicElement):
            return NotImplemented
        if self.p != other.p or self.modulus != other.modulus:
            return False
        K = min(self.prec, other.prec)
        N = self.p**K
        return all((a - b) % N == 0 for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.p, self.prec, self.coeffs, self.modulus))

    def __repr__(self):
        if self.modulus == Z_P:
            return f"PadicElement({self.coeffs[0]} mod {self.p}^{self.prec})"
        return f"PadicElement({list(self.coeffs)} mod {self.p}^{self.prec}, deg {self.degree})"

    def one(self):
        return PadicElement(self.p, self.prec, (1,), self.modulus)

    def zero(self):
        return PadicElement(self.p, self.prec, (0,), self.modulus)

    def with_precision(self, K: int) -> "PadicElement":
        if K > self.prec:
            raise PadicError(f"cannot raise precision from {self.prec} to {K}")
        return PadicElement(self.p, K, self.coeffs, self.modulus)

    def lift_precision(self, K: int) -> "PadicElement":
        """Same residues viewed at precision K (any lift; caller owns the error)."""
        return PadicElement(self.p, K, self.coeffs, self.modulus)

    def valuation(self):
        return valuation(self)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def to_int(self) -> int:
        if not self.is_rational():
            raise PadicError("element does not lie in Z_p at this precision")
        return self.coeffs[0]

    def divide_by_p_power(self, k: int) -> "PadicElement":
        """Exact division by p^k; precision drops by k."""
        pk = self.p**k
        if any(c % pk for c in self.coeffs):
            raise PadicError(f"element not divisible by {self.p}^{k}")
        return PadicElement(self.p, self.prec - k, tuple(c // pk for c in self.coeffs), self.modulus)

    def inverse(self) -> "PadicElement":
        p, N = self.p, self.N
        if self.modulus == Z_P:
            if self.coeffs[0] % p == 0:
                raise PadicError("not a unit")
            return PadicElement(p, self.prec, (pow(self.coeffs[0], -1, N),))
        # inverse mod p in F_p[x]/(g), then Newton lifting
        a = [c % p for c in reversed(self.coeffs)]
        while a and a[0] == 0:
            a.pop(0)
        if not a:
            raise PadicError("not a unit")
        g = [c % p for c in reversed(self.modulus)]
        s, _, h = gf_gcdex(a, g, p, ZZ)
        if h != [1]:
            raise PadicError("not a unit")
        y = PadicElement(p, self.prec, tuple(int(c) for c in reversed(s)), self.modulus)
        two = 2
        k = 1
        while k < self.prec:
            y = y * (two - self * y)
            k *= 2
        return y


def valuation(x: PadicElement):
    """p-adic valuation; ``math.inf`` means the element is 0 mod p^K (value >= K)."""
    v = math.inf
    for c in x.coeffs:
        if c:
            v = min(v, vp(c, x.p))
    return v


def teichmuller(a: int, p: int, K: int) -> PadicElement:
    """The (p-1)-st root of unity congruent to a mod p."""
    if a % p == 0:
        raise PadicError(f"{a} is divisible by {p}; no Teichmuller representative")
    N = p**K
    return PadicElement(p, K, (pow(a, p ** (K - 1), N),))


def teichmuller_lift(x: PadicElement) -> PadicElement:
    """Root of unity of order prime to p congruent to x mod p (any degree)."""
    if valuation(x) > 0:
        raise PadicError("not a unit")
    q = x.p**x.degree
    return x ** (q ** (x.prec - 1))


def one_unit_part(x: PadicElement) -> PadicElement:
    """x * teichmuller(x)^{-1}, a 1-unit."""
    return x * teichmuller_lift(x).inverse()


def padic_log(u: PadicElement) -> PadicElement:
    """p-adic logarithm of a 1-unit.

    The returned element carries its guaranteed precision in ``prec``.
    Internally the series is summed at precision K + s where p^s bounds the
    largest index denominator, so the result is exact mod p^K.
    """
    p, K = u.p, u.prec
    x = u - 1
    v = valuation(x)
    if v == 0:
        raise PadicError("logarithm needs a 1-unit (u = 1 mod p)")
    if v == math.inf:
        return u.zero()
    # stop once i*v - log_p(i) >= K; the bound is increasing in i for p >= 3
    imax = 1
    while imax * v - math.floor(math.log(imax, p) + 1e-12) < K:
        imax += 1
    s = math.floor(math.log(imax, p) + 1e-12) if imax > 1 else 0
    W = K + s
    xw = x.lift_precision(W)
    total = xw.zero()
    power = xw.one()
    for i in range(1, imax + 1):
        power = power * xw
        vi = int(vp(i, p))
        term = power.divide_by_p_power(vi).lift_precision(W) if vi else power
        unit = pow(i // p**vi, -1, p**W)
        term = term * unit
        total = total + term if i % 2 else total - term
    return total.with_precision(K)


def _poly_eval(coeffs, x, N):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % N
    return acc


def hensel_root(g, a0, p: int, K: int) -> PadicElement:
    """Root of the integer polynomial g (low degree first) congruent to a0 mod p.

    If a0 is None the smallest residue root mod p is used.
    """
    dg = [i * c for i, c in enumerate(g)][1:]
    if a0 is None:
        roots = [r for r in range(p) if _poly_eval(g, r, p) == 0]
        if not roots:
            raise PadicError("polynomial has no root mod p")
        a0 = roots[0]
    if _poly_eval(g, a0, p) != 0:
        raise PadicError(f"{a0} is not a root mod {p}")
    if _poly_eval(dg, a0, p) == 0:
        raise PadicError("ramified or ambiguous: root is not simple mod p")
    N = p**K
    r = a0 % p
    k = 1
    while k < K:
        k = min(2 * k, K)
        Nk = p**k
        r = (r - _poly_eval(g, r, Nk) * pow(_poly_eval(dg, r, Nk), -1, Nk)) % Nk
    return PadicElement(p, K, (r % N,))


@lru_cache(maxsize=None)
def unramified_modulus(m: int, p: int) -> tuple[int, ...]:
    """Basis modulus for Q_p(zeta_m): least irreducible factor of Phi_m mod p."""
    from sympy import cyclotomic_poly, Poly, symbols

    X = symbols("X")
    phi = [int(c) % p for c in Poly(cyclotomic_poly(m, X), X).all_coeffs()]
    factors = gf_factor_sqf(phi, p, ZZ)[1]
    best = min(tuple(int(c) for c in f) for f in factors)
    return tuple(reversed(best))


@lru_cache(maxsize=64)
def unramified_embed_root_of_unity(m: int, p: int, K: int):
    """Primitive m-th root of unity in the unramified extension of degree ord_m(p).

    Returns ``(d, zeta)``; the basis modulus is ``zeta.modulus``.
    """
    if m % p == 0:
        raise PadicError(f"{p} divides {m}: extension would be ramified")
    if m <= 2:
        return 1, PadicElement(p, K, (1 if m == 1 else -1,))
    d = int(n_order(p, m))
    g = unramified_modulus(m, p)
    if d == 1:
        root = (-g[0]) % p
        return 1, teichmuller(root, p, K)
    x = PadicElement(p, K, (0, 1), g)
    return d, teichmuller_lift(x)
