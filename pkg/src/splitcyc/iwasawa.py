"""Truncated Iwasawa algebra Z_p[[T]] and its finite quotient modules.

Gamma acts on every quotient through gamma_0 -> 1 + T, so Lambda/(.., omega_n)
becomes a module over Z_p[G_n] with sigma = multiplication by 1 + T.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .cohomology import (
    FiniteAbelianGroup,
    GroupModule,
    PrecisionExhausted,
    StructuralError,
    tate_cohomology,
)
from .padic import vp
from .smith import smith_normal_form

__all__ = [
    "IwasawaPoly",
    "LambdaQuotientModule",
    "omega",
    "nu",
    "omega_int",
    "nu_int",
    "weierstrass_factor",
    "quotient_order",
    "coprimality_check",
    "bn_module",
    "bn_model_cohomology",
    "bn_model_cohomology_full",
    "b0_model",
    "synthetic_f",
    "required_level",
    "bn_module_full",
]


@dataclass(frozen=True)
class IwasawaPoly:
    """Element of Lambda / (p^K, T^N); coefficients c_0 .. c_{N-1}."""

    p: int
    K: int
    N: int
    coeffs: tuple

    def __post_init__(self):
        mod = self.p**self.K
        c = [int(x) % mod for x in self.coeffs[: self.N]]
        c += [0] * (self.N - len(c))
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_coeffs(cls, coeffs, p, K, N=None):
        coeffs = list(coeffs)
        return cls(p, K, N if N is not None else max(len(coeffs), 1), tuple(coeffs))

    def _check(self, other):
        if (self.p, self.K, self.N) != (other.p, other.K, other.N):
            raise ValueError("incompatible truncations")

    def __add__(self, other):
        self._check(other)
        return IwasawaPoly(self.p, self.K, self.N, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return IwasawaPoly(self.p, self.K, self.N, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return IwasawaPoly(self.p, self.K, self.N, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return IwasawaPoly(self.p, self.K, self.N, tuple(other * a for a in self.coeffs))
        self._check(other)
        out = [0] * self.N
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(self.N - i):
                    out[i + j] += a * other.coeffs[j]
        return IwasawaPoly(self.p, self.K, self.N, tuple(out))

    __rmul__ = __mul__

    def __call__(self, x: int) -> int:
        """Value at an integer point of positive valuation, mod p^K."""
        mod = self.p**self.K
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % mod
        return acc

    @property
    def degree(self) -> int:
        nz = [i for i, c in enumerate(self.coeffs) if c]
        return nz[-1] if nz else -1

    def lambda_invariant(self):
        """Index of the first unit coefficient (None if every coefficient is in pZ_p)."""
        for i, c in enumerate(self.coeffs):
            if c % self.p:
                return i
        return None

    def is_distinguished(self) -> bool:
        d = self.degree
        return d >= 0 and self.coeffs[d] == 1 and all(c % self.p == 0 for c in self.coeffs[:d])

    def constant_valuation(self):
        return vp(self.coeffs[0], self.p)

    def poly(self) -> list[int]:
        return list(self.coeffs[: self.degree + 1]) or [0]


# ---------------------------------------------------------------------------
# exact integer polynomials (low degree first)


def omega_int(n: int, p: int) -> list[int]:
    """(1 + T)^(p^n) - 1 with exact integer coefficients."""
    q = p**n
    c = [math.comb(q, k) for k in range(q + 1)]
    c[0] -= 1
    return c


def nu_int(n: int, m: int, p: int) -> list[int]:
    """omega_n / omega_m, exact.  nu(n, -1) is taken to mean omega_n / T."""
    num = omega_int(n, p)
    den = [0, 1] if m == -1 else omega_int(m, p)
    return _exact_div(num, den)


def _exact_div(num, den):
    num = list(num)
    while den and den[-1] == 0:
        den = den[:-1]
    dd = len(den) - 1
    lead = den[-1]
    q = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c % lead:
            raise ArithmeticError("inexact polynomial division")
        c //= lead
        q[i - dd] = c
        if c:
            for j in range(dd + 1):
                num[i - dd + j] -= c * den[j]
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")
    return q


def _check_degree(n, p, N):
    if p**n > N - 1:
        raise OverflowError(f"omega_{n} needs degree {p ** n} but the truncation is T^{N}")


def omega(n: int, p: int, K: int, N: int) -> IwasawaPoly:
    _check_degree(n, p, N)
    return IwasawaPoly(p, K, N, tuple(omega_int(n, p)))


def nu(n: int, m: int, p: int, K: int, N: int) -> IwasawaPoly:
    if n < m:
        raise ValueError("need n >= m")
    _check_degree(n, p, N)
    return IwasawaPoly(p, K, N, tuple(nu_int(n, m, p)))


def _polymod(a, g, mod):
    """a mod g (g monic), coefficients mod `mod`."""
    d = len(g) - 1
    a = [x % mod for x in a]
    if d == 0:
        return []
    for i in range(len(a) - 1, d - 1, -1):
        c = a[i]
        if c:
            for j in range(d + 1):
                a[i - d + j] = (a[i - d + j] - c * g[j]) % mod
    a = a[:d]
    return a + [0] * (d - len(a))


def _polymul(a, b, mod):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return [x % mod for x in out]


# ---------------------------------------------------------------------------
# Weierstrass preparation for polynomial inputs


def weierstrass_factor(f: IwasawaPoly):
    """Split the polynomial f as P * U, P distinguished, U a unit of Lambda.

    Returns (P, U) as integer coefficient lists mod p^K.  Hensel lifting of
    f = T^lam * (f / T^lam) mod p.
    """
    p, K = f.p, f.K
    mod = p**K
    lam = f.lambda_invariant()
    if lam is None:
        raise PrecisionExhausted("f vanishes mod p: mu > 0 or precision exhausted")
    fc = f.poly()
    if lam == 0:
        return [1], [c % mod for c in fc]
    G0 = [c % p for c in fc[lam:]]
    # t = G0^{-1} mod (p, T^lam)
    inv0 = pow(G0[0], -1, p)
    t = [0] * lam
    t[0] = inv0
    for i in range(1, lam):
        acc = sum(G0[j] * t[i - j] for j in range(1, min(i, len(G0) - 1) + 1))
        t[i] = (-acc * inv0) % p
    P = [0] * lam + [1]
    G = list(G0)
    for k in range(1, K):
        pk = p**k
        PG = _polymul(P, G, p ** (k + 1))
        e = [(a - b) % p ** (k + 1) for a, b in _zip_pad(fc, PG)]
        if any(x % pk for x in e):
            raise ArithmeticError("Hensel step lost congruence")
        e = [(x // pk) % p for x in e]
        dP = _polymul(t, e, p)[:lam]
        dP += [0] * (lam - len(dP))
        rest = [(a - b) % p for a, b in _zip_pad(e, _polymul(dP, G0, p))]
        if any(rest[:lam]):
            raise ArithmeticError("Hensel step: remainder not divisible by T^lambda")
        dG = rest[lam:]
        P = [(a + pk * b) % mod for a, b in _zip_pad(P, dP + [0])]
        G = [(a + pk * b) % mod for a, b in _zip_pad(G, dG)]
    while len(G) > 1 and G[-1] == 0:
        G.pop()
    return P[: lam + 1], G


def _zip_pad(a, b):
    n = max(len(a), len(b))
    return zip(list(a) + [0] * (n - len(a)), list(b) + [0] * (n - len(b)))


# ---------------------------------------------------------------------------
# quotient modules


@dataclass(frozen=True)
class LambdaQuotientModule:
    """Lambda / (ideal, modulus) with modulus monic (omega_n or omega_n / T)."""

    p: int
    K: int
    group_exp: int
    modulus: tuple
    ideal: tuple = field(default_factory=tuple)

    def to_group_module(self) -> GroupModule:
        p, K, mod = self.p, self.K, self.p**self.K
        g = list(self.modulus)
        d = len(g) - 1
        rows = []
        for h in self.ideal:
            h = _polymod(list(h), g, mod)
            for i in range(d):
                rows.append(_polymod([0] * i + h, g, mod))
        S = [_polymod([0] * i + [1, 1], g, mod) for i in range(d)]
        rel = np.array(rows, dtype=object).reshape(-1, d)
        return GroupModule(p, K, self.group_exp, rel, np.array(S, dtype=object).reshape(d, d), check=False)


def _as_list(h, p):
    if isinstance(h, IwasawaPoly):
        return h.poly()
    if isinstance(h, int):
        return [h]
    return list(h)


def quotient_order(ideal, n: int, p: int, K: int):
    """|Lambda / (ideal, omega_n)| via Smith form of the multiplication matrix.

    Returns the order, or ``math.inf`` if the quotient has a free part.
    """
    if not ideal:
        raise ValueError("ideal must be nonempty")
    gens = tuple(tuple(_as_list(h, p)) for h in ideal)
    M = LambdaQuotientModule(p, K, n, tuple(omega_int(n, p)), gens).to_group_module()
    return _order_or_inf(M)


def _order_or_inf(M: GroupModule):
    sf = smith_normal_form(M.relations, M.p, M.K) if M.relations.size else None
    rank = sf.rank if sf else 0
    if rank < M.gens:
        return math.inf
    v = sf.valuation_sum
    if any(x >= M.K - 2 for x in sf.valuations):
        raise PrecisionExhausted("quotient order too close to the working precision")
    return M.p**v


def bn_module(f: IwasawaPoly, n: int) -> GroupModule:
    """Lambda / (f, omega_n / T) on the basis 1, T, .., T^(lam-1) of Lambda / (P)."""
    p, K = f.p, f.K
    mod = p**K
    P, _ = weierstrass_factor(f)
    lam = len(P) - 1
    if lam == 0:
        return GroupModule(p, K, n, np.zeros((0, 0), dtype=object), np.zeros((0, 0), dtype=object), check=False)
    r = _polymod(nu_int(n, -1, p), P, mod)
    rows = [_polymod([0] * i + r, P, mod) for i in range(lam)]
    S = [_polymod([0] * i + [1, 1], P, mod) for i in range(lam)]
    return GroupModule(p, K, n, np.array(rows, dtype=object), np.array(S, dtype=object))


def bn_module_full(f: IwasawaPoly, n: int) -> GroupModule:
    """Same module on the basis 1, .., T^(p^n - 2) of Lambda / (omega_n / T)."""
    gens = (tuple(f.poly()),)
    return LambdaQuotientModule(f.p, f.K, n, tuple(nu_int(n, -1, f.p)), gens).to_group_module()


def coprimality_check(f: IwasawaPoly, n: int) -> bool:
    """True iff f and omega_n / T have no common zero (the quotient is finite)."""
    if all(c == 0 for c in f.coeffs):
        raise ValueError("f is zero at this precision")
    M = bn_module(f, n)
    if M.gens == 0:
        return True
    return _order_or_inf(M) != math.inf


def bn_model_cohomology(f: IwasawaPoly, n: int, m: int, q: int) -> FiniteAbelianGroup:
    """H^q(G_{n,m}, Lambda / (f, omega_n / T))."""
    if n <= m:
        raise ValueError("need n > m")
    if not coprimality_check(f, n):
        raise StructuralError("f and omega_n/T share a zero; the module is infinite")
    M = bn_module(f, n)
    if M.gens == 0:
        return FiniteAbelianGroup()
    return tate_cohomology(q, M, m)


@lru_cache(maxsize=32)
def _reduced_full(f: IwasawaPoly, n: int) -> GroupModule:
    return bn_module_full(f, n).reduced()


def bn_model_cohomology_full(f: IwasawaPoly, n: int, m: int, q: int) -> FiniteAbelianGroup:
    """Independent route: full p^n - 1 generator presentation, reduced by Smith form."""
    M = _reduced_full(f, n)
    if M.gens == 0:
        return FiniteAbelianGroup()
    return tate_cohomology(q, M, m)


def b0_model(f: IwasawaPoly) -> FiniteAbelianGroup:
    """Z_p / f(0)."""
    v = f.constant_valuation()
    if v == math.inf or v >= f.K - 2:
        raise PrecisionExhausted("f(0) is zero at the working precision")
    return FiniteAbelianGroup.cyclic(f.p**v) if v else FiniteAbelianGroup()


def synthetic_f(p: int, K: int, N: int, u: int, e: int) -> IwasawaPoly:
    """T - u p^e."""
    return IwasawaPoly(p, K, N, (-u * p**e, 1))


def required_level(v: int, m: int) -> int:
    """Least n with p^(n-m) >= p^(v+1)."""
    return m + v + 1
