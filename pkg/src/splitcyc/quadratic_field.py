"""Class groups, fundamental units and p-part checks for real quadratic fields.

Class groups come from cycles of reduced indefinite binary quadratic forms
(b^2 - 4ac = D).  Each rho-cycle is one proper (narrow) class; the wide group is
the quotient by the class of (-1, b, (D - b^2)/4) when the fundamental unit has
norm +1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from .characters import is_fundamental_discriminant, quadratic_character
from .cohomology import FiniteAbelianGroup
from .cyclotomic_units import QuadraticNumber, base_unit, embed_quadratic, eta

__all__ = [
    "RealQuadraticField",
    "ClassGroupData",
    "SinnottGrasReport",
    "class_group",
    "fundamental_unit",
    "pi0_order",
    "prime_form",
    "sinnott_gras_check",
    "DESK_BOUND",
]

DESK_BOUND = 10**6


def _squarefree_part_checks(d: int) -> bool:
    from sympy import factorint

    return d > 1 and all(e == 1 for e in factorint(d).values())


@dataclass(frozen=True)
class RealQuadraticField:
    d: int
    D: int

    @classmethod
    def from_d(cls, d: int) -> "RealQuadraticField":
        if not _squarefree_part_checks(d):
            raise ValueError(f"{d} is not a squarefree integer > 1")
        return cls(d, d if d % 4 == 1 else 4 * d)

    @classmethod
    def from_discriminant(cls, D: int) -> "RealQuadraticField":
        if D <= 1 or not is_fundamental_discriminant(D):
            raise ValueError(f"{D} is not a positive fundamental discriminant")
        return cls(D if D % 4 == 1 else D // 4, D)

    @property
    def conductor(self) -> int:
        return self.D

    @property
    def integral_basis(self) -> str:
        return "1, (1+sqrt(d))/2" if self.d % 4 == 1 else "1, sqrt(d)"


# ---------------------------------------------------------------------------
# fundamental unit


def fundamental_unit(d: int) -> QuadraticNumber:
    """Least unit > 1 of Q(sqrt d), as a + b sqrt(d), from the continued fraction of omega."""
    if not _squarefree_part_checks(d):
        raise ValueError(f"{d} is not a squarefree integer > 1")
    s = math.isqrt(d)
    half = d % 4 == 1
    P, Q = (1, 2) if half else (0, 1)  # omega = (P + sqrt d)/Q
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    while True:
        a = (P + s) // Q
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        P = a * Q - P
        Q = (d - P * P) // Q
        # h - k * conj(omega)
        if half:
            x = QuadraticNumber(d, Fraction(2 * h1 - k1, 2), Fraction(k1, 2))
        else:
            x = QuadraticNumber(d, Fraction(h1), Fraction(k1))
        if abs(x.norm()) == 1 and x.to_float() > 1:
            assert x.is_unit()
            return x


def _in_sqrt_D(x: QuadraticNumber, D: int) -> QuadraticNumber:
    """Rewrite a + b sqrt(d) over sqrt(D)."""
    if x.D == D:
        return x
    if D == 4 * x.D:
        return QuadraticNumber(D, x.a, x.b / 2)
    raise ValueError("radicands are incompatible")


# ---------------------------------------------------------------------------
# reduced indefinite forms


def _lt_sqrt(t: int, D: int) -> bool:
    return t < 0 or t * t < D


def _gt_sqrt(t: int, D: int) -> bool:
    return t > 0 and t * t > D


def _is_reduced(f, D) -> bool:
    a, b, _ = f
    return b > 0 and _lt_sqrt(b, D) and _lt_sqrt(2 * abs(a) - b, D) and _gt_sqrt(2 * abs(a) + b, D)


def _rho(f, D):
    a, b, c = f
    s = math.isqrt(D)
    m = 2 * abs(c)
    if _gt_sqrt(abs(c), D):
        b2 = (-b) % m
        if b2 > abs(c):
            b2 -= m
    else:
        # largest b2 = -b mod 2|c| with b2 < sqrt(D)
        b2 = s - ((s + b) % m)
    return (c, b2, (b2 * b2 - D) // (4 * c))


def _reduce(f, D):
    seen = 0
    while not _is_reduced(f, D):
        f = _rho(f, D)
        seen += 1
        if seen > 10000:
            raise ArithmeticError("form reduction did not terminate")
    return f


def _ext_gcd(a, b):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _compose(f1, f2, D):
    """Gaussian composition of primitive forms with positive leading coefficients."""
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = _ext_gcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, y2 = _ext_gcd(s, d)
        y2 = -y2
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    num = b3 * b3 - D
    if num % (4 * a3):
        raise ArithmeticError("composition produced a non-integral form")
    return (a3, b3, num // (4 * a3))


def _reduced_forms(D: int) -> list:
    s = math.isqrt(D)
    out = []
    for b in range(1, s + 1):
        if (b - D) % 2:
            continue
        q = (D - b * b) // 4  # = -a c > 0
        for A in range(1, s + b // 2 + 2):
            if q % A:
                continue
            if not (_lt_sqrt(2 * A - b, D) and _gt_sqrt(2 * A + b, D)):
                continue
            for a in (A, -A):
                c = -q // a
                if math.gcd(math.gcd(a, b), c) == 1:
                    out.append((a, b, c))
    return out


class _FormClassGroup:
    def __init__(self, D: int):
        self.D = D
        forms = _reduced_forms(D)
        self.cycle_of = {}
        self.reps = []
        for f in forms:
            if f in self.cycle_of:
                continue
            idx = len(self.reps)
            g = f
            rep = None
            while True:
                self.cycle_of[g] = idx
                if rep is None and g[0] > 0:
                    rep = g
                g = _rho(g, D)
                if g == f:
                    break
            self.reps.append(rep)
        b = D % 2
        self.identity = self.cycle_of[_reduce((1, b, (b * b - D) // 4), D)]
        self.minus_one = self.cycle_of[_reduce((-1, b, (D - b * b) // 4), D)]
        self._table = {}

    def __len__(self):
        return len(self.reps)

    def class_of(self, f) -> int:
        return self.cycle_of[_reduce(f, self.D)]

    def mul(self, i: int, j: int) -> int:
        key = (min(i, j), max(i, j))
        if key not in self._table:
            self._table[key] = self.class_of(_compose(self.reps[i], self.reps[j], self.D))
        return self._table[key]

    def order(self, i: int, modulo=frozenset()) -> int:
        """Order of class i modulo the subgroup ``modulo`` (given as a set containing identity)."""
        stop = modulo or {self.identity}
        x, k = i, 1
        while x not in stop:
            x = self.mul(x, i)
            k += 1
        return k


def _structure_from_orders(orders: list[int]) -> FiniteAbelianGroup:
    """Invariant factors of a finite abelian group from the multiset of element orders."""
    h = len(orders)
    from sympy import factorint

    divisors = []
    for ell, e in factorint(h).items():
        # counts[k] = #{x : x^(ell^k) = 1}
        counts = [sum(1 for o in orders if (ell**k) % o == 0) for k in range(e + 1)]
        ranks = [round(math.log(counts[k] / counts[k - 1], ell)) for k in range(1, e + 1)]
        # ranks[k-1] = number of cyclic ell-factors of order >= ell^k
        for k in range(1, e + 1):
            nxt = ranks[k] if k < e else 0
            divisors += [ell**k] * (ranks[k - 1] - nxt)
    return FiniteAbelianGroup(tuple(divisors))


@dataclass(frozen=True)
class ClassGroupData:
    D: int
    h: int
    narrow_h: int
    structure: FiniteAbelianGroup
    generators: tuple
    unit_norm: int
    representatives: tuple

    @property
    def divisors(self) -> tuple:
        return self.structure.divisors


@lru_cache(maxsize=64)
def _group(D: int) -> _FormClassGroup:
    return _FormClassGroup(D)


def _wide_data(D: int):
    G = _group(D)
    F = RealQuadraticField.from_discriminant(D)
    eps = fundamental_unit(F.d)
    norm = int(eps.norm())
    sub = {G.identity}
    if norm == 1:
        sub.add(G.minus_one)
    cosets = {}
    for i in range(len(G)):
        key = min(i, G.mul(i, G.minus_one)) if norm == 1 else i
        cosets.setdefault(key, i)
    return G, frozenset(sub), sorted(cosets), norm


@lru_cache(maxsize=64)
def class_group(D: int) -> ClassGroupData:
    """Wide class group of Q(sqrt D), D a positive fundamental discriminant <= 10^6."""
    if D > DESK_BOUND:
        raise ValueError(f"discriminant {D} exceeds the desk bound {DESK_BOUND}")
    RealQuadraticField.from_discriminant(D)
    G, sub, classes, norm = _wide_data(D)
    orders = [G.order(i, sub) for i in classes]
    structure = _structure_from_orders(orders)
    # generating set: add classes of largest order until the subgroup is everything
    gens = []
    span = set(sub)
    for i in sorted(classes, key=lambda i: (-G.order(i, sub), i)):
        if i in span:
            continue
        gens.append(i)
        frontier = list(span)
        span = set(span)
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = G.mul(x, g)
                if y not in span:
                    span.add(y)
                    frontier.append(y)
    h = len(classes)
    return ClassGroupData(D, h, len(G), structure, tuple(G.reps[g] for g in gens), norm,
                          tuple(G.reps[i] for i in classes))


def prime_form(D: int, p: int, conjugate: bool = False):
    """Form (p, b, c) for a prime above a split p."""
    chi = quadratic_character(D)
    if D % p == 0 or chi.value_int(p) != 1:
        raise ValueError(f"{p} does not split in Q(sqrt {D})")
    b = next(b for b in range(2 * p) if (b - D) % 2 == 0 and (b * b - D) % (4 * p) == 0)
    if conjugate:
        b = -b
    return (p, b, (b * b - D) // (4 * p))


def _p_part(n: int, p: int) -> int:
    r = 1
    while n % p == 0:
        n //= p
        r *= p
    return r


def pi0_order(D: int, p: int, conjugate: bool = False) -> int:
    """p-part of the order of the class of a prime above p in the wide class group."""
    class_group(D)
    G, sub, _, _ = _wide_data(D)
    i = G.class_of(prime_form(D, p, conjugate))
    return _p_part(G.order(i, sub), p)


# ---------------------------------------------------------------------------
# Sinnott / Gras at the base layer


@dataclass(frozen=True)
class SinnottGrasReport:
    D: int
    p: int
    h: int
    v_h: int
    exponent: int
    v_index: int
    holds: bool
    literal_eta0_trivial: bool
    unit_sign: int
    local_consistent: bool


def _vp(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _unit_exponent(xi: QuadraticNumber, eps: QuadraticNumber) -> tuple[int, int]:
    """(e, sign) with xi = sign * eps^e, verified exactly."""
    mpmath.mp.dps = 50
    sq = mpmath.sqrt(xi.D)
    lx = mpmath.log(abs(mpmath.mpf(xi.a.numerator) / xi.a.denominator + mpmath.mpf(xi.b.numerator) / xi.b.denominator * sq))
    le = mpmath.log(mpmath.mpf(eps.a.numerator) / eps.a.denominator + mpmath.mpf(eps.b.numerator) / eps.b.denominator * sq)
    e = int(mpmath.nint(lx / le))
    q = xi * eps ** (-e)
    if q.b != 0 or abs(q.a) != 1:
        raise ArithmeticError("cyclotomic unit is not +-eps^e; log ratio was not an integer")
    return e, int(q.a)


def sinnott_gras_check(D: int, p: int, K: int = 10) -> SinnottGrasReport:
    """Compare v_p(h) with v_p of the index of <-1, xi> in <-1, eps>."""
    if p == 2:
        raise ValueError("p must be odd")
    chi = quadratic_character(D)
    if D % p == 0 or chi.value_int(p) != 1:
        raise ValueError(f"scenario refused: {p} does not split in Q(sqrt {D})")
    F = RealQuadraticField.from_discriminant(D)
    cg = class_group(D)
    literal = eta(0, D, p).literal_trivial
    xi = base_unit(D)
    if xi.is_pm_one():
        raise ArithmeticError("degenerate cyclotomic unit: xi = +-1")
    eps = _in_sqrt_D(fundamental_unit(F.d), D)
    e, sign = _unit_exponent(xi, eps)
    # the same relation after embedding at a prime above p
    N = p**K
    lhs = embed_quadratic(xi, p, K).coeffs[0]
    base = embed_quadratic(eps, p, K).coeffs[0]
    rhs = sign * pow(base, e, N) % N
    v_h, v_e = _vp(cg.h, p), _vp(e, p)
    return SinnottGrasReport(D, p, cg.h, v_h, e, v_e, v_h == v_e, literal, sign, lhs == rhs)
