"""Cyclotomic numbers and the units eta_n of a real quadratic field in the
cyclotomic Z_p-tower, with exact norm relations and the local index at p.

Elements of Q(zeta_m) are stored in Z[x]/(x^m - 1); two of them are equal in
Q(zeta_m) when their difference is killed by (x^m - 1)/Phi_m.  Products of big
integer vectors use Kronecker substitution so CPython's long multiplication
does the heavy lifting.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy import Poly, cyclotomic_poly, symbols

from .characters import DirichletCharacter, quadratic_character
from .cohomology import (
    PrecisionExhausted,
    augmentation_ideal,
    tate_cohomology,
    trivial_module,
)
from .padic import PadicElement, PadicError, hensel_root, padic_log, teichmuller, valuation

__all__ = [
    "CyclotomicElement",
    "QuadraticNumber",
    "EtaUnit",
    "cyclotomic_number",
    "layer_subgroup",
    "eta",
    "base_unit",
    "to_quadratic",
    "norm_down",
    "norm_relation_check",
    "NormRelationReport",
    "embed_quadratic",
    "embed_eta_local",
    "B0Data",
    "b0_data",
    "b0_order",
    "cyclotomic_unit_cohomology",
]


# ---------------------------------------------------------------------------
# big-integer vector arithmetic


def _pack(vec, nbytes):
    return int.from_bytes(b"".join(int(x).to_bytes(nbytes, "little") for x in vec), "little")


def _unpack(X, nbytes, count):
    raw = X.to_bytes(nbytes * count, "little")
    return [int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") for i in range(count)]


def _kron_mul_nonneg(a, b, nbytes):
    count = len(a) + len(b) - 1
    return _unpack(_pack(a, nbytes) * _pack(b, nbytes), nbytes, count)


def _kron_mul(a, b):
    """Exact product of integer polynomials (lists, low degree first)."""
    if not len(a) or not len(b):
        return []
    ma = max(abs(int(x)) for x in a)
    mb = max(abs(int(x)) for x in b)
    if ma == 0 or mb == 0:
        return [0] * (len(a) + len(b) - 1)
    bits = ma.bit_length() + mb.bit_length() + min(len(a), len(b)).bit_length() + 1
    nbytes = (bits + 7) // 8
    ap = [max(int(x), 0) for x in a]
    an = [max(-int(x), 0) for x in a]
    bp = [max(int(x), 0) for x in b]
    bn = [max(-int(x), 0) for x in b]
    out = [0] * (len(a) + len(b) - 1)
    for sa, xa in ((1, ap), (-1, an)):
        if not any(xa):
            continue
        for sb, xb in ((1, bp), (-1, bn)):
            if not any(xb):
                continue
            s = sa * sb
            for i, c in enumerate(_kron_mul_nonneg(xa, xb, nbytes)):
                if c:
                    out[i] += s * c
    return out


@lru_cache(maxsize=None)
def _cyclotomic_coeffs(m: int) -> tuple:
    X = symbols("X")
    return tuple(int(c) for c in reversed(Poly(cyclotomic_poly(m, X), X).all_coeffs()))


@lru_cache(maxsize=None)
def _cofactor(m: int) -> tuple:
    """(x^m - 1) / Phi_m, low degree first."""
    X = symbols("X")
    q = Poly(X**m - 1, X).quo(Poly(cyclotomic_poly(m, X), X))
    return tuple(int(c) for c in reversed(q.all_coeffs()))


@dataclass(frozen=True)
class CyclotomicElement:
    """Element of Z[x]/(x^m - 1); x stands for a primitive m-th root of unity."""

    level: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.level:
            raise ValueError("coefficient vector must have length equal to the level")

    @classmethod
    def one(cls, m: int) -> "CyclotomicElement":
        return cls.monomial(m, 0)

    @classmethod
    def monomial(cls, m: int, k: int, c: int = 1) -> "CyclotomicElement":
        v = [0] * m
        v[k % m] = c
        return cls(m, tuple(v))

    @classmethod
    def one_minus(cls, m: int, a: int) -> "CyclotomicElement":
        if a % m == 0:
            raise ValueError("1 - zeta^a vanishes for a = 0 mod m")
        v = [0] * m
        v[0] = 1
        v[a % m] -= 1
        return cls(m, tuple(v))

    def _check(self, other):
        if other.level != self.level:
            raise ValueError("levels differ")

    def __add__(self, other):
        self._check(other)
        return CyclotomicElement(self.level, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return CyclotomicElement(self.level, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, c: int) -> "CyclotomicElement":
        return CyclotomicElement(self.level, tuple(c * a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        m = self.level
        full = _kron_mul(self.coeffs, other.coeffs)
        out = list(full[:m])
        for i in range(m, len(full)):
            out[i - m] += full[i]
        return CyclotomicElement(m, tuple(out))

    def times_one_minus(self, a: int) -> "CyclotomicElement":
        """self * (1 - x^a), a cyclic shift and subtraction."""
        c = np.array(self.coeffs, dtype=object)
        return CyclotomicElement(self.level, tuple(c - np.roll(c, a % self.level)))

    def galois(self, a: int) -> "CyclotomicElement":
        """sigma_a: x -> x^a, gcd(a, m) = 1."""
        m = self.level
        if math.gcd(a, m) != 1:
            raise ValueError(f"{a} is not a unit mod {m}")
        out = [0] * m
        for i, c in enumerate(self.coeffs):
            if c:
                out[i * a % m] += c
        return CyclotomicElement(m, tuple(out))

    def inflate(self, k: int) -> "CyclotomicElement":
        """Same number at level k*m (x -> x^k)."""
        m = self.level
        out = [0] * (m * k)
        for i, c in enumerate(self.coeffs):
            out[i * k] = c
        return CyclotomicElement(m * k, tuple(out))

    def congruent(self, other: "CyclotomicElement") -> bool:
        """Equality as elements of Q(zeta_m)."""
        diff = self - other
        if not any(diff.coeffs):
            return True
        psi = CyclotomicElement(self.level, _cofactor(self.level) + (0,) * (self.level - len(_cofactor(self.level))))
        return not any((diff * psi).coeffs)

    def reduced(self) -> tuple:
        """Coordinates on 1, x, ..., x^(phi(m)-1) after reduction mod Phi_m."""
        phi = _cyclotomic_coeffs(self.level)
        d = len(phi) - 1
        c = np.array(self.coeffs, dtype=object)
        ph = np.array(phi, dtype=object)
        for i in range(len(c) - 1, d - 1, -1):
            t = c[i]
            if t:
                c[i - d:i + 1] -= t * ph
        return tuple(int(x) for x in c[:d])

    def max_bits(self) -> int:
        return max((abs(int(c)).bit_length() for c in self.coeffs), default=0)


def _is_subgroup(H, m):
    Hs = set(h % m for h in H)
    return 1 in Hs and all(math.gcd(h, m) == 1 for h in Hs) and all((a * b) % m in Hs for a in Hs for b in Hs)


def cyclotomic_number(m: int, a: int, H, check: bool = True) -> CyclotomicElement:
    """prod_{h in H} (1 - zeta_m^(a h)): the norm of 1 - zeta_m^a to the fixed field of H."""
    if m <= 1:
        raise ValueError("level must exceed 1")
    if a % m == 0:
        raise ValueError("a = 0 mod m gives 1 - 1 = 0")
    H = sorted(set(h % m for h in H))
    if check and len(H) < 2000 and not _is_subgroup(H, m):
        raise ValueError("H is not a subgroup of (Z/m)^x")
    x = CyclotomicElement.one(m)
    for h in H:
        x = x.times_one_minus(a * h)
    return x


# ---------------------------------------------------------------------------
# the quadratic field


@dataclass(frozen=True)
class QuadraticNumber:
    """a + b sqrt(D) with rational a, b."""

    D: int
    a: Fraction
    b: Fraction

    def __mul__(self, o):
        return QuadraticNumber(self.D, self.a * o.a + self.D * self.b * o.b, self.a * o.b + self.b * o.a)

    def conjugate(self):
        return QuadraticNumber(self.D, self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - self.D * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def inverse(self):
        n = self.norm()
        return QuadraticNumber(self.D, self.a / n, -self.b / n)

    def __truediv__(self, o):
        return self * o.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        r = QuadraticNumber(self.D, Fraction(1), Fraction(0))
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def __neg__(self):
        return QuadraticNumber(self.D, -self.a, -self.b)

    def is_integral(self) -> bool:
        t, n = self.trace(), self.norm()
        return t.denominator == 1 and n.denominator == 1

    def is_unit(self) -> bool:
        return self.is_integral() and abs(self.norm()) == 1

    def is_pm_one(self) -> bool:
        return self.b == 0 and abs(self.a) == 1

    def to_float(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.D)


def _tau_multiplier(f: int, rest: int, chi: DirichletCharacter) -> int:
    """c = a0 mod f with chi(a0) = -1, c = 1 mod rest: the nontrivial element of Delta."""
    a0 = next(a for a in range(2, f) if chi(a) == 1)
    if rest == 1:
        return a0
    # CRT
    m = f * rest
    return (a0 * rest * pow(rest, -1, f) + f * pow(f, -1, rest)) % m


def _gauss_element(chi: DirichletCharacter, m: int) -> CyclotomicElement:
    f = chi.modulus
    k = m // f
    v = [0] * m
    for a in range(1, f):
        if chi(a) is not None:
            v[a * k] += chi.value_int(a)
    return CyclotomicElement(m, tuple(v))


def to_quadratic(x: CyclotomicElement, D: int) -> QuadraticNumber:
    """Write an element of Q(sqrt D) inside Q(zeta_m) as a + b sqrt(D).

    sqrt(D) is the Gauss sum sum_a chi(a) zeta_D^a (positive at zeta = e^{2 pi i/D}).
    Raises ValueError when x does not lie in Q(sqrt D).
    """
    chi = quadratic_character(D)
    m = x.level
    if m % D or math.gcd(D, m // D) != 1:
        raise ValueError("level must be D times a number prime to D")
    c = _tau_multiplier(D, m // D, chi)
    tx = x.galois(c)
    g = _gauss_element(chi, m)
    tr = (x + tx).reduced()
    sk = ((x - tx) * g).reduced()
    if any(tr[1:]) or any(sk[1:]):
        raise ValueError("element is not fixed by the subgroup fixing Q(sqrt D)")
    q = QuadraticNumber(D, Fraction(tr[0], 2), Fraction(sk[0], 2 * D))
    # back-substitution: 2D x = D tr + sk g
    lhs = x.scale(2 * D)
    rhs = CyclotomicElement.monomial(m, 0, D * tr[0]) + g.scale(sk[0])
    if not lhs.congruent(rhs):
        raise ValueError("element is not in Q(sqrt D)")
    return q


# ---------------------------------------------------------------------------
# eta_n


def _split_prime_check(D: int, p: int) -> DirichletCharacter:
    if p == 2 or p < 2 or any(p % d == 0 for d in range(2, int(math.isqrt(p)) + 1)):
        raise ValueError("p must be an odd prime")
    chi = quadratic_character(D)
    if D % p == 0:
        raise ValueError(f"{p} ramifies in Q(sqrt {D})")
    if chi.value_int(p) != 1:
        raise ValueError(f"{p} is inert in Q(sqrt {D}); the split hypothesis chi(p) = 1 fails")
    return chi


def layer_subgroup(D: int, p: int, n: int) -> list[int]:
    """Gal(Q(zeta_{D p^(n+1)}) / F_n) as residues: chi(a) = 1 and a^(p-1) = 1 mod p^(n+1)."""
    chi = quadratic_character(D)
    pn = p ** (n + 1)
    M = D * pn
    return [a for a in range(1, M) if math.gcd(a, M) == 1 and chi(a) == 0 and pow(a, p - 1, pn) == 1]


@dataclass(frozen=True)
class EtaUnit:
    """eta_n = A_n / tau(A_n) with A_n the norm of 1 - zeta_{f p^(n+1)} to F_n.

    ``value`` is the unit in F used at the base layer (see ``base_unit``);
    ``literal_trivial`` records that the level-0 norm collapses to 1 when p splits.
    """

    D: int
    f: int
    p: int
    n: int
    level: int
    num: CyclotomicElement
    den: CyclotomicElement
    value: QuadraticNumber | None = None
    literal_trivial: bool = False


def base_unit(D: int) -> QuadraticNumber:
    """xi = N_{Q(zeta_D)/F}(1 - zeta_D)^(1 - tau), a unit of F."""
    chi = quadratic_character(D)
    H = [a for a in range(1, D) if chi(a) == 0]
    B = to_quadratic(cyclotomic_number(D, 1, H), D)
    xi = B / B.conjugate()
    if not xi.is_unit():
        raise ArithmeticError("base cyclotomic number is not a unit")
    return xi


@lru_cache(maxsize=16)
def eta(n: int, D: int, p: int) -> EtaUnit:
    chi = _split_prime_check(D, p)
    M = D * p ** (n + 1)
    H = layer_subgroup(D, p, n)
    A = cyclotomic_number(M, 1, H, check=False)
    c = _tau_multiplier(D, p ** (n + 1), chi)
    tA = A.galois(c)
    value = None
    literal_trivial = False
    if n == 0:
        literal_trivial = A.congruent(tA)
        value = base_unit(D)
    return EtaUnit(D, D, p, n, M, A, tA, value, literal_trivial)


def norm_down(e: EtaUnit, m: int) -> tuple[CyclotomicElement, CyclotomicElement]:
    """N_{F_n/F_m}(eta_n) as a (num, den) pair at level f p^(n+1).

    Gal(F_n/F_m) acts through sigma_a, a = 1 mod f, a = (1+p)^(p^m k) mod p^(n+1).
    """
    if not 0 <= m <= e.n:
        raise ValueError("need 0 <= m <= n")
    p, f = e.p, e.f
    pn = p ** (e.n + 1)
    gen = pow(1 + p, p**m, pn)
    num, den = e.num, e.den
    nnum, nden = CyclotomicElement.one(e.level), CyclotomicElement.one(e.level)
    g = 1
    for _ in range(p ** (e.n - m)):
        a = (g * f * pow(f, -1, pn) + pn * pow(pn, -1, f)) % e.level if f > 1 else g
        nnum = nnum * num.galois(a)
        nden = nden * den.galois(a)
        g = g * gen % pn
    return nnum, nden


@dataclass(frozen=True)
class NormRelationReport:
    D: int
    p: int
    n: int
    m: int
    level: int
    holds: bool
    max_bits: int
    seconds: float


def norm_relation_check(D: int, p: int, n: int, m: int | None = None) -> NormRelationReport:
    """Exact check of N^n_m(eta_n) = eta_m in Q(zeta_{f p^(n+1)})."""
    m = n - 1 if m is None else m
    t0 = time.perf_counter()
    top = eta(n, D, p)
    low = eta(m, D, p)
    nn, nd = norm_down(top, m)
    k = p ** (n - m)
    lhs = nn * low.den.inflate(k)
    rhs = nd * low.num.inflate(k)
    holds = lhs.congruent(rhs)
    bits = max(nn.max_bits(), nd.max_bits())
    return NormRelationReport(D, p, n, m, top.level, holds, bits, time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# local embedding and the base-layer index


def _sqrt_root(D: int, p: int, K: int, conjugate: bool) -> int:
    r0 = min(r for r in range(1, p) if (r * r - D) % p == 0)
    r = hensel_root([-D, 0, 1], r0, p, K).coeffs[0]
    return (-r) % p**K if conjugate else r


def embed_quadratic(x: QuadraticNumber, p: int, K: int, conjugate: bool = False) -> PadicElement:
    """Image under sqrt(D) -> the Hensel root lifting the least r with r^2 = D mod p."""
    N = p**K
    r = _sqrt_root(x.D, p, K, conjugate)
    total = 0
    for c, w in ((x.a, 1), (x.b, r)):
        if c.denominator % p == 0:
            raise PadicError("element is not p-integral")
        total += c.numerator * pow(c.denominator, -1, N) * w
    return PadicElement(p, K, (total % N,))


def embed_eta_local(e: EtaUnit, p: int, K: int, conjugate: bool = False) -> PadicElement:
    if e.n != 0:
        raise NotImplementedError("local embedding is only provided at the base layer")
    return embed_quadratic(e.value, p, K, conjugate)


@dataclass(frozen=True)
class B0Data:
    D: int
    p: int
    K: int
    order: int
    log_valuation: int
    unit_residue: int


def b0_data(D: int, p: int, K: int) -> B0Data:
    """|U_0^1 / <xi~>| = p^(v(log xi~) - 1) with xi~ the 1-unit part of xi."""
    _split_prime_check(D, p)
    xi = embed_eta_local(eta(0, D, p), p, K)
    if valuation(xi) != 0:
        raise ArithmeticError("cyclotomic unit is not a local unit")
    one_unit = xi * teichmuller(xi.coeffs[0], p, K).inverse()
    v = valuation(padic_log(one_unit))
    if v >= K - 2:
        raise PrecisionExhausted(f"log valuation >= {K - 2}; raise the precision")
    return B0Data(D, p, K, p ** (v - 1), v, xi.coeffs[0])


def b0_order(D: int, p: int, K: int) -> int:
    return b0_data(D, p, K).order


def cyclotomic_unit_cohomology(p: int, K: int, n: int, m: int = 0) -> dict:
    """Tate cohomology of Gal(F_n/F_m) on the models <eta_0> = Z_p and <eta_n> = I_G."""
    if not 0 <= m < n:
        raise ValueError("need 0 <= m < n")
    Zp = trivial_module(p, K, n)
    IG = augmentation_ideal(p, K, n)
    return {
        ("eta_0", 0): tate_cohomology(0, Zp, m),
        ("eta_0", -1): tate_cohomology(-1, Zp, m),
        ("eta_n", 0): tate_cohomology(0, IG, m),
        ("eta_n", -1): tate_cohomology(-1, IG, m),
    }
