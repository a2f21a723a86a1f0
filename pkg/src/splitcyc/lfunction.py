"""Two independent evaluators of the Kubota-Leopoldt value L_p(1, chi).

* ``lp_at_one_log``: the closed formula with Gauss sum and p-adic logarithms of
  1 - zeta_f^a, computed in the unramified extension containing zeta_f.
* ``lp_at_one_interpolate``: exact values L_p(1-n, chi) at n = (p-1)j from
  generalized Bernoulli numbers, Newton extrapolation to T = 0 in the
  variable T = kappa^s - 1 (kappa = 1 + p).

Both use the Teichmuller embedding for character values.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .characters import DirichletCharacter, generalized_bernoulli, root_of_unity_zp
from .iwasawa import IwasawaPoly
from .padic import PadicElement, padic_log, unramified_embed_root_of_unity, valuation, vp

__all__ = [
    "LpValue",
    "lp_at_one_log",
    "lp_at_one_interpolate",
    "newton_extrapolate",
    "certified_interpolation_precision",
    "interpolation_nodes",
    "bernoulli_lp_value",
]


@dataclass(frozen=True)
class LpValue:
    chi: str
    p: int
    value: PadicElement
    precision: int
    method: str
    series: IwasawaPoly | None = None
    divided_difference_valuations: tuple = ()
    notes: tuple = field(default=())

    @property
    def valuation(self):
        return valuation(self.value)

    def residue(self) -> int:
        return self.value.coeffs[0]


def describe(chi: DirichletCharacter) -> str:
    return f"chi(mod {chi.modulus}, order {chi.order})"


def _check_char(chi: DirichletCharacter, p: int):
    if not chi.is_even():
        raise ValueError("character must be even")
    if chi.is_trivial():
        raise ValueError("character must be nontrivial")
    if chi.modulus % p == 0:
        raise ValueError(f"{p} divides the conductor")
    if (p - 1) % chi.order:
        raise ValueError("character values must lie in Z_p (order dividing p - 1)")


def _unit_log(u: PadicElement) -> PadicElement:
    """Iwasawa logarithm of a unit: log(u^(q-1)) / (q-1)."""
    q = u.p**u.degree
    lg = padic_log(u ** (q - 1))
    return lg * pow(q - 1, -1, lg.N)


def lp_at_one_log(chi: DirichletCharacter, p: int, K: int, euler_factor: bool = True) -> LpValue:
    """-(1 - chi(p)/p) (tau(chi)/f) sum_a conj(chi)(a) log_p(1 - zeta_f^a).

    With ``euler_factor=False`` the factor (1 - chi(p)/p) is dropped.
    """
    _check_char(chi, p)
    f = chi.modulus
    W = K + 2
    NW = p**W
    d, zeta = unramified_embed_root_of_unity(f, p, W)
    one = zeta.one()
    # group 1 - zeta^a by character exponent, so only o logarithms are needed
    prods = {}
    gauss = zeta.zero()
    power = one
    for a in range(1, f):
        power = power * zeta
        e = chi(a)
        if e is None:
            continue
        prods[e] = prods.get(e, one) * (one - power)
        gauss = gauss + power * chi.value_zp(a, p, W)
    S = zeta.zero()
    for e, prod in sorted(prods.items()):
        conj_val = pow(root_of_unity_zp(chi.order, p, W), -e, NW) if chi.order > 1 else 1
        S = S + _unit_log(prod) * conj_val
    total = gauss * S * pow(f, -1, NW)
    if euler_factor:
        chip = chi.value_zp(p, p, W)
        total = (total * (p - chip)).divide_by_p_power(1)
    total = -total
    if not total.is_rational():
        raise ArithmeticError("L-value did not descend to Z_p: internal inconsistency")
    value = PadicElement(p, K, (total.coeffs[0],))
    return LpValue(describe(chi), p, value, K, "log-formula", notes=(f"unramified degree {d}",))


# ---------------------------------------------------------------------------
# interpolation


def interpolation_nodes(p: int, J: int, kappa: int | None = None) -> list[int]:
    kappa = kappa or 1 + p
    return [kappa ** ((p - 1) * j) - 1 for j in range(1, J + 1)]


def certified_interpolation_precision(p: int, J: int) -> int:
    """Valuation of prod_j x_j: the extrapolation error bound at T = 0."""
    return sum(1 + int(vp(j, p)) for j in range(1, J + 1))


def bernoulli_lp_value(chi: DirichletCharacter, n: int, p: int) -> tuple:
    """L_p(1-n, chi) = -(1 - p^(n-1)) B_{n,chi} / n for n = 0 mod p-1, chi(p) = 1.

    Returned as the coefficient vector of an element of Q(zeta_order).
    """
    B = generalized_bernoulli(n, chi)
    factor = (1 - Fraction(p) ** (n - 1)) / n
    return tuple(-factor * c for c in B.coeffs)


def newton_extrapolate(nodes, values, at=0):
    """Newton divided differences on exact data.

    ``values`` are tuples of Fractions (vectors); returns (value at `at`,
    list of divided-difference vectors a_k = f[x_1..x_k]).
    """
    n = len(nodes)
    table = [tuple(Fraction(c) for c in v) for v in values]
    coeffs = [table[0]]
    for level in range(1, n):
        table = [
            tuple((a - b) / (nodes[i + level] - nodes[i]) for a, b in zip(table[i + 1], table[i]))
            for i in range(n - level)
        ]
        coeffs.append(table[0])
    width = len(values[0])
    result = [Fraction(0)] * width
    basis = Fraction(1)
    for k, a in enumerate(coeffs):
        result = [r + basis * c for r, c in zip(result, a)]
        basis *= Fraction(at - nodes[k])
    return tuple(result), coeffs


def _newton_to_poly(nodes, coeffs):
    """Expand sum_k a_k prod_{i<k} (T - x_i) into power-basis vectors."""
    width = len(coeffs[0])
    poly = [[Fraction(0)] * width for _ in range(len(coeffs))]
    basis = [Fraction(1)]
    for k, a in enumerate(coeffs):
        for deg, b in enumerate(basis):
            for w in range(width):
                poly[deg][w] += b * a[w]
        new = [Fraction(0)] * (len(basis) + 1)
        for deg, b in enumerate(basis):
            new[deg + 1] += b
            new[deg] -= nodes[k] * b
        basis = new
    return poly


def _vec_to_zp(vec, order, p, K):
    from .characters import CyclotomicRational

    return CyclotomicRational(order, tuple(vec)).to_zp(p, K)


def _vec_valuation(vec, p):
    v = math.inf
    for c in vec:
        if c:
            v = min(v, vp(c.numerator, p) - vp(c.denominator, p))
    return v


def lp_at_one_interpolate(chi: DirichletCharacter, p: int, K: int, J: int) -> LpValue:
    """f(0) = L_p(1, chi) from J exact values f(kappa^((p-1)j) - 1) = L_p(1-(p-1)j, chi)."""
    _check_char(chi, p)
    if J < 2:
        raise ValueError("need at least two interpolation points")
    if chi.value_zp(p, p, K) != 1:
        raise ValueError("interpolation evaluator assumes chi(p) = 1")
    nodes = interpolation_nodes(p, J)
    values = [bernoulli_lp_value(chi, (p - 1) * j, p) for j in range(1, J + 1)]
    at0, coeffs = newton_extrapolate(nodes, values)
    certified = min(K, certified_interpolation_precision(p, J))
    notes = []
    if K - certified > K / 2:
        warnings.warn(f"interpolation certifies only {certified} of {K} digits", RuntimeWarning)
        notes.append("degraded precision")
    dd_vals = tuple(_vec_valuation(a, p) for a in coeffs)
    if any(v < 0 for v in dd_vals):
        raise ArithmeticError("divided differences are not p-integral")
    order = max(chi.order, 1)
    value = PadicElement(p, certified, (_vec_to_zp(at0, order, p, certified),))
    poly = _newton_to_poly(nodes, coeffs)
    series = IwasawaPoly(p, K, len(poly) + 1, tuple(_vec_to_zp(v, order, p, K) for v in poly))
    return LpValue(describe(chi), p, value, certified, "interpolation", series, dd_vals, tuple(notes))


def lp_value_at_negative(chi: DirichletCharacter, n: int, p: int, K: int) -> int:
    """L_p(1-n, chi) mod p^K for n = 0 mod p-1."""
    return _vec_to_zp(bernoulli_lp_value(chi, n, p), max(chi.order, 1), p, K)

