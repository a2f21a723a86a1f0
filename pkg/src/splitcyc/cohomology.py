"""Tate cohomology of finitely generated Z_p[G]-modules, G cyclic of order p^t.

A module is presented as Z_p^g modulo the row span of a relation matrix,
with the generator sigma of G acting on row vectors by x -> x @ S.  All
entries are known mod p^K; pivots of valuation >= K count as zero, which
is how Z_p-free parts survive the truncation.  Every computed order is
checked against p^(K-2) so that a large finite group cannot be mistaken for
a free one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .smith import matmul_mod, matpow_mod, smith_normal_form, span_invariants

__all__ = [
    "FiniteAbelianGroup",
    "GroupModule",
    "PrecisionExhausted",
    "StructuralError",
    "tate_cohomology",
    "herbrand_check",
    "eigenspace_cohomology_commutes",
    "subquotient",
    "preimage",
    "regular_module",
    "trivial_module",
    "augmentation_ideal",
]


class PrecisionExhausted(ArithmeticError):
    """A result is too close to p^K to be certified."""


class StructuralError(ValueError):
    """Inconsistent module presentation or unsupported input."""


@dataclass(frozen=True, order=True)
class FiniteAbelianGroup:
    """Finite abelian p-group by its elementary divisors, increasing."""

    divisors: tuple[int, ...] = ()

    def __post_init__(self):
        divs = tuple(sorted(int(d) for d in self.divisors if d != 1))
        if any(d <= 0 for d in divs):
            raise ValueError("divisors must be positive")
        object.__setattr__(self, "divisors", divs)

    @property
    def order(self) -> int:
        out = 1
        for d in self.divisors:
            out *= d
        return out

    def is_trivial(self) -> bool:
        return not self.divisors

    def is_cyclic(self) -> bool:
        return len(self.divisors) <= 1

    def __str__(self):
        if not self.divisors:
            return "0"
        return " x ".join(f"C{d}" for d in self.divisors)

    @classmethod
    def cyclic(cls, n: int) -> "FiniteAbelianGroup":
        return cls((n,))


def _as_rows(M, N, g):
    arr = np.array(M, dtype=object).reshape(-1, g) if np.size(M) else np.zeros((0, g), dtype=object)
    arr = arr % N
    return arr


@dataclass(frozen=True)
class GroupModule:
    """Z_p[G]-module: Z_p^g / rowspan(relations), sigma acting by ``action``.

    ``group_exp`` is t with |G| = p^t.  An optional commuting automorphism
    ``delta`` of order ``delta_order`` models a prime-to-p group Delta.
    """

    p: int
    K: int
    group_exp: int
    relations: np.ndarray
    action: np.ndarray
    delta: np.ndarray | None = None
    delta_order: int = 1
    check: bool = field(default=True, compare=False)

    def __post_init__(self):
        N = self.p**self.K
        S = np.array(self.action, dtype=object) % N
        g = S.shape[0]
        if S.shape != (g, g):
            raise StructuralError("action must be square")
        dt = np.int64 if N * N * max(g, 1) < 2**62 else object
        R = _as_rows(self.relations, N, g).astype(dt)
        S = S.astype(dt)
        object.__setattr__(self, "relations", R)
        object.__setattr__(self, "action", S)
        if self.delta is not None:
            object.__setattr__(self, "delta", (np.array(self.delta, dtype=object) % N).astype(dt))
        for arr in (R, S, self.delta):
            if arr is not None:
                arr.flags.writeable = False
        if self.check:
            self.validate()

    @property
    def gens(self) -> int:
        return self.action.shape[0]

    @property
    def N(self) -> int:
        return self.p**self.K

    def _in_span(self, rows) -> bool:
        rows = np.asarray(rows)
        if rows.size == 0:
            return True
        base = span_invariants(self.relations, self.p, self.K)
        both = span_invariants(np.vstack([self.relations, rows]) if self.relations.size else rows, self.p, self.K)
        return base == both

    def validate(self):
        N, g = self.N, self.gens
        if self.relations.size and not self._in_span(matmul_mod(self.relations, self.action, N)):
            raise StructuralError("relations are not stable under the group action")
        ident = np.eye(g, dtype=self.action.dtype)
        top = matpow_mod(self.action, self.p**self.group_exp, N)
        if not self._in_span((top - ident) % N):
            raise StructuralError("sigma^(p^t) does not act as the identity")
        if self.delta is not None:
            if not self._in_span((matmul_mod(self.delta, self.action, N) - matmul_mod(self.action, self.delta, N)) % N):
                raise StructuralError("Delta and G actions do not commute")
            if self.relations.size and not self._in_span(matmul_mod(self.relations, self.delta, N)):
                raise StructuralError("relations are not Delta-stable")
            if not self._in_span((matpow_mod(self.delta, self.delta_order, N) - ident) % N):
                raise StructuralError("delta has the wrong order")

    def is_finite(self) -> bool:
        rank, _ = span_invariants(self.relations, self.p, self.K)
        return rank == self.gens

    def structure(self) -> tuple[int, FiniteAbelianGroup]:
        """(free Z_p-rank, torsion subgroup)."""
        if self.relations.size == 0:
            return self.gens, FiniteAbelianGroup()
        sf = smith_normal_form(self.relations, self.p, self.K)
        tors = FiniteAbelianGroup(tuple(self.p**v for v in sf.valuations if v > 0))
        _guard(tors, self.K)
        return self.gens - sf.rank, tors

    def order(self) -> int:
        free, tors = self.structure()
        if free:
            raise StructuralError("module is infinite")
        return tors.order

    def reduced(self) -> "GroupModule":
        """Equivalent presentation with diagonal relations and no unit generators."""
        p, K, N = self.p, self.K, self.N
        g = self.gens
        if self.relations.size == 0:
            return self
        sf = smith_normal_form(self.relations, p, K, right=True)
        keep = [j for j in range(g) if j >= sf.rank or sf.valuations[j] > 0]
        V, Vi = sf.V, sf.V_inv

        def conj(A):
            return matmul_mod(matmul_mod(Vi, A, N), V, N)[np.ix_(keep, keep)]

        rels = []
        for j in keep:
            if j < sf.rank:
                row = [0] * len(keep)
                row[keep.index(j)] = p ** sf.valuations[j]
                rels.append(row)
        S = conj(self.action)
        D = conj(self.delta) if self.delta is not None else None
        rel_arr = np.array(rels, dtype=object).reshape(len(rels), len(keep))
        return GroupModule(p, K, self.group_exp, rel_arr, S, D, self.delta_order, check=False)

    def direct_sum(self, other: "GroupModule") -> "GroupModule":
        if (self.p, self.K, self.group_exp) != (other.p, other.K, other.group_exp):
            raise StructuralError("incompatible modules")
        g1, g2 = self.gens, other.gens

        def block(a, b):
            out = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=object)
            out[: a.shape[0], : a.shape[1]] = a
            out[a.shape[0]:, a.shape[1]:] = b
            return out

        R1 = self.relations.reshape(-1, g1)
        R2 = other.relations.reshape(-1, g2)
        delta = None
        if self.delta is not None and other.delta is not None:
            delta = block(self.delta, other.delta)
        return GroupModule(self.p, self.K, self.group_exp, block(R1, R2), block(self.action, other.action),
                           delta, max(self.delta_order, other.delta_order))


def _guard(group: FiniteAbelianGroup, K: int):
    for d in group.divisors:
        if d.bit_length() and _vp_pow(d) >= K - 2:
            raise PrecisionExhausted(f"divisor {d} is within p^2 of the working precision")


def _vp_pow(d: int) -> int:
    # d is a prime power here; its exponent
    for q in range(2, d + 1):
        if d % q == 0:
            e = 0
            while d % q == 0:
                d //= q
                e += 1
            return e
    return 0


def preimage(A: np.ndarray, relations: np.ndarray, p: int, K: int) -> np.ndarray:
    """Generators of {x in Z_p^g : x @ A lies in rowspan(relations)}."""
    g = A.shape[0]
    stacked = np.vstack([A, relations]) if relations.size else np.asarray(A)
    sf = smith_normal_form(stacked, p, K, left=True)
    return sf.U[sf.rank:, :g]


def subquotient(X: np.ndarray, Y: np.ndarray, p: int, K: int) -> FiniteAbelianGroup:
    """Structure of (span X + span Y) / span Y, assumed finite."""
    g = X.shape[1] if X.size else Y.shape[1]
    X = np.vstack([X, Y]) if Y.size else X
    rx, vx = span_invariants(X, p, K)
    ry, vy = span_invariants(Y, p, K)
    if rx != ry:
        raise StructuralError("subquotient is infinite at this precision")
    N = p**K
    exps = [vy - vx]
    i = 1
    while exps[-1] > 0:
        if i >= K:
            raise PrecisionExhausted("exponent of subquotient reaches the working precision")
        Xi = (X * p**i) % N
        Z = np.vstack([Xi, Y]) if Y.size else Xi
        rz, vz = span_invariants(Z, p, K)
        exps.append(vy - vz if rz == ry else 0)
        i += 1
    # exps[i] = log_p |p^i Q|; factors of order >= p^(i+1): c_i = exps[i] - exps[i+1]
    c = [exps[i] - exps[i + 1] for i in range(len(exps) - 1)] + [0]
    divisors = []
    for i in range(len(c) - 1):
        divisors += [p ** (i + 1)] * (c[i] - c[i + 1])
    group = FiniteAbelianGroup(tuple(divisors))
    _guard(group, K)
    return group


def _level_data(M: GroupModule, m: int):
    if not 0 <= m <= M.group_exp:
        raise StructuralError(f"level {m} outside 0..{M.group_exp}")
    N = M.N
    tau = matpow_mod(M.action, M.p**m, N)
    h = M.group_exp - m
    g = M.gens
    eye = np.eye(g, dtype=tau.dtype)
    # sum_{i < p^h} tau^i = prod_{j < h} (1 + s + .. + s^(p-1)), s = tau^(p^j)
    norm = eye.copy()
    step = tau
    for _ in range(h):
        block = eye.copy()
        power = eye
        for _ in range(M.p - 1):
            power = matmul_mod(power, step, N)
            block = (block + power) % N
        norm = matmul_mod(norm, block, N)
        step = matmul_mod(power, step, N)
    diff = (tau - eye) % N
    return tau, norm, diff


def _cohomology_lattices(q: int, M: GroupModule, m: int):
    """(X, Y) with H^q(G', M) = X / Y, G' generated by sigma^(p^m)."""
    _, norm, diff = _level_data(M, m)
    R = M.relations
    if q % 2 == 0:
        X = preimage(diff, R, M.p, M.K)
        Y = np.vstack([norm, R]) if R.size else norm
    else:
        X = preimage(norm, R, M.p, M.K)
        Y = np.vstack([diff, R]) if R.size else diff
    return X, Y


def tate_cohomology(q: int, M: GroupModule, m: int = 0) -> FiniteAbelianGroup:
    """Tate cohomology of the subgroup generated by sigma^(p^m), any degree q.

    Reduced to q in {0, -1} by 2-periodicity.
    """
    X, Y = _cohomology_lattices(q, M, m)
    return subquotient(X, Y, M.p, M.K)


def herbrand_check(M: GroupModule, m: int = 0) -> tuple[bool, int, int]:
    """(|H^0| == |H^-1|, |H^0|, |H^-1|) for a finite module."""
    if not M.is_finite():
        raise StructuralError("Herbrand check needs a finite module; free part present")
    h0 = tate_cohomology(0, M, m).order
    h1 = tate_cohomology(-1, M, m).order
    return h0 == h1, h0, h1


# ----------------------------------------------------------------------------
# characters of a cyclic Delta of order dividing p - 1


def character_idempotent(M: GroupModule, chi_exp: int) -> np.ndarray:
    """Matrix of e_chi = (1/|Delta|) sum_i chi(delta)^(-i) delta^i.

    ``chi_exp`` selects chi(delta) = zeta^chi_exp, zeta the Teichmuller lift of a
    fixed primitive |Delta|-th root of unity mod p.
    """
    from .characters import root_of_unity_zp

    s, p, K, N = M.delta_order, M.p, M.K, M.N
    if M.delta is None:
        raise StructuralError("module carries no Delta action")
    if (p - 1) % s:
        raise StructuralError(f"|Delta| = {s} must divide p - 1 (and so be prime to p)")
    zeta = root_of_unity_zp(s, p, K)
    chi_inv = pow(zeta, -chi_exp, N)
    g = M.gens
    E = np.zeros((g, g), dtype=object)
    power = np.eye(g, dtype=object)
    coeff = 1
    for _ in range(s):
        E = (E + coeff * power) % N
        power = matmul_mod(power, M.delta, N)
        coeff = coeff * chi_inv % N
    return (E * pow(s, -1, N)) % N


def eigenspace(M: GroupModule, chi_exp: int) -> GroupModule:
    """The chi-eigenspace e_chi M, presented as M / (1 - e_chi) M."""
    if M.p % M.delta_order == 0:
        raise StructuralError("p divides |Delta|")
    E = character_idempotent(M, chi_exp)
    comp = (np.eye(M.gens, dtype=object) - E) % M.N
    rels = np.vstack([M.relations.astype(object), comp]) if M.relations.size else comp
    # (1 - e_chi) commutes with sigma and delta, so the new relations stay stable
    return GroupModule(M.p, M.K, M.group_exp, rels, M.action, M.delta, M.delta_order, check=False)


def eigenspace_cohomology_commutes(M: GroupModule, chi_exp: int, q: int, m: int = 0):
    """Compare H^q(M(chi)) with H^q(M)(chi); returns (equal, lhs, rhs)."""
    if M.delta_order % M.p == 0:
        raise StructuralError("p divides |Delta|")
    lhs = tate_cohomology(q, eigenspace(M, chi_exp), m)
    X, Y = _cohomology_lattices(q, M, m)
    E = character_idempotent(M, chi_exp)
    XE = matmul_mod(X.astype(object), E, M.N)
    rhs = subquotient(XE, Y, M.p, M.K)
    return lhs == rhs, lhs, rhs


# ----------------------------------------------------------------------------
# standard models


def _cyclic_shift(n: int) -> np.ndarray:
    S = np.zeros((n, n), dtype=object)
    for i in range(n):
        S[i, (i + 1) % n] = 1
    return S


def regular_module(p: int, K: int, t: int, rank: int = 1) -> GroupModule:
    """Free module Z_p[G]^rank, |G| = p^t."""
    n = p**t
    S = np.zeros((n * rank, n * rank), dtype=object)
    for r in range(rank):
        S[r * n:(r + 1) * n, r * n:(r + 1) * n] = _cyclic_shift(n)
    return GroupModule(p, K, t, np.zeros((0, n * rank), dtype=object), S)


def trivial_module(p: int, K: int, t: int, exponent: int | None = None) -> GroupModule:
    """Z_p (or Z/p^exponent) with trivial action."""
    rels = np.zeros((0, 1), dtype=object) if exponent is None else np.array([[p**exponent]], dtype=object)
    return GroupModule(p, K, t, rels, np.eye(1, dtype=object))


def augmentation_ideal(p: int, K: int, t: int) -> GroupModule:
    """I_G, via Z_p[G] / (norm) -> I_G, x -> x(sigma - 1)."""
    n = p**t
    return GroupModule(p, K, t, np.ones((1, n), dtype=object), _cyclic_shift(n))


def augmentation_ideal_basis(p: int, K: int, t: int) -> GroupModule:
    """I_G on the Z_p-basis sigma^i - 1, i = 1..p^t - 1 (a second model)."""
    n = p**t
    g = n - 1
    S = np.zeros((g, g), dtype=object)
    # sigma (sigma^i - 1) = (sigma^(i+1) - 1) - (sigma - 1)
    for i in range(1, n):
        row = i - 1
        if i + 1 < n:
            S[row, i] += 1
        S[row, 0] -= 1
    return GroupModule(p, K, t, np.zeros((0, g), dtype=object), S)
