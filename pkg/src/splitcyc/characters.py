"""Dirichlet characters, eigenspace projection and generalized Bernoulli numbers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy import factorint, jacobi_symbol, primitive_root, totient

from .padic import PadicElement, PadicError, teichmuller

__all__ = [
    "DirichletCharacter",
    "CyclotomicRational",
    "EigenprojectionData",
    "quadratic_character",
    "is_fundamental_discriminant",
    "kronecker",
    "generalized_bernoulli",
    "bernoulli_number",
    "bernoulli_poly",
    "root_of_unity_zp",
    "eigenprojection_data",
    "project_eigenspace",
]


@dataclass(frozen=True)
class DirichletCharacter:
    """Character of (Z/fZ)^x stored as exponents: chi(a) = zeta_order^exps[a].

    ``exps[a]`` is None when gcd(a, f) > 1.  The character is assumed primitive
    of conductor f.
    """

    modulus: int
    order: int
    exps: tuple

    def __post_init__(self):
        if len(self.exps) != self.modulus:
            raise ValueError("exponent table must have one entry per residue")

    def __call__(self, a: int):
        return self.exps[a % self.modulus]

    @property
    def conductor(self) -> int:
        return self.modulus

    def is_even(self) -> bool:
        return self(-1) == 0

    def is_trivial(self) -> bool:
        return all(e in (None, 0) for e in self.exps)

    def is_real(self) -> bool:
        return self.order <= 2

    def value_int(self, a: int) -> int:
        """chi(a) in {0, 1, -1}; real characters only."""
        if not self.is_real():
            raise ValueError("character is not real")
        e = self(a)
        if e is None:
            return 0
        return 1 if e == 0 else -1

    def value_zp(self, a: int, p: int, K: int) -> int:
        """chi(a) as a residue mod p^K through the Teichmuller embedding."""
        e = self(a)
        if e is None:
            return 0
        if e == 0:
            return 1
        return pow(root_of_unity_zp(self.order, p, K), e, p**K)

    def conjugate(self) -> "DirichletCharacter":
        return DirichletCharacter(
            self.modulus, self.order,
            tuple(None if e is None else (-e) % self.order for e in self.exps))

    @classmethod
    def from_generator(cls, q: int, order: int, k: int = 1) -> "DirichletCharacter":
        """Character mod an odd prime q sending the least primitive root to zeta_order^k."""
        if (q - 1) % order:
            raise ValueError("order must divide q - 1")
        g = primitive_root(q)
        exps = [None] * q
        x = 1
        for i in range(q - 1):
            exps[x] = (i * k) % order
            x = x * g % q
        return cls(q, order, tuple(exps))


def is_fundamental_discriminant(D: int) -> bool:
    if D in (0, 1):
        return False
    if D % 4 == 1:
        return _squarefree(abs(D))
    if D % 4 == 0:
        d = D // 4
        return d % 4 in (2, 3) and _squarefree(abs(d))
    return False


def _squarefree(n: int) -> bool:
    return all(e == 1 for e in factorint(n).values())


def kronecker(D: int, a: int) -> int:
    """Kronecker symbol (D/a) for a > 0."""
    if a <= 0:
        raise ValueError("a must be positive")
    result = 1
    while a % 2 == 0:
        a //= 2
        if D % 2 == 0:
            return 0
        result *= 1 if D % 8 in (1, 7) else -1
    if a == 1:
        return result
    if math.gcd(D, a) > 1:
        return 0
    return result * int(jacobi_symbol(D % a, a))


@lru_cache(maxsize=None)
def quadratic_character(D: int) -> DirichletCharacter:
    """Kronecker character of the real quadratic field of discriminant D."""
    if D <= 1 or not is_fundamental_discriminant(D):
        raise ValueError(f"{D} is not a positive fundamental discriminant")
    exps = []
    for a in range(D):
        if math.gcd(a, D) != 1:
            exps.append(None)
        else:
            exps.append(0 if kronecker(D, a) == 1 else 1)
    chi = DirichletCharacter(D, 2, tuple(exps))
    assert chi.is_even()
    return chi


@lru_cache(maxsize=None)
def root_of_unity_zp(order: int, p: int, K: int) -> int:
    """Primitive order-th root of unity in Z_p (order | p - 1), as a residue mod p^K."""
    if (p - 1) % order:
        raise PadicError(f"Z_{p} has no primitive {order}-th root of unity")
    if order == 1:
        return 1
    g = primitive_root(p)
    return teichmuller(pow(g, (p - 1) // order, p), p, K).coeffs[0]


# ---------------------------------------------------------------------------
# Bernoulli numbers


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple:
    B = [Fraction(1)]
    for m in range(1, n + 1):
        B.append(-sum(math.comb(m + 1, k) * B[k] for k in range(m)) / Fraction(m + 1))
    return tuple(B)


def bernoulli_number(n: int) -> Fraction:
    """B_n with B_1 = -1/2."""
    return _bernoulli_table(n)[n]


def bernoulli_poly(n: int, x: Fraction) -> Fraction:
    B = _bernoulli_table(n)
    return sum(math.comb(n, k) * B[k] * x ** (n - k) for k in range(n + 1))


@dataclass(frozen=True)
class CyclotomicRational:
    """Element of Q(zeta_order): coefficients on 1, zeta, ..., zeta^(phi(order)-1)."""

    order: int
    coeffs: tuple

    @property
    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    @property
    def rational(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("value is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def to_zp(self, p: int, K: int) -> int:
        """Image mod p^K under zeta -> Teichmuller root of unity."""
        N = p**K
        zeta = root_of_unity_zp(self.order, p, K) if self.order > 2 else (N - 1 if self.order == 2 else 1)
        total = 0
        for i, c in enumerate(self.coeffs):
            if c.denominator % p == 0:
                raise PadicError("value is not p-integral")
            total += c.numerator * pow(c.denominator, -1, N) * pow(zeta, i, N)
        return total % N


def _cyclotomic_reduce(order: int, by_exp: list) -> tuple:
    from sympy import Poly, cyclotomic_poly, symbols

    X = symbols("X")
    phi = [int(c) for c in reversed(Poly(cyclotomic_poly(order, X), X).all_coeffs())]
    d = len(phi) - 1
    c = list(by_exp)
    for i in range(len(c) - 1, d - 1, -1):
        t = c[i]
        if t:
            for j in range(d + 1):
                c[i - d + j] -= t * phi[j]
    return tuple(c[:d])


def generalized_bernoulli(n: int, chi: DirichletCharacter) -> CyclotomicRational:
    """B_{n,chi} = f^(n-1) sum_{a=1}^f chi(a) B_n(a/f), exact."""
    if n < 1:
        raise ValueError("n must be positive")
    f = chi.modulus
    o = max(chi.order, 1)
    by_exp = [Fraction(0)] * o
    if n % 2 == 1 and chi.is_even() and not (n == 1 and chi.is_trivial()):
        return CyclotomicRational(o, _cyclotomic_reduce(o, by_exp) if o > 2 else (Fraction(0),))
    B = _bernoulli_table(n)
    for a in range(1, f + 1):
        e = chi(a)
        if e is None:
            continue
        # f^(n-1) B_n(a/f) = sum_k C(n,k) B_k a^(n-k) f^(k-1)
        val = sum(math.comb(n, k) * B[k] * a ** (n - k) * Fraction(f) ** (k - 1) for k in range(n + 1))
        by_exp[e] += val
    if o == 1:
        return CyclotomicRational(1, (by_exp[0],))
    if o == 2:
        return CyclotomicRational(2, (by_exp[0] - by_exp[1],))
    return CyclotomicRational(o, _cyclotomic_reduce(o, by_exp))


# ---------------------------------------------------------------------------
# eigenspaces


@dataclass(frozen=True)
class EigenprojectionData:
    """Idempotent e_chi = sum_i coeffs[i] delta^i in Z/p^K[Delta], Delta cyclic."""

    chi_exp: int
    delta_order: int
    p: int
    K: int
    degree: int
    coeffs: tuple


def eigenprojection_data(chi_exp: int, delta_order: int, p: int, K: int) -> EigenprojectionData:
    if p % delta_order == 0 or (p - 1) % delta_order:
        raise ValueError("|Delta| must divide p - 1")
    N = p**K
    zeta = root_of_unity_zp(delta_order, p, K)
    inv = pow(delta_order, -1, N)
    coeffs = tuple(pow(zeta, -chi_exp * i, N) * inv % N for i in range(delta_order))
    return EigenprojectionData(chi_exp, delta_order, p, K, 1, coeffs)


def project_eigenspace(M, chi_exp: int):
    """chi-eigenspace of a module carrying a Delta action (see cohomology.eigenspace)."""
    from .cohomology import StructuralError, eigenspace

    if M.delta is None:
        raise StructuralError("module carries no Delta action")
    if M.delta_order % M.p == 0:
        raise StructuralError("p divides |Delta|")
    return eigenspace(M, chi_exp)


def euler_phi(n: int) -> int:
    return int(totient(n))
