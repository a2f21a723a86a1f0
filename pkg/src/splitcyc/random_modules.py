"""Random finite and free Z_p[G x Delta]-modules for property suites."""

from __future__ import annotations

import numpy as np

from .cohomology import GroupModule

__all__ = ["group_ring_actions", "random_group_module"]


def group_ring_actions(p: int, t: int, s: int, rank: int):
    """Matrices of sigma and delta on Z_p[G x Delta]^rank, |G| = p^t, |Delta| = s.

    Basis index: r * (n s) + j * n + i for sigma^i delta^j in copy r.
    """
    n = p**t
    dim = rank * n * s
    S = np.zeros((dim, dim), dtype=object)
    Dl = np.zeros((dim, dim), dtype=object)
    for r in range(rank):
        for j in range(s):
            for i in range(n):
                k = r * n * s + j * n + i
                S[k, r * n * s + j * n + (i + 1) % n] = 1
                Dl[k, r * n * s + ((j + 1) % s) * n + i] = 1
    return S, Dl


def random_group_module(rng: np.random.Generator, p: int, K: int, t: int, rank: int,
                        delta_order: int = 1, n_relations: int = 2, kill_exponent: int | None = 2,
                        ) -> GroupModule:
    """Quotient of Z_p[G x Delta]^rank by the submodule generated by random elements.

    ``kill_exponent`` e adds p^e times the identity so the module is finite;
    None leaves it possibly infinite.
    """
    S, Dl = group_ring_actions(p, t, delta_order, rank)
    dim = S.shape[0]
    N = p**K
    rows = []
    for _ in range(n_relations):
        v = rng.integers(0, p**2, size=dim).astype(object) * p ** int(rng.integers(0, 2))
        for _j in range(delta_order):
            w = v.copy()
            for _i in range(p**t):
                rows.append(w % N)
                w = (w @ S) % N
            v = (v @ Dl) % N
    if kill_exponent is not None:
        rows.extend(list(np.eye(dim, dtype=object) * p**kill_exponent))
    rels = np.array(rows, dtype=object).reshape(len(rows), dim)
    delta = Dl if delta_order > 1 else None
    return GroupModule(p, K, t, rels, S, delta, delta_order, check=False)
