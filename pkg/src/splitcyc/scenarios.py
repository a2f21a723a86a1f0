"""Scenario files: plain ``key = value`` lines, ``#`` comments.

Field scenarios::

    name = d229_p3
    D = 229
    p = 3
    K = 12
    m = 0
    lambda_zero = true
    checks = all

Synthetic Lambda-model scenarios set ``kind = synthetic`` and give ``e`` and a
list ``u = 1, 2`` instead of ``D``.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from sympy import isprime

from .characters import is_fundamental_discriminant, quadratic_character

__all__ = [
    "Scenario",
    "ScenarioError",
    "FIELD_CHECKS",
    "SYNTHETIC_CHECKS",
    "parse_scenario",
    "load_scenario",
    "load_scenarios",
    "default_scenario_dir",
]

FIELD_CHECKS = (
    "lvalue",
    "b0",
    "lambda_model",
    "order_agreement",
    "cyc_unit_orders",
    "norm_relation",
    "sinnott_gras",
    "pi0",
    "cohomology_suite",
)
SYNTHETIC_CHECKS = ("synthetic_lambda",)
_KEYS = {"name", "kind", "d", "p", "k", "n", "m", "lambda_zero", "checks", "u", "e", "j"}


class ScenarioError(ValueError):
    """Scenario violates a standing hypothesis or is malformed."""


@dataclass(frozen=True)
class Scenario:
    name: str
    p: int
    K: int
    kind: str = "field"
    D: int | None = None
    n: int | None = None
    m: int = 0
    lambda_zero: bool = True
    checks: tuple = field(default=FIELD_CHECKS)
    u: tuple = ()
    e: int | None = None
    J: int | None = None

    def inputs(self) -> dict:
        """Canonical input encoding (used for cache keys and reports)."""
        return {
            "name": self.name, "kind": self.kind, "D": self.D, "p": self.p, "K": self.K,
            "n": self.n, "m": self.m, "lambda_zero": self.lambda_zero,
            "checks": list(self.checks), "u": list(self.u), "e": self.e, "J": self.J,
        }


def _bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ScenarioError(f"not a boolean: {s!r}")


def _int(s: str | None, key: str) -> int | None:
    if s is None:
        return None
    try:
        return int(s.strip())
    except ValueError as exc:
        raise ScenarioError(f"{key} must be an integer, got {s!r}") from exc


def parse_scenario(text: str, default_name: str = "scenario") -> Scenario:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        cp.read_string("[scenario]\n" + text)
    except configparser.Error as exc:
        raise ScenarioError(f"malformed scenario: {exc}") from exc
    sec = dict(cp["scenario"])
    unknown = set(sec) - _KEYS
    if unknown:
        raise ScenarioError(f"unknown keys: {sorted(unknown)}")
    kind = sec.get("kind", "field").strip()
    p = _int(sec.get("p"), "p")
    K = _int(sec.get("k"), "K")
    if p is None or K is None:
        raise ScenarioError("p and K are required")
    if p == 2 or not isprime(p):
        raise ScenarioError("p must be an odd prime")
    if K < 4:
        raise ScenarioError("precision K must be at least 4")
    name = sec.get("name", default_name).strip()
    m = _int(sec.get("m"), "m") or 0
    n = _int(sec.get("n"), "n")
    J = _int(sec.get("j"), "J")
    lambda_zero = _bool(sec.get("lambda_zero", "true"))
    allowed = FIELD_CHECKS if kind == "field" else SYNTHETIC_CHECKS
    raw = sec.get("checks", "all").strip()
    checks = allowed if raw == "all" else tuple(c.strip() for c in raw.split(",") if c.strip())
    bad = [c for c in checks if c not in allowed]
    if bad:
        raise ScenarioError(f"unknown checks for kind {kind}: {bad}")
    if kind == "field":
        D = _int(sec.get("d"), "D")
        if D is None:
            raise ScenarioError("field scenarios need D")
        if D <= 1 or not is_fundamental_discriminant(D):
            raise ScenarioError(f"{D} is not a positive fundamental discriminant")
        if D % p == 0:
            raise ScenarioError(f"{p} ramifies in Q(sqrt {D})")
        if quadratic_character(D).value_int(p) != 1:
            raise ScenarioError(f"{p} is inert in Q(sqrt {D}); chi(p) = 1 is required")
        if n is not None and n <= m:
            raise ScenarioError("need n > m")
        return Scenario(name, p, K, kind, D, n, m, lambda_zero, checks, (), None, J)
    if kind == "synthetic":
        e = _int(sec.get("e"), "e")
        if e is None or e < 0:
            raise ScenarioError("synthetic scenarios need e >= 0")
        us = tuple(int(x) for x in sec.get("u", "1").split(",") if x.strip())
        if any(x % p == 0 for x in us):
            raise ScenarioError("u must be a p-adic unit")
        if e >= K - 2:
            raise ScenarioError("e must be below K - 2")
        return Scenario(name, p, K, kind, None, n, m, lambda_zero, checks, us, e, J)
    raise ScenarioError(f"unknown scenario kind {kind!r}")


def load_scenario(path) -> Scenario:
    path = Path(path)
    return parse_scenario(path.read_text(), default_name=path.stem)


def default_scenario_dir() -> Path:
    return Path(str(resources.files("splitcyc") / "data" / "scenarios"))


def load_scenarios(path=None) -> list[Scenario]:
    """A single file, or every ``*.scn`` in a directory (sorted)."""
    path = Path(path) if path is not None else default_scenario_dir()
    if path.is_dir():
        return [load_scenario(f) for f in sorted(path.glob("*.scn"))]
    return [load_scenario(path)]
