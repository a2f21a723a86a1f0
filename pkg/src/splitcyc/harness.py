"""Scenario runner: checks, caching, reports."""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .cache import ResultCache
from .checks import FAIL, INDET, INFO, PASS, run_check
from .scenarios import Scenario

__all__ = ["SCHEMA_ID", "run_scenario", "run_suite", "canonical_report", "report_json", "overall_status"]

SCHEMA_ID = "splitcyc.report/1"
_RUNTIME_KEYS = ("runtime_s", "cached", "cache_stats")


def overall_status(checks) -> str:
    graded = [c["status"] for c in checks if c["status"] != INFO]
    if any(st == FAIL for st in graded):
        return FAIL
    if any(st == INDET for st in graded):
        return INDET
    return PASS


def run_scenario(s: Scenario, cache: ResultCache | None = None) -> dict:
    cache = cache or ResultCache(enabled=False)
    t0 = time.perf_counter()
    checks = []
    for name in s.checks:
        t1 = time.perf_counter()
        value, hit = cache.cached(f"check:{name}", s.inputs(), lambda name=name: run_check(name, s))
        entry = dict(value)
        entry["runtime_s"] = round(time.perf_counter() - t1, 4)
        entry["cached"] = hit
        checks.append(entry)
    return {
        "schema": SCHEMA_ID,
        "version": __version__,
        "scenario": s.inputs(),
        "checks": checks,
        "status": overall_status(checks),
        "runtime_s": round(time.perf_counter() - t0, 4),
        "cache_stats": vars(cache.stats).copy(),
    }


def _worker(args):
    s, root, enabled = args
    return run_scenario(s, ResultCache(root, enabled=enabled))


def run_suite(scenarios: list[Scenario], jobs: int = 1, cache_root=None, use_cache: bool = True) -> list[dict]:
    if jobs <= 1 or len(scenarios) <= 1:
        cache = ResultCache(cache_root, enabled=use_cache)
        return [run_scenario(s, cache) for s in scenarios]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_worker, [(s, cache_root, use_cache) for s in scenarios]))


def _strip(obj):
    if isinstance(obj, dict):
        return {k: _strip(v) for k, v in obj.items() if k not in _RUNTIME_KEYS}
    if isinstance(obj, list):
        return [_strip(v) for v in obj]
    return obj


def canonical_report(reports) -> bytes:
    """Byte-stable encoding with runtime fields removed."""
    return json.dumps(_strip(reports), sort_keys=True, indent=1).encode()


def report_json(reports) -> str:
    return json.dumps(reports, sort_keys=True, indent=1)
