"""Acceptance suite for the E6 counterexample.

Each test runs one criterion at exact equality and prints one
``CRITERION k: PASS|FAIL`` line. Informational checks are reported but never
fail a criterion. Run standalone with ``python tests/test_acceptance.py``.
"""
import sys

import pytest

from voronoiforms.reproduce import Context, run_criterion, verdict

TITLES = {
    "1": "minimal vectors of pi_E6 (72) and pi_E6* (54)",
    "2": "second minima of phi_E6 (2m, 270) and phi_E6* (3m/2, 72)",
    "3": "duality F_E6 P_E6* = F_E6* P_E6 = (3/8) m^2 I",
    "4": "perfection and uniform eutaxy weights",
    "5": "automorphism group orders, transitivity, restriction kernel",
    "6": "Delaunay stars of phi_E6 and phi_E6*",
    "7": "D4 section star counts",
    "8": "incommensurability witness (1/4)[0,0,1,1,1,1]",
    "9": "midpoint census and R-tope retilings",
    "10": "breakpoints along the segment",
    "11": "property suites on random forms",
}


@pytest.fixture(scope="module")
def ctx():
    return Context()


def _report(key, checks):
    ok = verdict(checks)
    lines = [f"CRITERION {key}: {'PASS' if ok else 'FAIL'}  {TITLES[key]}"]
    for c in checks:
        if not c.passed or c.informational:
            tag = "info" if c.informational else "FAIL"
            lines.append(f"    [{tag}] {c.name}: {c.detail}")
    return ok, "\n".join(lines)


def _check(key, ctx, capsys=None):
    ok, text = _report(key, run_criterion(key, ctx))
    if capsys is not None:
        with capsys.disabled():
            print("\n" + text)
    else:
        print(text)
    return ok, text


@pytest.mark.parametrize("key", list(TITLES))
def test_criterion(key, ctx, capsys):
    ok, text = _check(key, ctx, capsys)
    assert ok, text


if __name__ == "__main__":
    shared = Context()
    results = [_check(k, shared)[0] for k in TITLES]
    print(f"{sum(results)}/{len(results)} criteria pass")
    sys.exit(0 if all(results) else 1)
