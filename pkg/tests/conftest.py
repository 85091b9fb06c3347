from __future__ import annotations

import functools

import pytest
from hypothesis import HealthCheck, settings

from ringlab import Presentation, PrimeField, build_algebra, parse_poly

settings.register_profile("ringlab", deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ringlab")

GF = PrimeField()


@functools.lru_cache(maxsize=None)
def ring(relations: str, names: str = "x,y", p: int = 32003):
    """k[names]/(relations), relations separated by ';'."""
    vs = tuple(n.strip() for n in names.split(","))
    F = PrimeField(p)
    rels = tuple(parse_poly(r, vs) for r in relations.split(";"))
    return build_algebra(Presentation(F, vs, rels))


@pytest.fixture
def golden():
    return ring("x*y; x^4 - y^2")


@pytest.fixture
def x2y2():
    return ring("x^2; y^2")


@pytest.fixture
def m2():
    return ring("x^2; x*y; y^2")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance")
        for line in lines:
            terminalreporter.write_line(line)
