"""Session-scoped caches: contexts, closures, and decomposition reports.

Closure generation at n = 16 costs ~20 s, so every test that needs the
generated algebra or a certified report for a grid point goes through these
factories and the work happens once per session.
"""
import pytest

from tforge.scheme import GroupSpec
from tforge.structure import decompose
from tforge.talgebra import closure_generate, make_context

PRIMES = (2, 3, 5, 7)
ORDERS = (4, 8, 16)
GRID = [(p, n) for p in PRIMES for n in ORDERS]


def _context(p, n, basepoint=0):
    group = GroupSpec.elementary_abelian_2(n.bit_length() - 1)
    return make_context(group, p, basepoint)


@pytest.fixture(scope="session")
def get_ctx():
    cache = {}

    def _get(p, n, basepoint=0):
        key = (p, n, basepoint)
        if key not in cache:
            cache[key] = _context(p, n, basepoint)
        return cache[key]

    return _get


@pytest.fixture(scope="session")
def get_algebra(get_ctx):
    cache = {}

    def _get(p, n, basepoint=0):
        key = (p, n, basepoint)
        if key not in cache:
            cache[key] = closure_generate(get_ctx(p, n, basepoint))
        return cache[key]

    return _get


@pytest.fixture(scope="session")
def get_report(get_algebra):
    cache = {}

    def _get(p, n):
        if (p, n) not in cache:
            cache[(p, n)] = decompose(p, n, algebra=get_algebra(p, n))
        return cache[(p, n)]

    return _get
