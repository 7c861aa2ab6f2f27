import itertools
import os

import numpy as np

import pytest

from orbithull import _graded as g
from orbithull.exactlin import GF, QQ
from orbithull.periodic import differential_module
from orbithull.proj import HomCoords, ProjMap, ProjModule

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")

# filled in by test_acceptance.py, printed at the end of the run
CRITERIA = {}


def pm(A, source, target, words):
    """ProjMap from a matrix of path words (rows indexed by target summands)."""
    return ProjMap.from_words(A, ProjModule(source), ProjModule(target), words)


def dm(A, module, words):
    """Differential module (P, ε) from path words."""
    return differential_module(A, ProjModule(module), pm(A, module, module, words))


def brute_null_homotopy(X, Y, f):
    """Enumerate every degree -1 map s and test f = sε + εs from the definition."""
    A = X.algebra
    F = A.field
    p = F.char
    hco = g.coords(X, Y, -1)
    full = HomCoords(A, X.module, Y.module)
    target = np.asarray(full.vector(f)).reshape(-1).astype(np.int64)
    m = len(hco)
    if m == 0:
        return not target.any()
    cols = []
    for k in range(m):
        s = hco.basis_map(k)
        cols.append(np.asarray(full.vector(s @ X.diff + Y.diff @ s)).reshape(-1).astype(np.int64))
    H = np.stack(cols, axis=1)
    for combo in itertools.product(range(p), repeat=m):
        if np.array_equal((H @ np.array(combo)) % p, target % p):
            return True
    return False


@pytest.fixture(params=[QQ, GF(3), GF(5)], ids=["QQ", "GF3", "GF5"])
def field(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        terminalreporter.write_line(f"CRITERION {k}: {'PASS' if CRITERIA[k] else 'FAIL'}")
