from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from flux import linalg

entries = st.fractions(min_value=-6, max_value=6, max_denominator=5)
rows = st.dictionaries(st.integers(0, 7), entries, max_size=6)
matrices = st.lists(rows, max_size=8)

compiled = pytest.mark.skipif(linalg._c_echelon is None, reason="compiled kernel not built")


def _copy(m):
    return [dict(r) for r in m]


@compiled
@given(matrices)
def test_backends_agree(m):
    assert linalg.echelon(_copy(m), "compiled") == linalg.echelon(_copy(m), "python")


@given(matrices)
def test_reduced_form(m):
    pivots, red = linalg.echelon(_copy(m))
    assert len(set(pivots)) == len(pivots)
    for p, r in zip(pivots, red):
        assert r[p] == 1
        for q in pivots:
            if q != p:
                assert q not in r


@given(matrices)
def test_nullspace(m):
    basis = linalg.nullspace(_copy(m), 8)
    assert len(basis) + linalg.rank(_copy(m)) == 8
    for v in basis:
        for r in m:
            assert sum(Fraction(c) * v.get(k, 0) for k, c in r.items()) == 0


@given(matrices, st.lists(entries, min_size=8, max_size=8))
def test_solve(m, rhs):
    rhs = rhs[:len(m)]
    x = linalg.solve(_copy(m), rhs)
    if x is not None:
        for r, b in zip(m, rhs):
            assert sum(Fraction(c) * x.get(k, 0) for k, c in r.items()) == b


def test_backend_selected_at_import():
    import importlib
    import subprocess
    import sys

    out = subprocess.run([sys.executable, "-c", "from flux import linalg; print(linalg.BACKEND)"],
                         env={"FLUX_PURE_PYTHON": "1", "PATH": ""}, capture_output=True, text=True)
    assert out.stdout.strip() == "python"
    assert importlib.import_module("flux.linalg").BACKEND in ("python", "compiled")
