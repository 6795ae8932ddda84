"""Exact linear algebra.

Matrices are lists of sparse rows, each a ``{column: value}`` dict.  Over the
rationals the elimination kernel is either the compiled one from
``flux._linalg_core`` or the pure-Python fallback in this module; both
return identical results.  Over the Novikov field pivots are chosen by
smallest valuation, so rank decisions are made on leading terms first.
"""
from __future__ import annotations

from fractions import Fraction
import os
from typing import Iterable, Sequence

from .novikov import NovikovScalar

Row = dict


def _py_echelon(rows: list[dict], ncols_hint: int | None = None):
    """Reduced row echelon form over Q.

    Returns ``(pivots, reduced)``: ``reduced[k]`` has a 1 in column
    ``pivots[k]`` and zeros in every other pivot column."""
    work = []
    for r in rows:
        d = {c: Fraction(v) for c, v in r.items() if v}
        if d:
            work.append(d)
    pivots: list[int] = []
    reduced: list[dict] = []
    pivot_row_of: dict[int, int] = {}
    for row in work:
        # eliminate existing pivots from this row
        for c in [c for c in row if c in pivot_row_of]:
            if c not in row:
                continue
            f = row[c]
            prow = reduced[pivot_row_of[c]]
            for cc, vv in prow.items():
                nv = row.get(cc, 0) - f * vv
                if nv:
                    row[cc] = nv
                else:
                    row.pop(cc, None)
        # eliminating may introduce other pivot columns only if prow had them,
        # which it does not (reduced form); so row is now pivot-free
        if not row:
            continue
        c0 = min(row)
        inv = 1 / row[c0]
        row = {c: v * inv for c, v in row.items()}
        # back-substitute into existing rows
        for k, prow in enumerate(reduced):
            f = prow.get(c0)
            if f:
                for cc, vv in row.items():
                    nv = prow.get(cc, 0) - f * vv
                    if nv:
                        prow[cc] = nv
                    else:
                        prow.pop(cc, None)
        pivot_row_of[c0] = len(reduced)
        pivots.append(c0)
        reduced.append(row)
    return pivots, reduced


try:  # compiled kernel
    if os.environ.get("FLUX_PURE_PYTHON"):
        raise ImportError
    from ._linalg_core import echelon as _c_echelon  # type: ignore

    BACKEND = "compiled"
except ImportError:  # pragma: no cover - depends on build
    _c_echelon = None
    BACKEND = "python"


def echelon(rows: Sequence[dict], backend: str | None = None):
    """Reduced echelon form over Q; see :func:`_py_echelon`."""
    use = backend or BACKEND
    if use == "compiled" and _c_echelon is not None:
        return _c_echelon(rows)
    return _py_echelon(list(rows))


def rank(rows: Sequence[dict], backend: str | None = None) -> int:
    return len(echelon(rows, backend)[0])


def nullspace(rows: Sequence[dict], ncols: int | Iterable, backend: str | None = None) -> list[dict]:
    """Basis of {x : rows . x = 0}; ``ncols`` is a count or an iterable of column keys."""
    cols = list(range(ncols)) if isinstance(ncols, int) else list(ncols)
    pivots, red = echelon(rows, backend)
    pset = set(pivots)
    basis = []
    for free in cols:
        if free in pset:
            continue
        v = {free: Fraction(1)}
        for p, r in zip(pivots, red):
            f = r.get(free)
            if f:
                v[p] = -f
        basis.append(v)
    return basis


def solve(rows: Sequence[dict], rhs: Sequence, backend: str | None = None) -> dict | None:
    """A particular solution of rows . x = rhs (free variables set to 0), or None."""
    return solve_many(rows, [rhs], backend)[0]


def solve_many(rows: Sequence[dict], rhs_list: Sequence[Sequence], backend: str | None = None):
    """Solve rows . x = b for several right-hand sides sharing one elimination.

    Column keys may be arbitrary hashables; they are renumbered so that every
    unknown precedes every right-hand side, which makes the leftmost-pivot
    elimination solve for unknowns first."""
    keys = sorted({c for r in rows for c in r}, key=repr)
    index = {c: n for n, c in enumerate(keys)}
    base = len(keys)
    aug = []
    for i, r in enumerate(rows):
        row = {index[c]: Fraction(v) for c, v in r.items() if v}
        for k, b in enumerate(rhs_list):
            if b[i]:
                row[base + k] = Fraction(b[i])
        aug.append(row)
    pivots, red = echelon(aug, backend)
    sols = []
    for k in range(len(rhs_list)):
        col = base + k
        bad = any(p >= base and r.get(col) for p, r in zip(pivots, red))
        if bad:
            sols.append(None)
            continue
        x = {}
        for p, r in zip(pivots, red):
            if p < base:
                v = r.get(col)
                if v:
                    x[keys[p]] = v
        sols.append(x)
    return sols


def matrix_from_dense(dense: Sequence[Sequence]) -> list[dict]:
    return [{j: Fraction(v) for j, v in enumerate(row) if v} for row in dense]


# ---------------------------------------------------------------------------
# Novikov-valued elimination


def novikov_rank(matrix: Sequence[Sequence[NovikovScalar]], precision=None) -> int:
    """Rank over the Novikov field by full pivoting on smallest valuation.

    An entry counts as nonzero only if it has a term below its precision, so
    the answer is the rank certified at the working precision.  Exact
    matrices are truncated at ``precision`` first (default 50)."""
    cut = Fraction(50) if precision is None else Fraction(precision)
    m = [[NovikovScalar.coerce(x).truncate(cut) for x in row] for row in matrix]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rk = 0
    rows_left = list(range(nrows))
    cols_left = list(range(ncols))
    while rows_left and cols_left:
        best = None
        for i in rows_left:
            for j in cols_left:
                x = m[i][j]
                if x.terms:
                    v = x.terms[0][0]
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            break
        _, pi, pj = best
        inv = m[pi][pj].inverse()
        for i in rows_left:
            if i == pi or not m[i][pj].terms:
                continue
            f = m[i][pj] * inv
            for j in cols_left:
                m[i][j] = m[i][j] - f * m[pi][j]
        rows_left.remove(pi)
        cols_left.remove(pj)
        rk += 1
    return rk



# ---------------------------------------------------------------------------
# small dense systems over Q or the Novikov field


def _val(x):
    if isinstance(x, NovikovScalar):
        return x.terms[0][0] if x.terms else None
    return 0 if x else None


def _inv(x):
    return x.inverse() if isinstance(x, NovikovScalar) else 1 / Fraction(x)


def dense_solve(matrix: Sequence[Sequence], rhs: Sequence):
    """One solution of ``matrix . x = rhs`` (free variables 0) or None.

    Works over Fraction or NovikovScalar entries; Novikov pivots are chosen
    by smallest valuation, and "zero" means no term below precision."""
    n = len(matrix[0]) if matrix else 0
    rows = [list(r) + [b] for r, b in zip(matrix, rhs)]
    pivots = []
    used = set()
    for j in range(n):
        best = None
        for i, r in enumerate(rows):
            if i in used:
                continue
            v = _val(r[j])
            if v is not None and (best is None or v < best[0]):
                best = (v, i)
        if best is None:
            continue
        pi = best[1]
        used.add(pi)
        inv = _inv(rows[pi][j])
        rows[pi] = [x * inv for x in rows[pi]]
        for i, r in enumerate(rows):
            if i != pi and _val(r[j]) is not None:
                f = r[j]
                rows[i] = [a - f * b for a, b in zip(r, rows[pi])]
        pivots.append((pi, j))
    for i, r in enumerate(rows):
        if i not in used and _val(r[n]) is not None:
            return None
    x = [0] * n
    for pi, j in pivots:
        x[j] = rows[pi][n]
    return x


def dense_kernel(matrix: Sequence[Sequence], ncols: int) -> list[list]:
    """Kernel basis over Q or the Novikov field (same pivoting as dense_solve)."""
    rows = [list(r) for r in matrix]
    pivots = {}
    used = set()
    for j in range(ncols):
        best = None
        for i, r in enumerate(rows):
            if i in used:
                continue
            v = _val(r[j])
            if v is not None and (best is None or v < best[0]):
                best = (v, i)
        if best is None:
            continue
        pi = best[1]
        used.add(pi)
        inv = _inv(rows[pi][j])
        rows[pi] = [x * inv for x in rows[pi]]
        for i, r in enumerate(rows):
            if i != pi and _val(r[j]) is not None:
                f = r[j]
                rows[i] = [a - f * b for a, b in zip(r, rows[pi])]
        pivots[j] = pi
    out = []
    for free in range(ncols):
        if free in pivots:
            continue
        vec = [0] * ncols
        vec[free] = 1
        for j, pi in pivots.items():
            vec[j] = -rows[pi][free]
        out.append(vec)
    return out
