# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled reduced-echelon kernel over Q.

Same elimination order as the pure-Python fallback, but each row is kept as
a dict of Python integers with one shared positive scale, so the inner loops
do integer multiply-subtract and a single gcd pass per row instead of a
Fraction normalisation per entry."""

from fractions import Fraction
from math import gcd


cdef tuple _scaled(dict row):
    """Integer numerators and common denominator of a rational row."""
    cdef object den = 1
    cdef object v
    for v in row.values():
        v = Fraction(v)
        den = den * v.denominator // gcd(den, v.denominator)
    cdef dict out = {}
    for c, v in row.items():
        v = Fraction(v)
        if v:
            out[c] = v.numerator * (den // v.denominator)
    return out, den


cdef object _normalise(dict row, object scale):
    cdef object g = scale
    cdef object v
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return scale
    if g != 1:
        for c in row:
            row[c] = row[c] // g
        scale = scale // g
    return scale


def echelon(rows):
    cdef list reduced = []      # integer rows; pivot entry equals the scale
    cdef list scales = []
    cdef list pivots = []
    cdef dict pivot_row_of = {}
    cdef dict row, prow
    cdef object scale, f, p, nv, c0, s0
    cdef Py_ssize_t k
    for r in rows:
        row, scale = _scaled(r)
        if not row:
            continue
        for c in [c for c in row if c in pivot_row_of]:
            if c not in row:
                continue
            f = row[c]
            k = pivot_row_of[c]
            prow = reduced[k]
            p = scales[k]
            # row / scale - (f / scale) * prow / p, over the scale scale * p
            for cc in list(row):
                row[cc] = row[cc] * p
            for cc, vv in prow.items():
                nv = row.get(cc, 0) - f * vv
                if nv:
                    row[cc] = nv
                else:
                    row.pop(cc, None)
            scale = scale * p
            if row:
                scale = _normalise(row, scale)
        if not row:
            continue
        c0 = min(row)
        s0 = row[c0]
        if s0 < 0:
            for cc in row:
                row[cc] = -row[cc]
            s0 = -s0
        # make the pivot entry equal the scale: row / s0
        scale = s0
        scale = _normalise(row, scale)
        for k in range(len(reduced)):
            prow = reduced[k]
            f = prow.get(c0)
            if f:
                p = scales[k]
                for cc in list(prow):
                    prow[cc] = prow[cc] * scale
                for cc, vv in row.items():
                    nv = prow.get(cc, 0) - f * vv
                    if nv:
                        prow[cc] = nv
                    else:
                        prow.pop(cc, None)
                scales[k] = _normalise(prow, p * scale)
        pivot_row_of[c0] = len(reduced)
        pivots.append(c0)
        reduced.append(row)
        scales.append(scale)
    out = []
    for k in range(len(reduced)):
        s0 = scales[k]
        out.append({c: Fraction(v, s0) for c, v in reduced[k].items()})
    return pivots, out
