"""Deformations of the quiver algebra, cones over them, and idempotent lifts.

The quartic ``p`` enters through the arity-4 operations on V^4.  Everything
that depends on ``p`` is built once with symbolic coefficients (the five
coefficients of ``p`` as polynomial variables) and then specialised, so the
A-infinity relations are checked as polynomial identities.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .errors import ObstructionNonexact, SqrtUnavailable, Unsolvable
from .linalg import dense_kernel, dense_solve, solve_many
from .mpoly import MPoly
from .novikov import NovikovScalar
from .quiver_hh import (AInfinityOperations, FiniteBasis, HochschildComplex,
                        composable_sequences, quiver_q, _add_into, _sign)

NP = 5  # coefficients of a binary quartic

# identification of both off-diagonal pieces with V = R^2
_V_INDEX = {"w1": 0, "w2": 1, "w3": 0, "w4": 1}


def _basis_q() -> FiniteBasis:
    return FiniteBasis(quiver_q())


def _is_vector(B: FiniteBasis, k: int) -> bool:
    return B.length[k] == 1


def _vector_index(B: FiniteBasis, k: int) -> int:
    return _V_INDEX[B.name(k)]


def _cochains(B: FiniteBasis, C: HochschildComplex, arity: int) -> list[tuple]:
    """Cochains of total degree 2 whose output is 2(arity - 2) shorter than the inputs."""
    drop = 2 * (arity - 2)
    return [c for c in C.cochains(arity, 2)
            if sum(B.length[a] for a in c[0]) - B.length[c[1]] == drop]


def _polarization(B: FiniteBasis, seq: tuple, a: int) -> Fraction:
    """Value on (a4, a3, a2, a1) of the symmetric 4-form polarizing v1^a v2^(4-a)."""
    ones = sum(1 for x in seq if _vector_index(B, x) == 0)
    return Fraction(1, comb(4, a)) if ones == a else Fraction(0)


def compose(B: FiniteBasis, outer: dict, inner: dict, inner_arity: int,
            outer_arity: int) -> dict:
    """sum_i (-1)^{dagger_i} outer(.., inner(a_{i+j}..a_{i+1}), a_i..a_1) on reduced inputs."""
    red = set(B.reduced)
    slots: dict = {}
    for key, img in outer.items():
        for pos in range(outer_arity):
            others = [x for q, x in enumerate(reversed(key)) if q != pos]
            if all(x in red for x in others):
                slots.setdefault((pos, key[outer_arity - 1 - pos]), []).append((key, img))
    out: dict = {}
    for ikey, iimg in inner.items():
        if not all(x in red for x in ikey):
            continue
        for o, c in iimg.items():
            for pos in range(outer_arity):
                for key, img in slots.get((pos, o), []):
                    right = key[outer_arity - pos:]
                    left = key[:outer_arity - 1 - pos]
                    s = _sign(sum(B.deg[x] - 1 for x in right))
                    full = left + ikey + right
                    slot = out.setdefault(full, {})
                    for r, v in img.items():
                        nv = slot.get(r, 0) + s * c * v
                        if nv:
                            slot[r] = nv
                        else:
                            slot.pop(r, None)
    return {k: v for k, v in out.items() if v}


@dataclass
class QpData:
    """Solved operations for the monomial basis of quartics.

    ``mu4[a]`` is the arity-4 part for p = v1^a v2^(4-a); ``mu6[(a, b)]``
    (a <= b) is the arity-6 part multiplying c_a c_b."""
    basis: FiniteBasis
    mu4: list[dict]
    mu6: dict
    unknowns: dict


_QP_CACHE: dict = {}


def _solve_linear(B, C, arity, rhs_list, fixed_cols=()):
    cols = [c for c in _cochains(B, C, arity) if c not in set(fixed_cols)]
    rows: dict = {}
    for n, c in enumerate(cols):
        for key, v in C.differential(c, 2).items():
            rows.setdefault(key, {})[n] = v
    keys = set(rows)
    for rhs in rhs_list:
        keys.update(rhs)
    keys = sorted(keys, key=repr)
    mat = [rows.get(k, {}) for k in keys]
    sols = solve_many(mat, [[rhs.get(k, 0) for k in keys] for rhs in rhs_list])
    return cols, sols


def _flatten(comp: dict) -> dict:
    return {(seq, o): v for seq, img in comp.items() for o, v in img.items()}


def _unflatten(flat: dict) -> dict:
    out: dict = {}
    for (seq, o), v in flat.items():
        if v:
            out.setdefault(seq, {})[o] = v
    return out


def solve_qp() -> QpData:
    """Solve for the arity-4 and arity-6 operations, once per monomial."""
    if "data" in _QP_CACHE:
        return _QP_CACHE["data"]
    B = _basis_q()
    formal = AInfinityOperations(B)
    C = HochschildComplex(formal)
    quartic_inputs = [c for c in _cochains(B, C, 4)
                      if all(_is_vector(B, x) for x in c[0]) and B.length[c[1]] == 0]
    # arity 4: polarization on V^4 -> unit, everything else solved
    fixed = []
    rhs = []
    for a in range(NP):
        base = {c: _polarization(B, c[0], a) for c in quartic_inputs}
        fixed.append({c: v for c, v in base.items() if v})
        img: dict = {}
        for c, v in base.items():
            if v:
                _add_into(img, C.differential(c, 2), v)
        rhs.append({k: -v for k, v in img.items()})
    cols, sols = _solve_linear(B, C, 4, rhs, fixed_cols=quartic_inputs)
    if any(s is None for s in sols):
        raise Unsolvable("arity-4 system inconsistent with the polarization fixed")
    mu4 = []
    for a in range(NP):
        flat = dict(fixed[a])
        for k, v in sols[a].items():
            flat[cols[k]] = v
        mu4.append(_unflatten(flat))
    # arity 6: d mu6 = -(mu4 o mu4)
    pairs = [(a, b) for a in range(NP) for b in range(a, NP)]
    comp = {}
    for a in range(NP):
        for b in range(NP):
            comp[(a, b)] = _flatten(compose(B, mu4[a], mu4[b], 4, 4))
    rhs6 = []
    for a, b in pairs:
        acc: dict = {}
        _add_into(acc, comp[(a, b)], -1)
        if a != b:
            _add_into(acc, comp[(b, a)], -1)
        rhs6.append(acc)
    cols6, sols6 = _solve_linear(B, C, 6, rhs6)
    if any(s is None for s in sols6):
        raise Unsolvable("the arity-6 equation has no solution")
    mu6 = {}
    for (a, b), s in zip(pairs, sols6):
        mu6[(a, b)] = _unflatten({cols6[k]: v for k, v in s.items()})
    data = QpData(B, mu4, mu6, {4: len(cols), 6: len(cols6)})
    _QP_CACHE["data"] = data
    return data


@dataclass
class QpStructure:
    """An A-infinity structure on the quiver algebra with mu^4, mu^6 from ``p``."""
    ops: AInfinityOperations
    p: tuple
    data: QpData

    @property
    def basis(self) -> FiniteBasis:
        return self.ops.basis

    def mu(self, *inputs) -> dict:
        return self.ops.apply(len(inputs), tuple(inputs))


def _coeff_list(p) -> tuple:
    coeffs = getattr(p, "coeffs", None)
    if coeffs is None and hasattr(p, "form"):
        coeffs = p.form.coeffs
    if coeffs is None:
        coeffs = p
    coeffs = tuple(coeffs)
    if len(coeffs) != NP:
        raise ValueError("expected the five coefficients of a binary quartic")
    return coeffs


def _combine(parts: dict, weights: dict, zero):
    out: dict = {}
    for key, comp in parts.items():
        w = weights[key]
        if not w:
            continue
        for seq, img in comp.items():
            slot = out.setdefault(seq, {})
            for o, v in img.items():
                slot[o] = slot.get(o, zero) + w * v
    return {s: {o: v for o, v in img.items() if v} for s, img in out.items()}


def build_qp(p=None, symbolic: bool = False) -> QpStructure:
    """Q_p with the given quartic.  ``p=None`` with ``symbolic=True`` keeps the
    coefficients as polynomial variables c0..c4 (c_a multiplies v1^a v2^(4-a))."""
    data = solve_qp()
    if symbolic:
        c = [MPoly.var(NP, a) for a in range(NP)]
        zero = MPoly(NP)
    else:
        c = list(_coeff_list(p if p is not None else [0] * NP))
        zero = 0 * c[0] if c else 0
    w4 = {a: c[a] for a in range(NP)}
    w6 = {(a, b): c[a] * c[b] for (a, b) in data.mu6}
    mu4 = _combine(dict(enumerate(data.mu4)), w4, zero)
    mu6 = _combine(data.mu6, w6, zero)
    higher = {}
    if mu4:
        higher[4] = mu4
    if mu6:
        higher[6] = mu6
    ops = AInfinityOperations(data.basis, higher, zero=zero)
    return QpStructure(ops, tuple(c), data)


def build_Qp(p, arity_bound: int = 7) -> tuple[QpStructure, dict]:
    """Q_p and the residuals of its A-infinity relations up to ``arity_bound``."""
    s = build_qp(p)
    return s, {d: ainf_residual(s, d) for d in range(3, arity_bound + 1)}


@dataclass
class Residual:
    norm: Fraction
    count: int
    worst: tuple | None

    def __bool__(self):
        return self.count > 0


def _coeff_norm(v) -> Fraction:
    if isinstance(v, MPoly):
        return v.max_abs()
    if isinstance(v, NovikovScalar):
        return max((abs(Fraction(c)) if not hasattr(c, "c") else max(abs(x) for x in c.c)
                    for _, c in v.terms), default=Fraction(0))
    return abs(Fraction(v))


def ainf_residual(structure, d: int, with_units: bool = False) -> Residual:
    """Largest coefficient of the arity-``d`` A-infinity relation over all inputs.

    Inputs range over reduced basis elements (strict unitality handles the
    rest); ``with_units`` also runs through unit inputs as a sanity check."""
    ops = structure.ops if isinstance(structure, QpStructure) else structure
    B = ops.basis
    worst, norm, count = None, Fraction(0), 0
    for seq in composable_sequences(B, d, reduced_only=not with_units):
        val = ops.apply_relation(seq)
        for o, v in val.items():
            n = _coeff_norm(v)
            if n == 0:
                continue
            count += 1
            if n > norm:
                norm, worst = n, (tuple(B.name(x) for x in seq), B.name(o))
    return Residual(norm, count, worst)


def perturbed(structure: QpStructure, arity: int = 4, delta=Fraction(1)) -> QpStructure:
    """Copy with one coefficient of ``mu^arity`` shifted, for negative controls."""
    ops = structure.ops
    mu = {d: {k: dict(v) for k, v in comp.items()} for d, comp in ops.mu.items() if d != 2}
    key = sorted(mu[arity], key=repr)[0]
    o = sorted(mu[arity][key])[0]
    mu[arity][key][o] = mu[arity][key][o] + delta
    new = AInfinityOperations(ops.basis, mu, zero=ops.zero)
    return QpStructure(new, structure.p, structure.data)


def rescale_check(p, gamma) -> bool:
    """Multiplying the degree-k part by gamma^k turns mu^4_p into mu^4 for gamma^-2 p
    and mu^6_p into mu^6 for gamma^-2 p, as the grading rescale predicts."""
    gamma = Fraction(gamma)
    c = _coeff_list(p)
    base = build_qp(c)
    target = build_qp([x * gamma ** -2 for x in c])
    B = base.basis
    for d in (4, 6):
        for seq, img in base.ops.mu.get(d, {}).items():
            for o, v in img.items():
                conj = v * gamma ** (B.deg[o] - sum(B.deg[x] for x in seq))
                if conj != target.ops.mu[d].get(seq, {}).get(o, 0):
                    return False
        for seq, img in target.ops.mu.get(d, {}).items():
            for o, v in img.items():
                if v and o not in base.ops.mu[d].get(seq, {}):
                    return False
    return True


# ---------------------------------------------------------------------------
# Twisted complexes


@dataclass
class TwistedComplex:
    """Shifted copies of the vertex objects plus a strictly lower differential.

    ``components[i] = (vertex, sigma)`` stands for X_vertex[-sigma];
    ``delta`` maps ``(i, j, basis)`` to coefficients, an entry going from
    component ``j`` to component ``i``."""
    components: tuple
    delta: dict = field(default_factory=dict)

    def sigma(self, i: int) -> int:
        return self.components[i][1]

    def vertex(self, i: int) -> int:
        return self.components[i][0]


def vertex_object(vertex: int) -> TwistedComplex:
    return TwistedComplex(((vertex, 0),))


def _entries(B: FiniteBasis, src: TwistedComplex, tgt: TwistedComplex):
    for i, (vi, si) in enumerate(tgt.components):
        for j, (vj, sj) in enumerate(src.components):
            for k in range(len(B)):
                if B.source[k] == vj and B.target[k] == vi:
                    yield (i, j, k)


def tw_degree(B: FiniteBasis, src: TwistedComplex, tgt: TwistedComplex, entry) -> int:
    i, j, k = entry
    return B.deg[k] - src.sigma(j) + tgt.sigma(i)


class TwistedOps:
    """A-infinity operations among twisted complexes over a structure on Q.

    ``mu(objects, inputs)`` with ``objects = [X_0, ..., X_d]`` and inputs
    ``(a_d, ..., a_1)``, ``a_l`` a morphism X_{l-1} -> X_l, sums all ways of
    inserting the differentials; a shifted source on the first input
    contributes the sign (-1)^sigma."""

    def __init__(self, ops: AInfinityOperations):
        self.ops = ops
        self.B = ops.basis
        self.max_arity = max(ops.arities())

    def mu(self, objects: Sequence[TwistedComplex], inputs: Sequence[dict]) -> dict:
        d = len(inputs)
        assert len(objects) == d + 1
        out: dict = {}
        # factors in order of traversal: a_1 first
        seq_inputs = list(reversed(inputs))
        budget = self.max_arity - d
        if budget < 0:
            return out

        def gaps(l, left):
            # number of deltas inserted after factor l (at object X_l)
            if l > d:
                yield ()
                return
            for k in range(left + 1):
                if k and not objects[l].delta:
                    break
                for rest in gaps(l + 1, left - k):
                    yield (k,) + rest

        for pattern in gaps(0, budget):
            factors = [objects[0].delta] * pattern[0]
            for l in range(d):
                factors.append(seq_inputs[l])
                factors += [objects[l + 1].delta] * pattern[l + 1]
            m = len(factors)
            if m == 1 or m not in self.ops.mu:
                continue
            self._expand(objects[0], factors, out)
        return {k: v for k, v in out.items() if v}

    def _expand(self, start: TwistedComplex, factors, out):
        table = self.ops.mu[len(factors)]
        # walk through the factors keeping (current component, basis tuple, coeff)
        states = [(None, None, (), 1)]
        for f in factors:
            new = []
            for first_src, comp, ks, c in states:
                for (i, j, k), v in f.items():
                    if comp is not None and j != comp:
                        continue
                    new.append((j if first_src is None else first_src, i, (k,) + ks, c * v))
            states = new
            if not states:
                return
        for first_src, comp, ks, c in states:
            img = table.get(ks)
            if not img:
                continue
            s = _sign(start.sigma(first_src))
            for o, v in img.items():
                key = (comp, first_src, o)
                out[key] = out.get(key, 0) + s * c * v


def cone_object(v, vertex_from: int = 1, vertex_to: int = 2) -> TwistedComplex:
    """Cone(v: X_1 -> X_2) = X_1[1] (+) X_2 with differential v (coordinates in w1, w2)."""
    B = _basis_q()
    w1, w2 = B.find("w1"), B.find("w2")
    delta = {}
    if v[0]:
        delta[(1, 0, w1)] = v[0]
    if v[1]:
        delta[(1, 0, w2)] = v[1]
    return TwistedComplex(((vertex_from, -1), (vertex_to, 0)), delta)


def _lin(*pairs) -> dict:
    out: dict = {}
    for vec, c in pairs:
        for k, v in vec.items():
            out[k] = out.get(k, 0) + c * v
    return {k: v for k, v in out.items() if v}


class ConeObject:
    """The cone of ``v = (a, b)`` (meaning a w1 + b w2) over a structure on Q.

    Elements of the endomorphism complex are dicts ``{(i, j, basis): coeff}``
    with blocks numbered from 0 (component 0 is X_1[1], component 1 is X_2).
    The generic operations come from :class:`TwistedOps`; :meth:`printed_mu1`
    and :meth:`printed_mu2` are the closed formulas written in terms of the
    wedge product, which agree with the generic ones after negating the
    (0, 1) block (see :meth:`flip`)."""

    def __init__(self, structure, v):
        self.structure = structure
        self.ops = structure.ops if hasattr(structure, "ops") else structure
        self.B = self.ops.basis
        self.v = tuple(v)
        self.X = cone_object(self.v)
        self.tw = TwistedOps(self.ops)
        self.zero = self.ops.zero
        self.entries = list(_entries(self.B, self.X, self.X))
        n = {self.B.name(k): k for k in range(len(self.B))}
        self.n = n
        self.v_low = {k: c for k, c in ((n["w1"], self.v[0]), (n["w2"], self.v[1])) if c}
        self.v_high = {k: c for k, c in ((n["w3"], self.v[0]), (n["w4"], self.v[1])) if c}

    # -- raw operations ------------------------------------------------------
    def mu(self, *inputs: dict) -> dict:
        return self.tw.mu([self.X] * (len(inputs) + 1), list(inputs))

    def degree(self, entry) -> int:
        return tw_degree(self.B, self.X, self.X, entry)

    @staticmethod
    def flip(x: dict) -> dict:
        """Negate the (0, 1) block: the identification under which the closed
        formulas hold."""
        return {k: (-v if (k[0], k[1]) == (0, 1) else v) for k, v in x.items()}

    def mu1(self, x: dict) -> dict:
        """Differential in the frame of the closed formulas."""
        return self.flip(self.mu(self.flip(x)))

    def mu2(self, y: dict, x: dict) -> dict:
        """Product in the frame of the closed formulas."""
        return self.flip(self.mu(self.flip(y), self.flip(x)))

    # -- closed formulas -----------------------------------------------------
    def _block(self, x, i, j) -> dict:
        return {k: c for (a, b, k), c in x.items() if (a, b) == (i, j)}

    def _wedge(self, y: dict, x: dict) -> dict:
        out: dict = {}
        for ky, cy in y.items():
            for kx, cx in x.items():
                img = self.B.prod.get((ky, kx))
                if img:
                    for o, c in img.items():
                        out[o] = out.get(o, 0) + cy * cx * c
        return out

    def _mu4(self, *args: dict) -> dict:
        out: dict = {}
        table = self.ops.mu.get(4, {})

        def rec(idx, keys, coeff):
            if idx == len(args):
                img = table.get(tuple(keys))
                if img:
                    for o, c in img.items():
                        out[o] = out.get(o, 0) + coeff * c
                return
            for k, c in args[idx].items():
                rec(idx + 1, keys + [k], coeff * c)

        rec(0, [], 1)
        return out

    def _place(self, out: dict, vec: dict, sign=1):
        for o, c in vec.items():
            i = 0 if self.B.target[o] == 1 else 1
            j = 0 if self.B.source[o] == 1 else 1
            out[(i, j, o)] = out.get((i, j, o), 0) + sign * c

    def printed_mu1(self, x: dict) -> dict:
        b = lambda i, j: self._block(x, i, j)
        v = self.v_low
        out: dict = {}
        self._place(out, self._wedge(b(0, 1), v))
        self._place(out, self._wedge(v, b(0, 0)), -1)
        self._place(out, self._wedge(b(1, 1), v), -1)
        self._place(out, self._wedge(v, b(0, 1)))
        return {k: c for k, c in out.items() if c}

    def printed_mu2(self, y: dict, x: dict) -> dict:
        """Closed product formula.  The term mu4(v, y12, v, x11) is printed in
        the upper right block but its endpoints put it in the lower left; it
        is placed where its endpoints say."""
        Y = lambda i, j: self._block(y, i, j)
        Xb = lambda i, j: self._block(x, i, j)
        v = self.v_low
        out: dict = {}
        for i in range(2):
            for j in range(2):
                for k in range(2):
                    self._place(out, self._wedge(Y(i, k), Xb(k, j)))
        self._place(out, self._mu4(Y(0, 1), v, Xb(0, 1), v))
        self._place(out, self._mu4(v, Y(0, 1), v, Xb(0, 0)))
        self._place(out, self._mu4(Y(1, 1), v, Xb(0, 1), v))
        self._place(out, self._mu4(v, Y(0, 1), Xb(1, 1), v))
        self._place(out, self._mu4(v, Y(0, 0), Xb(0, 1), v))
        self._place(out, self._mu4(v, Y(0, 1), v, Xb(0, 1)))
        return {k: c for k, c in out.items() if c}

    # -- named elements ------------------------------------------------------
    def basis_elements(self) -> list[dict]:
        return [{e: 1} for e in self.entries]

    def element_e(self) -> dict:
        return {(0, 0, self.n["e1"]): -1, (1, 1, self.n["e2"]): 1}

    def element_t(self) -> dict:
        return {(0, 1, k): c for k, c in self.v_high.items()}

    def wedge_scalar(self, a, b):
        """a ^ b for coordinate pairs."""
        return a[0] * b[1] - a[1] * b[0]

    def element_q(self, vstar) -> dict:
        w = self.wedge_scalar(self.v, vstar)
        return {(0, 0, self.n["q1"]): w, (1, 1, self.n["q2"]): w}

    def element_u(self, vstar) -> dict:
        n = self.n
        return {k: c for k, c in (((1, 0, n["w1"]), vstar[0]), ((1, 0, n["w2"]), vstar[1])) if c}

    def element_x12(self, vstar) -> dict:
        n = self.n
        return {k: c for k, c in (((0, 1, n["w3"]), vstar[0]), ((0, 1, n["w4"]), vstar[1])) if c}

    def p_of_v(self):
        c = self.structure.p
        a, b = self.v
        total = 0
        for k in range(NP):
            if c[k]:
                total = total + c[k] * (a ** k) * (b ** (NP - 1 - k))
        return total

    # -- comparison of the two assemblies -------------------------------------
    def audit(self) -> dict:
        """Compare closed formulas with the generic assembly on all basis pairs."""
        basis = self.basis_elements()
        mu1_bad = [x for x in basis if _diff(self.printed_mu1(x), self.mu1(x))]
        mu2_bad = []
        for y in basis:
            for x in basis:
                d = _diff(self.printed_mu2(y, x), self.mu2(y, x))
                if d:
                    mu2_bad.append((next(iter(y)), next(iter(x)), d))
        mc = self.mu()  # curvature: sum of mu^k(delta, ..., delta)
        return {"mu1_equal": not mu1_bad, "mu2_equal": not mu2_bad,
                "mu1_mismatches": mu1_bad, "mu2_mismatches": mu2_bad,
                "maurer_cartan": not mc}


def _diff(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) - v
    return {k: v for k, v in out.items() if v}


def _is_zero(x) -> bool:
    return not x


def _scaled(x: dict, c) -> dict:
    return {k: c * v for k, v in x.items() if v}


def _clean(x: dict) -> dict:
    return {k: v for k, v in x.items() if v}


def _default_vstar(v):
    """Some v* with v ^ v* nonzero."""
    return (0, 1) if v[0] else (1, 0)


# ---------------------------------------------------------------------------
# The cone as an A-infinity endomorphism algebra (frame of the closed formulas)


def _cone_mu(C: ConeObject, *inputs: dict) -> dict:
    return C.flip(C.mu(*[C.flip(x) for x in inputs]))


ConeObject.mu_frame = _cone_mu


def _graded(C: ConeObject, degree: int) -> list:
    return [k for k in C.entries if C.degree(k) == degree]


def _vector(x: dict, keys: list, zero=0) -> list:
    return [x.get(k, zero) for k in keys]


def _mu1_matrix(C: ConeObject, degree: int):
    src, tgt = _graded(C, degree), _graded(C, degree + 1)
    cols = [C.mu1({k: 1}) for k in src]
    return [[col.get(t, 0) for col in cols] for t in tgt], src, tgt


@dataclass
class ConeCohomology:
    """Cohomology of the endomorphism complex with chosen representatives."""
    cone: ConeObject
    representatives: dict  # degree -> list of (name, cocycle)
    boundaries: dict       # degree -> list of coboundaries spanning B

    def dimension(self, degree: int) -> int:
        return len(self.representatives.get(degree, []))

    def classify(self, z: dict, degree: int) -> dict:
        """Coordinates of the class of the cocycle ``z`` in the chosen basis."""
        keys = _graded(self.cone, degree)
        reps = self.representatives.get(degree, [])
        cols = [r for _, r in reps] + self.boundaries.get(degree, [])
        if not cols:
            if any(z.get(k) for k in keys):
                raise ObstructionNonexact("element is not in the span of cohomology representatives")
            return {}
        mat = [[c.get(k, 0) for c in cols] for k in keys]
        sol = dense_solve(mat, _vector(z, keys))
        if sol is None:
            raise ObstructionNonexact("element is not a cocycle, or representatives are incomplete")
        return {name: sol[i] for i, (name, _) in enumerate(reps) if sol[i]}


def cone_cohomology(C: ConeObject, vstar=None) -> ConeCohomology:
    """H^0 with representatives e, t and H^1 with q, u, checked to be a basis.

    The degree of the complex is concentrated in 0 and 1."""
    vstar = vstar or _default_vstar(C.v)
    named = {0: [("e", C.element_e()), ("t", C.element_t())],
             1: [("q", C.element_q(vstar)), ("u", C.element_u(vstar))]}
    reps, bounds = {}, {}
    for deg in (0, 1):
        mat, src, tgt = _mu1_matrix(C, deg)
        keys = src
        kernel = dense_kernel(mat, len(src)) if tgt else [[1 if i == j else 0 for i in range(len(src))]
                                                       for j in range(len(src))]
        prev, _, _ = _mu1_matrix(C, deg - 1)
        lower = _graded(C, deg - 1)
        bvecs = [C.mu1({k: 1}) for k in lower]
        bvecs = [b for b in bvecs if b]
        # independent coboundaries
        basis_b = []
        for b in bvecs:
            if not basis_b:
                basis_b.append(b)
                continue
            mat_b = [[c.get(k, 0) for c in basis_b] for k in keys]
            if dense_solve(mat_b, _vector(b, keys)) is None:
                basis_b.append(b)
        h_dim = len(kernel) - len(basis_b)
        chosen = []
        for name, z in named[deg]:
            if any(_cone_mu1_entries(C, z)):
                continue
            cols = [c for _, c in chosen] + basis_b
            if cols:
                mat_c = [[c.get(k, 0) for c in cols] for k in keys]
                if dense_solve(mat_c, _vector(z, keys)) is not None:
                    continue
            chosen.append((name, z))
        if len(chosen) != h_dim:
            raise ObstructionNonexact(f"named representatives span {len(chosen)} of {h_dim} classes in degree {deg}")
        reps[deg] = chosen
        bounds[deg] = basis_b
    return ConeCohomology(C, reps, bounds)


def _cone_mu1_entries(C, z):
    return C.mu1(z).values()


@dataclass
class EndoRing:
    cohomology: ConeCohomology
    products: dict          # (name_y, name_x) -> class coordinates of mu2(y, x)
    p_of_v: object
    t_squared: dict

    @property
    def t_squared_is_pv(self) -> bool:
        c = self.t_squared
        ok_e = not (c.get("e", 0) - self.p_of_v)
        return ok_e and not c.get("t", 0) and set(c) <= {"e", "t"}

    @property
    def local(self) -> bool:
        """H^0 is local exactly when t is nilpotent, i.e. t^2 = 0."""
        return not self.t_squared


def cone_endo_ring(C: ConeObject, vstar=None) -> EndoRing:
    """Products of all pairs of named cohomology generators at chain level."""
    H = cone_cohomology(C, vstar)
    gens = [(n, z, d) for d, reps in H.representatives.items() for n, z in reps]
    table = {}
    for ny, y, dy in gens:
        for nx, x, dx in gens:
            if dx + dy > 1:
                continue
            table[(ny, nx)] = H.classify(C.mu2(y, x), dx + dy)
    t_sq = table.get(("t", "t"), {})
    return EndoRing(H, table, C.p_of_v(), t_sq)


# ---------------------------------------------------------------------------
# Splitting


def _sqrt(x):
    if isinstance(x, NovikovScalar):
        return x.sqrt()
    s = NovikovScalar.constant(x).sqrt()
    if len(s.terms) == 1 and s.terms[0][0] == 0:
        c = s.terms[0][1]
        return c if isinstance(c, Fraction) else s
    return s


@dataclass
class SplitResult:
    splits: bool
    idempotent: dict | None = None
    coefficient: object = None   # the idempotent is (e + 2 * coefficient * t) / 2
    idempotent_exact: bool = False
    orthogonal: bool = False

    def __bool__(self):
        return self.splits


def splits(C: ConeObject) -> SplitResult:
    """Whether the cone splits, with the witness idempotent (e + p(v)^(-1/2) t)/2."""
    pv = C.p_of_v()
    if _is_zero(pv):
        return SplitResult(False)
    root = _sqrt(pv)  # raises SqrtUnavailable if the leading coefficient is not a square
    inv = root.inverse() if isinstance(root, NovikovScalar) else 1 / root
    half = Fraction(1, 2)
    coeff = inv * half
    e, t = C.element_e(), C.element_t()
    pi = _lin((e, half), (t, coeff))
    comp = _lin((e, 1), (pi, -1))
    sq = _diff(C.mu2(pi, pi), pi)
    orth = C.mu2(pi, comp), C.mu2(comp, pi)
    return SplitResult(True, pi, coeff, not sq, not orth[0] and not orth[1])


# ---------------------------------------------------------------------------
# Homotopy idempotents


def _compositions(d: int, r: int, cap: int):
    """Ordered r-tuples of integers in [1, cap] summing to d."""
    if r == 1:
        if 1 <= d <= cap:
            yield (d,)
        return
    for k in range(1, min(cap, d - r + 1) + 1):
        for rest in _compositions(d - k, r - 1, cap):
            yield (k,) + rest


def _idempotent_lhs(C: ConeObject, P: dict, d: int, include_mu1: bool) -> dict:
    """Sum over r and k_1 + ... + k_r = d of mu^r(p^k_r, ..., p^k_1)."""
    out: dict = {}
    max_r = C.tw.max_arity
    for r in range(1 if include_mu1 else 2, min(d, max_r) + 1):
        for ks in _compositions(d, r, d):
            if any(k not in P or not P[k] for k in ks):
                continue
            args = [P[k] for k in reversed(ks)]
            out = _lin((out, 1), (C.mu_frame(*args), 1))
    return out


@dataclass
class HomotopyIdempotent:
    terms: dict            # d -> p^d
    order: int
    equations: dict        # d -> bool, equation holds exactly

    @property
    def valid(self) -> bool:
        return all(self.equations.values())


def lift_idempotent(C: ConeObject, p1: dict, order: int = 6) -> HomotopyIdempotent:
    """Run the inductive lift of a cohomology idempotent, then check every equation."""
    if C.mu1(p1):
        raise ObstructionNonexact("p^1 is not a cocycle")
    P = {1: dict(p1)}
    for d in range(2, order + 1):
        target = P.get(d - 1, {}) if d % 2 == 0 else {}
        rhs = _diff(target, _idempotent_lhs(C, P, d, include_mu1=False))
        src = _graded(C, 1 - d)
        if not rhs:
            continue
        cols = [C.mu1({k: 1}) for k in src]
        names = [("p", k) for k in src]
        if d >= 3:
            # adjust p^(d-1) by a cocycle c: contributes mu2(c, p1) + mu2(p1, c) - [d even] c
            zkeys = _graded(C, 2 - d)
            mat, _, tgt = _mu1_matrix(C, 2 - d)
            kernel = dense_kernel(mat, len(zkeys)) if tgt else [
                [1 if i == j else 0 for i in range(len(zkeys))] for j in range(len(zkeys))]
            for vec in kernel:
                c = {k: x for k, x in zip(zkeys, vec) if x}
                col = _lin((C.mu2(c, P[1]), 1), (C.mu2(P[1], c), 1))
                if d % 2 == 0:
                    col = _lin((col, 1), (c, -1))
                cols.append(col)
                names.append(("c", c))
        allkeys = sorted({k for col in cols for k in col} | set(rhs), key=repr)
        if not cols:
            raise ObstructionNonexact(f"order {d}: nonzero defect and nothing to solve with")
        mat = [[col.get(k, 0) for col in cols] for k in allkeys]
        sol = dense_solve(mat, _vector(rhs, allkeys))
        if sol is None:
            raise ObstructionNonexact(f"order {d}: obstruction is not exact")
        pd: dict = {}
        for (kind, obj), x in zip(names, sol):
            if not x:
                continue
            if kind == "p":
                pd[obj] = pd.get(obj, 0) + x
            else:
                P[d - 1] = _lin((P.get(d - 1, {}), 1), (obj, x))
        if pd:
            P[d] = _clean(pd)
    eqs = {}
    for d in range(1, order + 1):
        lhs = _idempotent_lhs(C, P, d, include_mu1=True)
        target = P.get(d - 1, {}) if d % 2 == 0 else {}
        eqs[d] = not _diff(lhs, target)
    return HomotopyIdempotent(P, order, eqs)


# ---------------------------------------------------------------------------
# Yoneda summand


class YonedaSummand:
    """hom(X, Y)[q] with the differential built from a homotopy idempotent on Y.

    Works in the generic frame of :class:`TwistedOps`; the idempotent is
    transported from the frame of the closed formulas."""

    def __init__(self, C: ConeObject, P: HomotopyIdempotent, X: TwistedComplex | None = None,
                 q_order: int = 4):
        if q_order < 1:
            raise ValueError("q_order must be at least 1")
        self.C = C
        self.X = X if X is not None else C.X
        self.Y = C.X
        self.p = {k: C.flip(v) for k, v in P.terms.items() if v}
        self.q_order = q_order
        self.entries = list(_entries(C.B, self.X, self.Y))

    def differential(self, a: dict, j: int) -> dict:
        """mu_M^1(a q^j) as {j': element of hom(X, Y)}.

        The idempotent terms carry the Koszul sign (-1)^(k_1 + ... + k_r) of
        the reduced degrees of the p^k, and the shift a q^j -> a q^(j-1) the
        sign (-1)^|a|; without them d^2 fails already for p = 0."""
        out: dict = {}
        for k, c in a.items():
            for slot, val in self._on_basis(k, j).items():
                out[slot] = _lin((out.get(slot, {}), 1), (val, c))
        return {k: v for k, v in out.items() if v}

    def _on_basis(self, key, j: int) -> dict:
        a = {key: 1}
        tw = self.C.tw
        out: dict = {}
        for r in range(0, tw.max_arity):
            for total in range(r, j + 1):
                if r == 0 and total:
                    break
                for ks in _compositions(total, r, total) if r else [()]:
                    if any(k not in self.p for k in ks):
                        continue
                    args = [self.p[k] for k in reversed(ks)] + [a]
                    val = tw.mu([self.X] + [self.Y] * (r + 1), args)
                    if val:
                        out[j - total] = _lin((out.get(j - total, {}), 1), (val, _sign(total)))
        if j % 2 == 1:
            deg = tw_degree(self.C.B, self.X, self.Y, key)
            out[j - 1] = _lin((out.get(j - 1, {}), 1), (a, _sign(deg)))
        return out

    def apply(self, element: dict) -> dict:
        out: dict = {}
        for j, a in element.items():
            for jj, b in self.differential(a, j).items():
                out[jj] = _lin((out.get(jj, {}), 1), (b, 1))
        return {k: v for k, v in out.items() if v}

    def square_zero(self) -> dict:
        """d^2 on every basis element a q^j with j <= q_order; returns j -> bool."""
        res = {}
        for j in range(self.q_order + 1):
            ok = True
            for k in self.entries:
                if self.apply(self.apply({j: {k: 1}})):
                    ok = False
                    break
            res[j] = ok
        return res


def yoneda_summand_differential(C: ConeObject, P: HomotopyIdempotent, q_order: int = 4,
                                X: TwistedComplex | None = None) -> YonedaSummand:
    return YonedaSummand(C, P, X, q_order)


# ---------------------------------------------------------------------------
# Pushforward of Hochschild cochains to the cone


def gamma_tw(g0: dict, g1: dict, C: ConeObject) -> dict:
    """Leading term g^{tw,0} = g^0 + g^1(delta) on the cone.

    ``g0`` maps a vertex to an element of e_v Q e_v, ``g1`` maps an arrow
    basis index to the image of g^1 on it.  A shifted source contributes
    (-1)^sigma.  The result is in the frame of the closed formulas."""
    out: dict = {}
    X = C.X
    for i, (vert, sig) in enumerate(X.components):
        for k, c in g0.get(vert, {}).items():
            out[(i, i, k)] = out.get((i, i, k), 0) + _sign(sig) * c
    for (i, j, a), c in X.delta.items():
        for k, x in g1.get(a, {}).items():
            out[(i, j, k)] = out.get((i, j, k), 0) + _sign(X.sigma(j)) * c * x
    return C.flip(_clean(out))


def standard_g(C: ConeObject, which: int) -> tuple[dict, dict]:
    """The generators g_1, g_2 of the first Hochschild group: g^0 = q_k, g^1 = 0."""
    name = "q1" if which == 1 else "q2"
    return {which: {C.n[name]: 1}}, {}


def cone(v, p=None, symbolic=False) -> ConeObject:
    if not (v[0] or v[1]):
        raise ValueError("the cone needs v != 0")
    return ConeObject(build_qp(p, symbolic=symbolic), v)


def _unit_vstar(v):
    """v* with v ^ v* = 1."""
    if v[0]:
        return (0, _recip(v[0]))
    return (-_recip(v[1]), 0)


def _recip(x):
    return x.inverse() if isinstance(x, NovikovScalar) else 1 / Fraction(x)


def cone_product_report(C: ConeObject, vstar=None) -> dict:
    """The explicit products of the named generators.

    mu2(t, t) and mu2(u, u) are compared at chain level; mu2(u, t) and
    mu2(t, u) are compared with -q/2 and +q/2 as classes, and their chain
    level decomposition against mu1 of (v* in the upper right block) is
    reported with the coefficient found."""
    vstar = vstar or _default_vstar(C.v)
    e, t = C.element_e(), C.element_t()
    u, q, x12 = C.element_u(vstar), C.element_q(vstar), C.element_x12(vstar)
    pv = C.p_of_v()
    tt = C.mu2(t, t)
    uu = C.mu2(u, u)
    ut, tu = C.mu2(u, t), C.mu2(t, u)
    H = cone_cohomology(C, vstar)
    half = Fraction(1, 2)
    cls_ut, cls_tu = H.classify(ut, 1), H.classify(tu, 1)
    d = C.mu1(x12)

    def split(z, qsign):
        # z = a * mu1(x12) + qsign * q / 2 ; return a or None
        rest = _lin((z, 1), (q, -qsign * half))
        for a in (half, -half):
            if not _diff(rest, _scaled(d, a)):
                return a
        return None

    return {
        "tt_is_pv_e": not _diff(tt, _scaled(e, pv)),
        "uu_zero": not uu,
        "ut_class_is_minus_half_q": _class_eq(cls_ut, {"q": -half}),
        "tu_class_is_plus_half_q": _class_eq(cls_tu, {"q": half}),
        "ut_mu1_coefficient": split(ut, -1),
        "tu_mu1_coefficient": split(tu, 1),
    }


def _class_eq(a: dict, b: dict) -> bool:
    keys = set(a) | set(b)
    return all(not (a.get(k, 0) - b.get(k, 0)) for k in keys)


def gamma_report(C: ConeObject) -> dict:
    """g_1^{tw,0} ~ mu2(u, t) and g_2^{tw,0} ~ -mu2(u, t) in cohomology, v ^ v* = 1."""
    vstar = _unit_vstar(C.v)
    H = cone_cohomology(C, vstar)
    ut = H.classify(C.mu2(C.element_u(vstar), C.element_t()), 1)
    g1 = H.classify(gamma_tw(*standard_g(C, 1), C), 1)
    g2 = H.classify(gamma_tw(*standard_g(C, 2), C), 1)
    neg = {k: -v for k, v in ut.items()}
    return {"g1_matches": _class_eq(g1, ut), "g2_matches": _class_eq(g2, neg),
            "zero_maps_to_zero": not gamma_tw({}, {}, C)}
