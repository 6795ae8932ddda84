"""Graded quiver algebras, quadratic duality and Hochschild cohomology.

Paths are stored as *traversal words*: the tuple ``(a, b)`` means "first
``a``, then ``b``", which is the product usually written ``b a``.  All
spaces are bucketed by their endpoints, so tensor products are automatically
taken over the semisimple base spanned by the vertex idempotents.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as _cartesian
from typing import Iterable, Sequence

from .errors import NotQuadratic, TruncationUnstable
from .linalg import echelon, nullspace, novikov_rank, rank
from .novikov import NovikovScalar


@dataclass(frozen=True)
class Arrow:
    name: str
    source: int
    target: int
    degree: int


def _add_into(acc: dict, vec: dict, scale=1):
    for k, v in vec.items():
        nv = acc.get(k, 0) + scale * v
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)


class GradedQuiverAlgebra:
    """Path algebra of a graded quiver modulo homogeneous quadratic relations.

    ``relations`` is a list of ``{traversal word: coefficient}`` dicts.  The
    length-``n`` piece is built from the length ``n-1`` piece as
    ``(A_{n-1} (x) W) / image(A_{n-2} (x) J)``, choosing as basis the words
    that are not eliminated; right multiplication by arrows is recorded along
    the way and every other product is derived from it.
    """

    def __init__(self, vertices: Sequence[int], arrows: Sequence[Arrow],
                 relations: Sequence[dict], names: dict | None = None):
        self.vertices = tuple(vertices)
        self.arrows = tuple(arrows)
        self.relations = [{tuple(w): Fraction(c) for w, c in r.items() if c} for r in relations]
        for r in self.relations:
            for w in r:
                if len(w) != 2:
                    raise NotQuadratic(f"relation word {w} has length {len(w)}")
        self.names = dict(names or {})
        # piece n: list of representative words, parallel endpoint/degree data
        self._words: list[list[tuple]] = [[(v,) for v in self.vertices]]
        self._append: list[dict] = []
        self._mul_cache: dict = {}

    # -- structure of the pieces -------------------------------------------
    def _ends(self, n: int, b: int) -> tuple[int, int]:
        w = self._words[n][b]
        if n == 0:
            return w[0], w[0]
        return self.arrows[w[0]].source, self.arrows[w[-1]].target

    def source(self, n: int, b: int) -> int:
        return self._ends(n, b)[0]

    def target(self, n: int, b: int) -> int:
        return self._ends(n, b)[1]

    def degree(self, n: int, b: int) -> int:
        if n == 0:
            return 0
        return sum(self.arrows[a].degree for a in self._words[n][b])

    def word(self, n: int, b: int) -> tuple:
        return self._words[n][b]

    def piece(self, n: int) -> list[tuple]:
        self._build(n)
        return self._words[n]

    def dim(self, n: int) -> int:
        return len(self.piece(n))

    def _build(self, n: int):
        while len(self._words) <= n:
            self._extend()

    def _extend(self):
        n = len(self._words) - 1  # build piece n + 1
        coords = []
        for b in range(len(self._words[n])):
            t = self.target(n, b)
            for a, arr in enumerate(self.arrows):
                if arr.source == t:
                    coords.append((b, a))
        index = {c: k for k, c in enumerate(coords)}
        rows = []
        if n >= 1:
            for c in range(len(self._words[n - 1])):
                t = self.target(n - 1, c)
                for r in self.relations:
                    row: dict = {}
                    for (x, y), coeff in r.items():
                        if self.arrows[x].source != t:
                            continue
                        for b, v in self._append[n - 1][(c, x)].items():
                            k = index.get((b, y))
                            if k is not None:
                                _add_into(row, {k: v * coeff})
                    if row:
                        rows.append(row)
        pivots, red = echelon(rows)
        pset = set(pivots)
        free = [k for k in range(len(coords)) if k not in pset]
        position = {k: m for m, k in enumerate(free)}
        words = []
        for k in free:
            b, a = coords[k]
            words.append(self._words[n][b] + (a,) if n else (a,))
        table = {}
        for k, (b, a) in enumerate(coords):
            table[(b, a)] = {position[k]: Fraction(1)} if k in position else {}
        for p, r in zip(pivots, red):
            table[coords[p]] = {position[f]: -v for f, v in r.items() if f != p}
        self._words.append(words)
        self._append.append(table)

    # -- products -----------------------------------------------------------
    def append(self, n: int, vec: dict, arrow: int) -> dict:
        """``vec`` (in piece ``n``) followed by ``arrow``."""
        self._build(n + 1)
        out: dict = {}
        for b, v in vec.items():
            img = self._append[n].get((b, arrow))
            if img:
                _add_into(out, img, v)
        return out

    def multiply(self, m: int, u: dict, n: int, v: dict) -> dict:
        """Traverse ``u`` (piece ``m``) and then ``v`` (piece ``n``); lands in piece ``m + n``."""
        out: dict = {}
        for b1, c1 in u.items():
            for b2, c2 in v.items():
                img = self._mul_basis(m, b1, n, b2)
                if img:
                    _add_into(out, img, c1 * c2)
        return out

    def _mul_basis(self, m, b1, n, b2) -> dict:
        key = (m, b1, n, b2)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        if n == 0:
            res = {b1: Fraction(1)} if self.target(m, b1) == self._words[0][b2][0] else {}
        elif m == 0:
            res = {b2: Fraction(1)} if self.source(n, b2) == self._words[0][b1][0] else {}
        else:
            res = {b1: Fraction(1)}
            for k, a in enumerate(self._words[n][b2]):
                res = self.append(m + k, res, a)
                if not res:
                    break
        self._mul_cache[key] = res
        return res

    def arrow_vector(self, a: int) -> dict:
        self._build(1)
        return {self._words[1].index((a,)): Fraction(1)}

    # -- convenience ----------------------------------------------------------
    def total_dimension(self, max_length: int) -> int:
        return sum(self.dim(n) for n in range(max_length + 1))

    def is_finite(self, probe: int = 6) -> bool:
        return self.dim(probe) == 0

    def label(self, n: int, b: int) -> str:
        w = self._words[n][b]
        if w in self.names:
            return self.names[w]
        if n == 0:
            return f"e{w[0]}"
        # written right to left, as products usually are
        return "".join(self.arrows[a].name for a in reversed(w))

    def doubled(self) -> "GradedQuiverAlgebra":
        """Same quiver and relations with every arrow degree multiplied by 2."""
        arrows = [Arrow(a.name, a.source, a.target, 2 * a.degree) for a in self.arrows]
        return GradedQuiverAlgebra(self.vertices, arrows, self.relations, self.names)

    def ungraded(self) -> "GradedQuiverAlgebra":
        arrows = [Arrow(a.name, a.source, a.target, 0) for a in self.arrows]
        return GradedQuiverAlgebra(self.vertices, arrows, self.relations, self.names)


def quiver_q() -> GradedQuiverAlgebra:
    """The two-vertex algebra with e2 Q e1 and e1 Q e2 both two-dimensional,
    products given by the wedge product, and total dimension 8."""
    arrows = [Arrow("w1", 1, 2, 0), Arrow("w2", 1, 2, 0),
              Arrow("w3", 2, 1, 1), Arrow("w4", 2, 1, 1)]
    w1, w2, w3, w4 = range(4)
    relations = [
        {(w2, w3): 1, (w1, w4): 1},   # w3 w2 + w4 w1
        {(w4, w1): 1, (w3, w2): 1},   # w1 w4 + w2 w3
        {(w1, w3): 1},                # w3 w1
        {(w2, w4): 1},                # w4 w2
        # products V x V -> Lambda^2 V are antisymmetric in both orders, so
        # w1 w3 and w2 w4 vanish as well; without them the algebra is infinite
        {(w3, w1): 1},
        {(w4, w2): 1},
    ]
    names = {(w2, w3): "q1", (w4, w1): "q2"}
    return GradedQuiverAlgebra((1, 2), arrows, relations, names)


def free_algebra(degree: int) -> GradedQuiverAlgebra:
    """One vertex, one loop of the given degree, no relations."""
    return GradedQuiverAlgebra((1,), [Arrow("w", 1, 1, degree)], [])


def exterior_algebra(n: int = 2) -> GradedQuiverAlgebra:
    """Ungraded exterior algebra on ``n`` generators, as a one-vertex quiver."""
    arrows = [Arrow(f"x{k + 1}", 1, 1, 0) for k in range(n)]
    rels = [{(k, k): 1} for k in range(n)]
    rels += [{(a, b): 1, (b, a): 1} for a in range(n) for b in range(a + 1, n)]
    return GradedQuiverAlgebra((1,), arrows, rels)


def non_koszul_example() -> GradedQuiverAlgebra:
    """k<x, y> / (y^2, x^2 + x y): quadratic, and the smallest two-relation
    algebra we found whose Koszul resolution breaks (in length 4)."""
    arrows = [Arrow("x", 1, 1, 0), Arrow("y", 1, 1, 0)]
    x, y = 0, 1
    return GradedQuiverAlgebra((1,), arrows, [{(y, y): 1}, {(x, x): 1, (y, x): 1}])


def hilbert_numerical_check(A: GradedQuiverAlgebra, D: int) -> dict[int, bool]:
    """Necessary condition for Koszulness: H_A(t) H_{A^!}(-t) = 1 through
    length ``D``, per pair of endpoints (matrix-valued Hilbert series)."""
    dual = quadratic_dual(A).algebra
    verts = A.vertices

    def hmat(alg, n):
        m = {(s, t): 0 for s in verts for t in verts}
        for b in range(alg.dim(n)):
            m[(alg.source(n, b), alg.target(n, b))] += 1
        return m

    ha = [hmat(A, n) for n in range(D + 1)]
    hd = [hmat(dual, n) for n in range(D + 1)]
    out = {}
    for n in range(D + 1):
        ok = True
        for s in verts:
            for t in verts:
                # first an A^! path s -> k (reversed arrows), then an A path k -> t
                tot = sum((-1) ** (n - i) * hd[n - i][(k, s)] * ha[i][(k, t)]
                          for i in range(n + 1) for k in verts)
                ok = ok and tot == (1 if (n == 0 and s == t) else 0)
        out[n] = ok
    return out


# ---------------------------------------------------------------------------
# Quadratic duality


@dataclass
class KoszulDualData:
    algebra: GradedQuiverAlgebra
    perp: list[dict]
    original: GradedQuiverAlgebra

    def basis(self, max_length: int) -> dict[int, list[tuple]]:
        return {n: self.algebra.piece(n) for n in range(max_length + 1)}


def _length_two_words(arrows: Sequence[Arrow]) -> list[tuple]:
    return [(x, y) for x, ax in enumerate(arrows) for y, ay in enumerate(arrows)
            if ax.target == ay.source]


def quadratic_dual(A: GradedQuiverAlgebra) -> KoszulDualData:
    """Dual arrows run backwards with degree ``1 - |w|``; the dual relations
    are the orthogonal complement of J for the pairing in which the dual word
    ``(x, y)`` meets the word ``(y, x)`` with sign ``(-1)^{|y|}``."""
    dual_arrows = [Arrow(a.name + "^", a.target, a.source, 1 - a.degree) for a in A.arrows]
    dwords = _length_two_words(dual_arrows)
    col = {w: k for k, w in enumerate(dwords)}
    rows = []
    for r in A.relations:
        row = {}
        for (y, x), c in r.items():
            k = col.get((x, y))
            if k is not None:
                row[k] = row.get(k, 0) + c * (-1) ** A.arrows[y].degree
        rows.append({k: v for k, v in row.items() if v})
    perp = [{dwords[k]: v for k, v in vec.items()} for vec in nullspace(rows, len(dwords))]
    names = {}
    return KoszulDualData(GradedQuiverAlgebra(A.vertices, dual_arrows, perp, names), perp, A)


def relation_span_equal(a: Sequence[dict], b: Sequence[dict]) -> bool:
    """Whether two lists of relations span the same subspace."""
    keys = sorted({w for r in list(a) + list(b) for w in r})
    idx = {w: k for k, w in enumerate(keys)}
    ra = [{idx[w]: c for w, c in r.items()} for r in a]
    rb = [{idx[w]: c for w, c in r.items()} for r in b]
    return rank(ra) == rank(rb) == rank(ra + rb)


def double_dual_matches(A: GradedQuiverAlgebra) -> bool:
    """Dualising twice returns the original relations (dual of dual arrow k is arrow k)."""
    AA = quadratic_dual(quadratic_dual(A).algebra).algebra
    same_arrows = all(x.source == y.source and x.target == y.target and x.degree == y.degree
                      for x, y in zip(AA.arrows, A.arrows))
    return same_arrows and relation_span_equal(AA.relations, A.relations)


# ---------------------------------------------------------------------------
# Koszul complexes


def _complex_rank(rows_of: dict, src_basis, tgt_index) -> int:
    rows = []
    for s in src_basis:
        img = rows_of(s)
        row = {tgt_index[k]: v for k, v in img.items() if v}
        if row:
            rows.append(row)
    return rank(rows)


def _printed_koszul_homology(A: GradedQuiverAlgebra, D: int) -> dict:
    """Homology of A^! (x) A with x^! (x) x -> sum (-1)^{|x|} x^! w^v (x) w x.

    Returns ``{(a, b): dim}`` for A^!-length ``a`` and A-length ``b`` with
    ``a + b <= D``."""
    dual = quadratic_dual(A).algebra
    amax = D
    bmax = D
    for n in range(D + 2):
        dual.piece(n)
        A.piece(n)

    def basis(a, b):
        if a < 0 or b < 0:
            return []
        return [(x, y) for x in range(dual.dim(a)) for y in range(A.dim(b))
                if dual.source(a, x) == A.target(b, y)]

    def d(a, b, x, y):
        out = {}
        sgn = (-1) ** A.degree(b, y)
        for r in range(len(A.arrows)):
            left = dual.multiply(1, dual.arrow_vector(r), a, {x: Fraction(1)})
            if not left:
                continue
            right = A.append(b, {y: Fraction(1)}, r)
            for k1, c1 in left.items():
                for k2, c2 in right.items():
                    _add_into(out, {(k1, k2): sgn * c1 * c2})
        return out

    ranks = {}

    def rk(a, b):
        if (a, b) not in ranks:
            src = basis(a, b)
            tgt = {k: n for n, k in enumerate(basis(a + 1, b + 1))}
            ranks[(a, b)] = _complex_rank(lambda s: d(a, b, *s), src, tgt) if src and tgt else 0
        return ranks[(a, b)]

    out = {}
    for a in range(amax + 1):
        for b in range(bmax + 1 - a):
            dim = len(basis(a, b))
            h = dim - rk(a, b) - (rk(a - 1, b - 1) if a and b else 0)
            out[(a, b)] = h
    return out


def _koszul_coalgebra(A: GradedQuiverAlgebra, n: int):
    """Basis (in reduced echelon form over length-n words) of the intersection
    of all W^i J W^(n-2-i), plus the word list."""
    if n == 0:
        return [(v,) for v in A.vertices], [{k: Fraction(1)} for k in range(len(A.vertices))], "vertex"
    words = [(a,) for a in range(len(A.arrows))]
    for _ in range(n - 1):
        words = [w + (a,) for w in words for a, arr in enumerate(A.arrows)
                 if A.arrows[w[-1]].target == arr.source]
    if n == 1:
        return words, [{k: Fraction(1)} for k in range(len(words))], "word"
    idx = {w: k for k, w in enumerate(words)}
    # annihilator of J inside length-two words
    two = _length_two_words(A.arrows)
    tidx = {w: k for k, w in enumerate(two)}
    jrows = [{tidx[w]: c for w, c in r.items()} for r in A.relations]
    ann = [{two[k]: v for k, v in g.items()} for g in _annihilator(jrows, len(two))]
    constraints = []
    seen = set()
    for i in range(n - 1):
        for w in words:
            u, v = w[:i], w[i + 2:]
            if (i, u, v) in seen:
                continue
            seen.add((i, u, v))
            for g in ann:
                row = {}
                for (x, y), c in g.items():
                    k = idx.get(u + (x, y) + v)
                    if k is not None:
                        row[k] = c
                if row:
                    constraints.append(row)
    basis = nullspace(constraints, len(words))
    pivots, red = echelon(basis)
    return words, red, pivots


def _annihilator(rows: list[dict], ncols: int) -> list[dict]:
    """Functionals vanishing on the span of ``rows`` (standard dot product)."""
    # the annihilator is the nullspace of the matrix whose rows are the vectors
    return nullspace(rows, ncols)


def _classical_koszul_homology(A: GradedQuiverAlgebra, D: int) -> dict:
    """Homology of the left Koszul resolution A (x) A^(dual coalgebra) of the
    base, split by ``(b, n)``: A-length ``b`` and coalgebra length ``n``.

    Signs play no role for exactness, so the differential just peels off the
    last letter of the coalgebra word and prepends it to the algebra side.
    """
    co = {}
    for n in range(D + 2):
        co[n] = _koszul_coalgebra(A, n)
    for b in range(D + 2):
        A.piece(b)

    def co_ends(n, k):
        words, red, piv = co[n]
        if n == 0:
            v = words[k][0]
            return v, v
        w = words[min(red[k])]
        return A.arrows[w[0]].source, A.arrows[w[-1]].target

    def basis(b, n):
        if b < 0 or n < 0 or b > D + 1:
            return []
        return [(x, k) for x in range(A.dim(b)) for k in range(len(co[n][1]))
                if A.source(b, x) == co_ends(n, k)[1]]

    def coords(n, vec_words: dict) -> dict:
        words, red, piv = co[n]
        if n <= 1:
            out = {}
            for w, c in vec_words.items():
                k = words.index(w)
                out[k] = out.get(k, 0) + c
            return {k: v for k, v in out.items() if v}
        idx = {w: k for k, w in enumerate(words)}
        res = {}
        for m, p in enumerate(piv):
            c = vec_words.get(words[p])
            if c:
                res[m] = c
        return res

    def d(b, n, x, k):
        words, red, piv = co[n]
        vec = red[k]
        acc: dict = {}
        if n == 1:
            w = words[k]
            img = A.multiply(1, A.arrow_vector(w[0]), b, {x: Fraction(1)})
            return {(y, v0): c for y, c in img.items() for v0 in [co[0][0].index((A.arrows[w[0]].source,))]}
        pieces: dict = {}
        for col, c in vec.items():
            w = words[col]
            pieces.setdefault(w[-1], {})
            pieces[w[-1]][w[:-1]] = pieces[w[-1]].get(w[:-1], 0) + c
        for last, rest in pieces.items():
            img = A.multiply(1, A.arrow_vector(last), b, {x: Fraction(1)})
            if not img:
                continue
            cc = coords(n - 1, rest)
            for y, c1 in img.items():
                for m, c2 in cc.items():
                    _add_into(acc, {(y, m): c1 * c2})
        return acc

    ranks = {}

    def rk(b, n):
        if (b, n) not in ranks:
            src = basis(b, n)
            tgt = {s: m for m, s in enumerate(basis(b + 1, n - 1))}
            ranks[(b, n)] = _complex_rank(lambda s: d(b, n, *s), src, tgt) if src and tgt and n >= 1 else 0
        return ranks[(b, n)]

    out = {}
    for total in range(D + 1):
        for n in range(total + 1):
            b = total - n
            dim = len(basis(b, n))
            out[(b, n)] = dim - rk(b, n) - (rk(b - 1, n + 1) if b >= 1 else 0)
    return out


@dataclass
class KoszulReport:
    exact: dict[int, bool]
    resolution_homology: dict
    printed_homology: dict
    printed_exact: dict[int, bool]

    @property
    def koszul(self) -> bool:
        return all(self.exact.values())


def koszul_acyclicity(A: GradedQuiverAlgebra, D: int, printed: bool = True) -> KoszulReport:
    """Koszulness test through internal (path-length) degree ``D``.

    ``exact[n]`` says whether the Koszul resolution of the base is exact in
    total length ``n`` (homology only the base itself in length 0).  The
    complex ``A^! (x) A`` with the one-sided differential is also assembled;
    for self-injective algebras its homology away from A^!-length 0 vanishes
    exactly when the algebra is Koszul, and ``printed_exact`` reports that.
    """
    res = _classical_koszul_homology(A, D)
    nverts = len(A.vertices)
    exact = {}
    for n in range(D + 1):
        ok = True
        for (b, m), hdim in res.items():
            if b + m != n:
                continue
            expect = nverts if (b, m) == (0, 0) else 0
            ok = ok and hdim == expect
        exact[n] = ok
    ph, pexact = {}, {}
    if printed:
        ph = _printed_koszul_homology(A, D)
        for n in range(D + 1):
            pexact[n] = all(h == 0 for (a, b), h in ph.items() if a + b == n and a >= 1)
    return KoszulReport(exact, res, ph, pexact)


# ---------------------------------------------------------------------------
# Hochschild cohomology through the Koszul dual


class KoszulHH:
    """The diagonal part of A^! (x) A with the two-sided differential."""

    def __init__(self, A: GradedQuiverAlgebra):
        self.A = A
        self.dual = quadratic_dual(A).algebra
        self._ranks: dict = {}
        self._bases: dict = {}
        self._bmax = self._finite_length(A)

    @staticmethod
    def _finite_length(A, probe=12) -> int:
        for n in range(probe + 1):
            if A.dim(n) == 0:
                return n - 1
        return probe

    def basis(self, i: int, total: int) -> list[tuple]:
        """Pairs (x^!, x) with A^!-length ``i`` and ``|x^!| + |x| = total``."""
        key = (i, total)
        if key in self._bases:
            return self._bases[key]
        out = []
        if i >= 0:
            D, A = self.dual, self.A
            for x in range(D.dim(i)):
                for b in range(self._bmax + 1):
                    for y in range(A.dim(b)):
                        if (D.source(i, x) == A.target(b, y) and D.target(i, x) == A.source(b, y)
                                and D.degree(i, x) + A.degree(b, y) == total):
                            out.append((x, b, y))
        self._bases[key] = out
        return out

    def differential(self, i: int, elem: tuple) -> dict:
        D, A = self.dual, self.A
        x, b, y = elem
        dx, dy = D.degree(i, x), A.degree(b, y)
        out: dict = {}
        for r, arr in enumerate(A.arrows):
            wv = D.arrow_vector(r)
            # x^! w^v (x) w x
            left = D.multiply(1, wv, i, {x: Fraction(1)})
            if left:
                right = A.append(b, {y: Fraction(1)}, r)
                s = (-1) ** dy
                for k1, c1 in left.items():
                    for k2, c2 in right.items():
                        _add_into(out, {(k1, b + 1, k2): s * c1 * c2})
            # - w^v x^! (x) x w
            left = D.append(i, {x: Fraction(1)}, r)
            if left:
                right = A.multiply(1, A.arrow_vector(r), b, {y: Fraction(1)})
                s = -((-1) ** ((arr.degree + 1) * (dy + dx)))
                for k1, c1 in left.items():
                    for k2, c2 in right.items():
                        _add_into(out, {(k1, b + 1, k2): s * c1 * c2})
        return out

    def rank(self, i: int, total: int) -> int:
        key = (i, total)
        if key not in self._ranks:
            src = self.basis(i, total)
            tgt = {e: n for n, e in enumerate(self.basis(i + 1, total + 1))}
            self._ranks[key] = (_complex_rank(lambda e: self.differential(i, e), src, tgt)
                                if src and tgt else 0)
        return self._ranks[key]

    def dimension(self, i: int, j: int) -> int:
        total = i + j
        return len(self.basis(i, total)) - self.rank(i, total) - self.rank(i - 1, total - 1)

    def square_is_zero(self, i: int, total: int) -> bool:
        for e in self.basis(i, total):
            first = self.differential(i, e)
            acc: dict = {}
            for e2, c in first.items():
                _add_into(acc, self.differential(i + 1, e2), c)
            if acc:
                return False
        return True

    def euler_consistent(self, i: int, total: int) -> bool:
        """dim C = rank out + rank in + homology, checked from both ends."""
        dim = len(self.basis(i, total))
        h = self.dimension(i, total - i)
        return dim - h == self.rank(i, total) + self.rank(i - 1, total - 1) and h >= 0


_HH_CACHE: dict = {}


def _koszul_hh(A: GradedQuiverAlgebra) -> KoszulHH:
    k = id(A)
    if k not in _HH_CACHE:
        _HH_CACHE[k] = (A, KoszulHH(A))
    return _HH_CACHE[k][1]


def hh_koszul(A: GradedQuiverAlgebra, i: int, j: int) -> int:
    """dim HH^i(A, A[j]) from the two-sided Koszul complex."""
    if i < 0:
        return 0
    return _koszul_hh(A).dimension(i, j)


def hh_table(A: GradedQuiverAlgebra, imax: int, jmin: int, jmax: int) -> dict[tuple[int, int], int]:
    return {(i, j): hh_koszul(A, i, j) for i in range(imax + 1) for j in range(jmin, jmax + 1)}


# ---------------------------------------------------------------------------
# Direct Hochschild complex


def _sign(e) -> int:
    return -1 if e % 2 else 1


class FiniteBasis:
    """Global basis of a finite-dimensional quiver algebra with its product table.

    ``prod[(x2, x1)]`` is the product written ``x2 x1`` (first ``x1``)."""

    def __init__(self, A: GradedQuiverAlgebra):
        self.A = A
        self.items = []  # (length, local index)
        n = 0
        while A.dim(n):
            for b in range(A.dim(n)):
                self.items.append((n, b))
            n += 1
        self.max_length = n - 1
        self.index = {it: k for k, it in enumerate(self.items)}
        self.source = [A.source(*it) for it in self.items]
        self.target = [A.target(*it) for it in self.items]
        self.deg = [A.degree(*it) for it in self.items]
        self.length = [it[0] for it in self.items]
        self.units = {A.source(0, b): self.index[(0, b)] for b in range(A.dim(0))}
        self.unit_set = set(self.units.values())
        self.reduced = [k for k in range(len(self.items)) if k not in self.unit_set]
        self.prod = {}
        for x1, (n1, b1) in enumerate(self.items):
            for x2, (n2, b2) in enumerate(self.items):
                if self.target[x1] != self.source[x2]:
                    continue
                img = A.multiply(n1, {b1: Fraction(1)}, n2, {b2: Fraction(1)})
                if img:
                    self.prod[(x2, x1)] = {self.index[(n1 + n2, b)]: c for b, c in img.items()}

    def name(self, k: int) -> str:
        return self.A.label(*self.items[k])

    def find(self, name: str) -> int:
        for k in range(len(self.items)):
            if self.name(k) == name:
                return k
        raise KeyError(name)

    def __len__(self):
        return len(self.items)


class AInfinityOperations:
    """Components mu^d of a strictly unital A-infinity structure on a finite
    quiver algebra; ``mu[d]`` maps input tuples (a_d, ..., a_1) to output dicts.

    Coefficients may be any ring elements supporting ``+``, ``*`` and ``-``.
    """

    def __init__(self, basis: FiniteBasis, higher: dict | None = None, zero=Fraction(0)):
        self.basis = basis
        self.zero = zero
        self.mu = {2: {}}
        for (x2, x1), img in basis.prod.items():
            s = _sign(basis.deg[x1])
            self.mu[2][(x2, x1)] = {k: s * c for k, c in img.items()}
        for d, comp in (higher or {}).items():
            self.mu[d] = {k: dict(v) for k, v in comp.items() if v}
        self._by_output = {}
        self._by_slot = {}

    def arities(self):
        return sorted(d for d, comp in self.mu.items() if comp)

    def by_output(self, d: int) -> dict:
        """output basis element -> [(inputs, coeff)] over reduced inputs."""
        if d not in self._by_output:
            red = set(self.basis.reduced)
            table: dict = {}
            for key, img in self.mu.get(d, {}).items():
                if not all(a in red for a in key):
                    continue
                for o, c in img.items():
                    table.setdefault(o, []).append((key, c))
            self._by_output[d] = table
        return self._by_output[d]

    def by_slot(self, d: int) -> dict:
        """(slot position counted from the right, element) -> [(inputs, output dict)]."""
        if d not in self._by_slot:
            red = set(self.basis.reduced)
            table: dict = {}
            for key, img in self.mu.get(d, {}).items():
                for pos in range(d):
                    others = [a for q, a in enumerate(reversed(key)) if q != pos]
                    if all(a in red for a in others):
                        table.setdefault((pos, key[d - 1 - pos]), []).append((key, img))
            self._by_slot[d] = table
        return self._by_slot[d]

    def relation_residual(self, d: int) -> dict:
        """All nonzero values of sum (-1)^{dagger} mu(.., mu(..), ..) at arity ``d``."""
        B = self.basis
        out = {}
        for seq in composable_sequences(B, d, reduced_only=False):
            val = self.apply_relation(seq)
            if val:
                out[seq] = val
        return out

    def apply(self, d: int, seq: tuple) -> dict:
        return self.mu.get(d, {}).get(seq, {})

    def apply_relation(self, seq: tuple) -> dict:
        """Value of the A-infinity relation on the input tuple (a_d, ..., a_1)."""
        B = self.basis
        d = len(seq)
        rev = list(reversed(seq))  # rev[0] = a_1
        dag = [0]
        for a in rev:
            dag.append(dag[-1] + B.deg[a] - 1)
        total: dict = {}
        for j in self.arities():
            if j > d:
                continue
            outer = d - j + 1
            if outer not in self.mu or not self.mu[outer]:
                continue
            for i in range(d - j + 1):
                inner_in = tuple(reversed(rev[i:i + j]))
                inner = self.apply(j, inner_in)
                if not inner:
                    continue
                s = _sign(dag[i])
                left = tuple(reversed(rev[i + j:]))
                right = tuple(reversed(rev[:i]))
                for o, c in inner.items():
                    val = self.apply(outer, left + (o,) + right)
                    for k, v in val.items():
                        nv = total.get(k, self.zero) + s * c * v
                        total[k] = nv
        return {k: v for k, v in total.items() if v}


def composable_sequences(B: FiniteBasis, d: int, reduced_only: bool = True):
    """All tuples (a_d, ..., a_1) of basis elements with matching endpoints."""
    pool = B.reduced if reduced_only else list(range(len(B)))
    by_source: dict = {}
    for a in pool:
        by_source.setdefault(B.source[a], []).append(a)
    if d == 0:
        return []
    seqs = [(a,) for a in pool]
    for _ in range(d - 1):
        seqs = [(b,) + s for s in seqs for b in by_source.get(B.target[s[0]], [])]
    return seqs


class HochschildComplex:
    """Reduced Hochschild cochains of a finite A-infinity algebra over the
    vertex base, with the standard differential (signs from the A-infinity
    convention with dagger_i = |a_1| + ... + |a_i| - i)."""

    def __init__(self, ops: AInfinityOperations):
        self.ops = ops
        self.B = ops.basis
        self._seq_cache: dict = {}

    def cochains(self, d: int, total_degree: int) -> list[tuple]:
        """Basis cochains (inputs, output) of arity ``d`` and degree ``total_degree``."""
        B = self.B
        if d == 0:
            return [((), o) for o in range(len(B)) if B.source[o] == B.target[o] and B.deg[o] == total_degree]
        key = d
        if key not in self._seq_cache:
            self._seq_cache[key] = composable_sequences(B, d)
        out = []
        for s in self._seq_cache[key]:
            src, tgt = B.source[s[-1]], B.target[s[0]]
            base = d - sum(B.deg[a] for a in s)
            for o in range(len(B)):
                if B.source[o] == src and B.target[o] == tgt and base + B.deg[o] == total_degree:
                    out.append((s, o))
        return out

    def differential(self, cochain: tuple, g_degree: int) -> dict:
        """Image of a basis cochain: {(inputs, output): coeff}."""
        ops, B = self.ops, self.B
        seq, o = cochain
        k = len(seq)
        out: dict = {}
        red = set(B.reduced)
        # mu(a_d, .., g(..), .., a_1)
        for m in ops.arities():
            for pos in range(m):
                for key, img in ops.by_slot(m).get((pos, o), []):
                    # key is (a_.., o, a_pos..a_1) with o at right-offset pos
                    right = key[m - pos:]
                    left = key[:m - 1 - pos]
                    dag = sum(B.deg[a] - 1 for a in right)
                    s = _sign((g_degree - 1) * dag)
                    full = left + seq + right
                    if k == 0 and not full:
                        continue
                    for r, c in img.items():
                        _add_into(out, {(full, r): s * c})
        # g(.., mu(..), ..)
        for j in ops.arities():
            table = ops.by_output(j)
            for p in range(k):  # p counts from the right
                target = seq[k - 1 - p]
                for key, c in table.get(target, []):
                    right = seq[k - p:]
                    left = seq[:k - 1 - p]
                    dag = sum(B.deg[a] - 1 for a in right)
                    s = _sign(g_degree + dag)
                    _add_into(out, {(left + key + right, o): s * c})
        # units produced inside: cochains vanish there by reducedness, and the
        # by_output tables only list reduced inputs, so nothing else to drop
        return {key: v for key, v in out.items() if all(a in red for a in key[0])}

    # exact bigraded cohomology for structures graded by arity (mu^2 only)
    def bigraded(self, i: int, j: int) -> int:
        def mat(d, tot):
            src = self.cochains(d, tot)
            tgt = {c: n for n, c in enumerate(self.cochains(d + 1, tot + 1))}
            rows = []
            for c in src:
                img = self.differential(c, tot)
                row = {}
                for key, v in img.items():
                    if key not in tgt:
                        if len(key[0]) == d + 1:
                            raise AssertionError("differential left the cochain space")
                        continue
                    row[tgt[key]] = v
                if row:
                    rows.append(row)
            return src, rank(rows)

        tot = i + j
        src, r_out = mat(i, tot)
        r_in = mat(i - 1, tot - 1)[1] if i >= 1 else 0
        return len(src) - r_out - r_in

    def truncated(self, degree: int, D: int) -> int:
        """Cohomology of cochains of arity <= D: cocycles whose differential
        vanishes through arity D + 1, modulo truncated coboundaries."""
        cols = []
        for d in range(D + 1):
            cols += self.cochains(d, degree)
        cidx = {c: n for n, c in enumerate(cols)}
        # constraint rows: for each output key with arity <= D + 1
        constraint: dict = {}
        for n, c in enumerate(cols):
            for key, v in self.differential(c, degree).items():
                if len(key[0]) <= D + 1:
                    constraint.setdefault(key, {})[n] = v
        Z = nullspace(list(constraint.values()), len(cols))
        bounds = []
        for d in range(D + 1):
            for h in self.cochains(d, degree - 1):
                img = self.differential(h, degree - 1)
                row = {cidx[key]: v for key, v in img.items() if key in cidx}
                if row:
                    bounds.append(row)
        # coboundaries that are truncated cocycles
        zb = _intersection_dim(Z, bounds)
        return len(Z) - zb


def _intersection_dim(U: list[dict], V: list[dict]) -> int:
    ru, rv = rank(U), rank(V)
    return ru + rv - rank(list(U) + list(V))


def formal_structure(A: GradedQuiverAlgebra) -> AInfinityOperations:
    return AInfinityOperations(FiniteBasis(A))


def hh_direct(structure, degree: int, D: int | None = None, i: int | None = None):
    """Hochschild cohomology from the reduced cochain complex.

    With ``i`` given (formal structures only) returns the exact dimension of
    HH^i(A, A[degree - i]).  Otherwise computes the truncated total-degree
    cohomology at arity bound ``D`` and at ``D + 1`` and raises
    TruncationUnstable if they differ.
    """
    ops = structure if isinstance(structure, AInfinityOperations) else formal_structure(structure)
    C = HochschildComplex(ops)
    if i is not None:
        return C.bigraded(i, degree - i)
    if D is None:
        D = 3
    a, b = C.truncated(degree, D), C.truncated(degree, D + 1)
    if a != b:
        raise TruncationUnstable(f"degree {degree}: {a} at arity bound {D}, {b} at {D + 1}")
    return a


# ---------------------------------------------------------------------------
# The d^3 differential as Lie derivative on the quartic


def _form_coeffs(p) -> list[NovikovScalar]:
    coeffs = getattr(p, "coeffs", None)
    if coeffs is None and hasattr(p, "form"):
        coeffs = p.form.coeffs
    if coeffs is None:
        coeffs = p
    return [NovikovScalar.coerce(c) for c in coeffs]


def d3_matrix(p) -> list[list[NovikovScalar]]:
    """Columns v_a d/dv_b applied to the quartic, in the monomial basis
    v1^k v2^(4-k) (rows k = 0..4)."""
    c = _form_coeffs(p)
    deg = len(c) - 1
    cols = []
    for a in (1, 2):
        for b in (1, 2):
            col = [NovikovScalar() for _ in range(deg + 1)]
            for k, ck in enumerate(c):
                if not (ck.terms or ck.precision is not None):
                    continue
                # monomial v1^k v2^(deg-k)
                e = [k, deg - k]
                mult = e[b - 1]
                if mult == 0:
                    continue
                e[b - 1] -= 1
                e[a - 1] += 1
                col[e[0]] = col[e[0]] + ck * mult
            cols.append(col)
    return [[cols[j][r] for j in range(4)] for r in range(deg + 1)]


def d3_rank(p, precision=None) -> tuple[int, int]:
    r = novikov_rank(d3_matrix(p), precision)
    # HH^1 picks up the kernel of End(V) -> Sym^4 on top of Lambda^2 + Lambda^2
    return r, 2 + (4 - r)
