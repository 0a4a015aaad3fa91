"""Builders for the named matroids and the generalized parallel connection.

Everything returns a RepMatroid.  Rank conventions: pg(r, q) is the rank-r
projective geometry (so pg(3, 2) is the Fano plane) and affine_geometry(r, q)
is the rank-r affine geometry with q^(r-1) points.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import gfq
from .errors import (
    BudgetExceeded,
    GutsLeak,
    IncompatiblePairing,
    NonSimpleGraph,
    NotAFlat,
    NotModularGuts,
    NotProjectiveGuts,
    PointCollision,
    DualNotSimple,
)
from .gfq import make_field
from .matroid import RepMatroid, SpanEngine, is_flat, respan


class _NotRepresentable:
    """Falsy singleton: an exhausted search proved no point set exists."""

    __slots__ = ()

    def __repr__(self):
        return "NotRepresentable"

    def __bool__(self):
        return False


NotRepresentable = _NotRepresentable()


def pg(r, q):
    """The rank-r projective geometry over GF(q): all (q^r-1)/(q-1) points."""
    fld = make_field(q)
    eng = SpanEngine.get(fld, r)
    return RepMatroid(fld, r, eng.all_points)


def pg_size(r, q):
    return (q**r - 1) // (q - 1)


def affine_geometry(r, q):
    """Rank-r affine geometry: the points of pg(r, q) off a hyperplane."""
    fld = make_field(q)
    eng = SpanEngine.get(fld, r)
    pts = [c for c in eng.all_points if eng.decode(c)[0] == 1]
    return RepMatroid(fld, r, pts)


def circuit_matroid(n, q=2):
    """The n-element circuit (cycle matroid of the n-cycle), rank n - 1.

    Represented as the unit vectors plus the all-ones point.  n >= 3: the
    2-element circuit has a parallel pair and no simple representation.
    """
    if n < 3:
        raise ValueError("circuits need at least 3 elements to stay simple")
    fld = make_field(q)
    r = n - 1
    pts = [tuple(1 if i == j else 0 for i in range(r)) for j in range(r)]
    pts.append((1,) * r)
    return RepMatroid(fld, r, pts)


def graphic(edge_list):
    """GF(2) cycle matroid of a connected simple graph.

    Edges are pairs of vertex names; the point of edge uv is the sum of the
    vertex indicators, respanned to rank |V| - 1.  Labels are "u-v".
    """
    verts = {}
    edges = []
    seen = set()
    for u, v in edge_list:
        if u == v:
            raise NonSimpleGraph(f"loop at {u!r}")
        key = frozenset((u, v))
        if key in seen:
            raise NonSimpleGraph(f"repeated edge {u!r}-{v!r}")
        seen.add(key)
        for x in (u, v):
            if x not in verts:
                verts[x] = len(verts)
        edges.append((u, v))
    if not edges:
        return RepMatroid(make_field(2), 0, [])
    # connectivity
    adj = {x: set() for x in verts}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    stack = [edges[0][0]]
    reach = {edges[0][0]}
    while stack:
        for y in adj[stack.pop()]:
            if y not in reach:
                reach.add(y)
                stack.append(y)
    if len(reach) != len(verts):
        raise ValueError("graph must be connected")
    fld = make_field(2)
    nv = len(verts)
    pts, labels = [], []
    for u, v in edges:
        vec = [0] * nv
        vec[verts[u]] = 1
        vec[verts[v]] = 1
        pts.append(tuple(vec))
        labels.append(f"{u}-{v}")
    return respan(RepMatroid(fld, nv, pts, labels))


def dual_k33():
    """The dual of the cycle matroid of K_{3,3}: nine binary points, rank 4."""
    fld = make_field(2)
    pts = [
        (0, 0, 0, 1),
        (0, 0, 1, 0),
        (0, 0, 1, 1),
        (0, 1, 0, 0),
        (0, 1, 1, 0),
        (1, 0, 0, 0),
        (1, 0, 0, 1),
        (1, 1, 0, 0),
        (1, 1, 1, 1),
    ]
    return RepMatroid(fld, 4, pts)


def dual(M: RepMatroid) -> RepMatroid:
    """Standard-form dual: put the points as [I | A], return [-A^T | I].

    Needs a respanned input; raises DualNotSimple when the dual would carry
    a loop (a coloop of M) or a parallel pair (a series pair of M).
    """
    if M.r != M.rank:
        raise ValueError("dual needs a respanned matroid")
    fld = M.field
    n, r = M.n, M.rank
    if n == r:
        if n == 0:
            return M
        raise DualNotSimple("the dual of a free matroid is all loops")
    _, piv, red = gfq.rref(fld, M.points.T)
    free = [j for j in range(n) if j not in piv]
    a = red[:, free]  # r x (n - r)
    cols = {}
    for j, pj in enumerate(piv):
        col = fld.neg_table[a[j]]
        if not col.any():
            raise DualNotSimple(f"element {M.labels[pj]!r} is a coloop")
        cols[pj] = gfq.normalize(fld, col)
    for l, fj in enumerate(free):
        col = np.zeros(n - r, dtype=np.int8)
        col[l] = 1
        cols[fj] = col
    pts = [tuple(cols[i]) for i in range(n)]
    if len(set(pts)) != n:
        raise DualNotSimple("dual has a parallel pair (series pair in input)")
    return RepMatroid(fld, n - r, pts, M.labels)


def s8():
    """The 8-element rank-4 self-dual binary matroid S8.

    Generator matrix [I4 | A] with A columns appended below.  Its defining
    census: the complement inside the rank-4 binary projective geometry is
    the direct sum of a 6-point rank-3 plane restriction (the K4 matroid)
    and a single point; it is self-dual and carries exactly four
    circuit-hyperplanes, all through one common element.
    """
    fld = make_field(2)
    eye = np.eye(4, dtype=np.int8)
    a = np.array(
        [
            [1, 1, 1, 0],
            [0, 0, 1, 1],
            [1, 0, 1, 1],
            [0, 1, 1, 1],
        ],
        dtype=np.int8,
    )
    pts = [tuple(eye[:, j]) for j in range(4)] + [tuple(a[:, j]) for j in range(4)]
    return RepMatroid(fld, 4, pts)


def uniform(r, n, q, budget=2_000_000):
    """A representation of U_{r,n} over GF(q), or NotRepresentable.

    Backtracking over point sets in which every r points are independent.
    Up to projective equivalence any such set contains the standard basis
    and, when n > r, the all-ones point, so the search fixes that frame and
    extends it; exhausting the remaining choices proves nonexistence.
    Raises BudgetExceeded if the node budget runs out first (so a
    NotRepresentable answer is always a completed search).

    For r <= 1 and n > r the uniform matroid has loops or parallel points
    and therefore no simple representation; NotRepresentable is returned.
    """
    if not 0 <= r <= n:
        raise ValueError("need 0 <= r <= n")
    fld = make_field(q)
    if n == r:
        eye = np.eye(r, dtype=np.int8)
        return RepMatroid(fld, r, [tuple(eye[:, j]) for j in range(r)])
    if r <= 1:
        return NotRepresentable
    eng = SpanEngine.get(fld, r)
    basis = [eng.encode([1 if i == j else 0 for i in range(r)]) for j in range(r)]
    ones = eng.encode((1,) * r)
    prefix = basis + [ones]
    pool = [c for c in eng.all_points if c not in prefix]
    nodes = [0]

    def independent_with(chosen, c):
        for combo in itertools.combinations(chosen, r - 1):
            if eng.rank(combo + (c,)) < r:
                return False
        return True

    def grow(chosen, start):
        nodes[0] += 1
        if nodes[0] > budget:
            raise BudgetExceeded(f"uniform({r},{n},{q}) stopped after {budget} nodes")
        if len(chosen) == n:
            return chosen
        for i in range(start, len(pool)):
            c = pool[i]
            if independent_with(chosen, c):
                hit = grow(chosen + (c,), i + 1)
                if hit is not None:
                    return hit
        return None

    found = grow(tuple(prefix), 0)
    if found is None:
        return NotRepresentable
    return RepMatroid(fld, r, sorted(found))


class GluePairing:
    """A bijection between a flat of one matroid and a flat of another."""

    def __init__(self, pairs):
        pairs = [(str(a), str(b)) for a, b in pairs]
        left = [a for a, _ in pairs]
        right = [b for _, b in pairs]
        if len(set(left)) != len(left) or len(set(right)) != len(right):
            raise IncompatiblePairing("pairing must be a bijection")
        self.pairs = tuple(pairs)

    @property
    def left(self):
        return frozenset(a for a, _ in self.pairs)

    @property
    def right(self):
        return frozenset(b for _, b in self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __repr__(self):
        return f"GluePairing({list(self.pairs)!r})"


def _complete_basis(fld, eng, vecs, r):
    """Extend independent columns to a basis using unit vectors."""
    rows = list(vecs)
    rk = gfq.rank(fld, np.array(rows, dtype=np.int8)) if rows else 0
    for j in range(r):
        if rk == r:
            break
        unit = tuple(1 if i == j else 0 for i in range(r))
        trial = rows + [unit]
        rk2 = gfq.rank(fld, np.array(trial, dtype=np.int8))
        if rk2 > rk:
            rows.append(unit)
            rk = rk2
    return np.array(rows, dtype=np.int8).T  # columns are the basis


def _pairing_scalars(M1, M2, glue, basis_labels):
    """Scalars making the glue pairing a restriction of a linear map.

    Returns (lams, basis_codes_1, basis_codes_2) or raises
    IncompatiblePairing.  The map sends basis point b_i to lam_i * c_i; a
    global scalar is absorbed by fixing lam_1 = 1.
    """
    fld = M1.field
    q = fld.q
    eng1, eng2 = M1._engine, M2._engine
    pair_of = dict(glue.pairs)
    b_codes = [M1.code_of(x) for x in basis_labels]
    c_codes = [M2.code_of(pair_of[x]) for x in basis_labels]
    k = len(b_codes)
    if eng2.rank(c_codes) != k:
        raise IncompatiblePairing("paired basis images are dependent")
    if k == 0:
        return (), b_codes, c_codes
    others = [x for x in glue.left if x not in set(basis_labels)]
    bfull = _complete_basis(fld, eng1, [eng1.decode(c) for c in b_codes], M1.r)
    binv = gfq.mat_inv(fld, bfull)
    cvecs = np.array([eng2.decode(c) for c in c_codes], dtype=np.int8).T
    for lams in itertools.product(range(1, q), repeat=k - 1):
        lams = (1,) + lams
        ok = True
        for x in others:
            p = np.array(eng1.decode(M1.code_of(x)), dtype=np.int8)
            coords = gfq.mat_vec(fld, binv, p)
            if coords[k:].any():
                raise IncompatiblePairing(f"{x!r} is outside the glue span")
            img = np.zeros(M2.r, dtype=np.int8)
            for i in range(k):
                coeff = fld.mul(int(coords[i]), lams[i])
                img = fld.add_table[img, fld.mul_table[coeff, cvecs[:, i]]]
            img = gfq.normalize(fld, img)
            if eng2.encode(img) != M2.code_of(pair_of[x]):
                ok = False
                break
        if ok:
            return lams, b_codes, c_codes
    raise IncompatiblePairing("pairing does not extend to a linear isomorphism")


def gpc(M1: RepMatroid, M2: RepMatroid, glue, mode="projective-guts") -> RepMatroid:
    """Generalized parallel connection of M1 and M2 across a glued flat.

    glue pairs labels of a flat N1 of M1 with labels of a flat N2 of M2;
    the pairing must extend to a linear isomorphism of the spans.  Mode
    "projective-guts" additionally requires M1|N1 to be a projective
    geometry, mode "modular-guts" requires the glue to be a modular flat
    of at least one side.

    The two matroids are embedded in a common space of rank
    r(M1) + r(M2) - r(N) so that the glued flats coincide pointwise; the
    ground set is E(M1) plus the unglued part of E(M2).  Labels from M2
    that collide with labels of M1 get a trailing apostrophe.
    """
    if M1.field != M2.field:
        from .errors import FieldMismatch

        raise FieldMismatch("both parts must live over the same field")
    if mode not in ("projective-guts", "modular-guts"):
        raise ValueError(f"unknown mode {mode!r}")
    if not isinstance(glue, GluePairing):
        glue = GluePairing(glue)
    M1 = respan(M1)
    M2 = respan(M2)
    fld = M1.field
    n1_labels, n2_labels = glue.left, glue.right
    if not is_flat(M1, n1_labels):
        raise NotAFlat("glue is not a flat of the first part")
    if not is_flat(M2, n2_labels):
        raise NotAFlat("glue is not a flat of the second part")
    eng1 = M1._engine
    k = eng1.rank([M1.code_of(x) for x in n1_labels])
    if mode == "projective-guts":
        if len(n1_labels) != pg_size(k, fld.q):
            raise NotProjectiveGuts(
                f"glue has {len(n1_labels)} points, a rank-{k} geometry needs "
                f"{pg_size(k, fld.q)}"
            )
    else:
        from .decompose import is_modular_flat

        if not (
            is_modular_flat(M1, n1_labels)[0] or is_modular_flat(M2, n2_labels)[0]
        ):
            raise NotModularGuts("glue is modular in neither part")

    # pick an ordered basis of the glue inside M1
    basis_labels = []
    st = eng1.zero
    for x in sorted(n1_labels):
        s2 = eng1.extend(st, M1.code_of(x))
        if s2.rank > st.rank:
            basis_labels.append(x)
            st = s2
    lams, b_codes, c_codes = _pairing_scalars(M1, M2, glue, basis_labels)

    r1, r2 = M1.r, M2.r
    big_r = r1 + r2 - k
    eng = SpanEngine.get(fld, big_r)

    def unit(i):
        v = np.zeros(big_r, dtype=np.int8)
        v[i] = 1
        return v

    bfull = _complete_basis(fld, eng1, [eng1.decode(c) for c in b_codes], r1)
    t1_cols = [unit(i) for i in range(r1)]
    u1 = gfq.mat_mul(fld, np.array(t1_cols, dtype=np.int8).T, gfq.mat_inv(fld, bfull))

    eng2 = M2._engine
    cfull = _complete_basis(fld, eng2, [eng2.decode(c) for c in c_codes], r2)
    t2_cols = [
        gfq.mul_scalar(fld, fld.inv(lams[i]), unit(i)) if i < k else unit(r1 + i - k)
        for i in range(r2)
    ]
    v2 = gfq.mat_mul(fld, np.array(t2_cols, dtype=np.int8).T, gfq.mat_inv(fld, cfull))

    def embed(mat, vec):
        padded = np.zeros(mat.shape[1], dtype=np.int8)
        padded[: len(vec)] = vec
        return gfq.normalize(fld, gfq.mat_vec(fld, mat, padded))

    points, labels = [], []
    used = set()
    img1 = {}
    for code, label in zip(M1.codes, M1.labels):
        v = embed(u1, np.array(eng1.decode(code), dtype=np.int8))
        img1[label] = eng.encode(v)
        points.append(tuple(v))
        labels.append(label)
        used.add(label)
    img_glue = {img1[x] for x in n1_labels}
    img2 = {}
    for code, label in zip(M2.codes, M2.labels):
        v = embed(v2, np.array(eng2.decode(code), dtype=np.int8))
        img2[label] = eng.encode(v)
        if label in n2_labels:
            continue
        lab = label
        while lab in used:
            lab += "'"
        points.append(tuple(v))
        labels.append(lab)
        used.add(lab)
    # postconditions: the glued flats must coincide exactly and nothing else
    # may collide
    if {img2[b] for b in n2_labels} != img_glue:
        raise GutsLeak("glued flats do not coincide after embedding")
    pair_of = dict(glue.pairs)
    for a, b in glue.pairs:
        if img1[a] != img2[b]:
            raise GutsLeak(f"pairing {a!r}={b!r} broken by the embedding")
    side1 = set(img1.values())
    side2 = {img2[b] for b in M2.labels}
    if side1 & side2 != img_glue:
        raise GutsLeak("parts overlap outside the glued flat")
    if len(set(points)) != M1.n + M2.n - len(glue.pairs):
        raise GutsLeak("point collision while gluing")
    out = RepMatroid(fld, big_r, points, labels)
    st1 = eng.closure_state([img1[x] for x in M1.labels])
    st2 = eng.closure_state(list(side2))
    own = set(out.codes)
    if st1.points & own != side1 or st2.points & own != side2:
        raise GutsLeak("a part is not closed in the connection")
    if st1.points & st2.points & own != img_glue:
        raise GutsLeak("closure intersection exceeds the glued flat")
    return out


def complement_in_pg(M: RepMatroid) -> RepMatroid:
    """Restriction of the ambient geometry to the points M does not use."""
    if M.r != M.rank:
        raise ValueError("complement_in_pg needs a respanned matroid")
    eng = M._engine
    rest = [c for c in eng.all_points if c not in set(M.codes)]
    return RepMatroid(M.field, M.r, rest)


def add_points(M: RepMatroid, X) -> RepMatroid:
    """M plus extra projective points (coordinate tuples or codes)."""
    eng = M._engine
    have = set(M.codes)
    new_codes = []
    for x in X:
        code = x if isinstance(x, int) else eng.encode(x)
        if not (0 < code < M.field.q**M.r) or not eng.is_normalized(code):
            raise PointCollision(f"{x!r} is not a normalized nonzero point")
        if code in have or code in new_codes:
            raise PointCollision(f"point {eng.decode(code)} already present")
        new_codes.append(code)
    pts = list(M.codes) + sorted(new_codes)
    labels = list(M.labels)
    used = set(labels)
    for c in sorted(new_codes):
        lab = "".join(str(d) for d in eng.decode(c))
        while lab in used:
            lab += "+"
        labels.append(lab)
        used.add(lab)
    return RepMatroid(M.field, M.r, pts, labels)
