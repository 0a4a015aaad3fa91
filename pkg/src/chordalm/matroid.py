"""Represented matroids: labeled point sets in a projective space over GF(q).

A RepMatroid is an ordered list of distinct, normalized, nonzero points of
PG(r-1, q) together with one label per point.  Loops and parallel pairs are
excluded by construction, so every matroid here is simple.

Rank and closure queries run through a SpanEngine, a per-(q, r) cache that
interns every projective subspace it has seen and memoizes single-point
extensions.  After warm-up, a closure computation is a chain of dictionary
lookups, which is what makes the exhaustive catalog scans cheap.

Points are encoded as integers: the digit string of the coordinates, most
significant coordinate first, read as a base-q number.  Sorting codes is
therefore the same as sorting coordinate strings lexicographically.

All values are immutable after construction and all operations are pure;
enumerations return fresh collections.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import gfq
from .errors import (
    DependentContractionSet,
    FieldMismatch,
    RankZero,
    UnknownLabel,
)
from .gfq import FieldSpec


def code_to_vec(code, r, q):
    """Decode an integer point code into coordinate digits, msd first."""
    out = []
    for _ in range(r):
        out.append(code % q)
        code //= q
    return tuple(reversed(out))


def vec_to_code(vec, q):
    code = 0
    for d in vec:
        code = code * q + int(d)
    return code


class Subspace:
    """An interned linear subspace of GF(q)^r.

    basis is the tuple of encoded rref rows (canonical per subspace), points
    the frozenset of codes of the normalized nonzero vectors it contains.
    """

    __slots__ = ("rank", "basis", "points", "_hash")

    def __init__(self, rank, basis, points):
        self.rank = rank
        self.basis = basis
        self.points = points
        self._hash = hash(basis)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other or self.basis == other.basis

    def __repr__(self):
        return f"Subspace(rank={self.rank}, |points|={len(self.points)})"


class SpanEngine:
    """Shared closure/rank oracle for one ambient space GF(q)^r."""

    _instances: dict = {}

    def __init__(self, fld: FieldSpec, r: int):
        self.field = fld
        self.r = r
        self.q = fld.q
        self.zero = Subspace(0, (), frozenset())
        self._intern = {(): self.zero}
        self._extend = {}
        self._all_points = None

    @classmethod
    def get(cls, fld: FieldSpec, r: int) -> "SpanEngine":
        key = (fld.q, r)
        eng = cls._instances.get(key)
        if eng is None:
            eng = cls._instances[key] = cls(fld, r)
        return eng

    def decode(self, code):
        return code_to_vec(code, self.r, self.q)

    def encode(self, vec):
        return vec_to_code(vec, self.q)

    def is_normalized(self, code) -> bool:
        vec = self.decode(code)
        for d in vec:
            if d:
                return d == 1
        return False

    @property
    def all_points(self):
        """Codes of every point of PG(r-1, q), ascending."""
        if self._all_points is None:
            self._all_points = tuple(
                c for c in range(1, self.q**self.r) if self.is_normalized(c)
            )
        return self._all_points

    def _span_points(self, rows):
        q = self.q
        fld = self.field
        pts = []
        for coeffs in itertools.product(range(q), repeat=len(rows)):
            v = np.zeros(self.r, dtype=np.int8)
            for c, row in zip(coeffs, rows):
                if c:
                    v = fld.add_table[v, fld.mul_table[c, row]]
            nz = np.nonzero(v)[0]
            if nz.size and v[nz[0]] == 1:
                pts.append(self.encode(v))
        return frozenset(pts)

    def extend(self, sub: Subspace, code) -> Subspace:
        """Smallest subspace containing sub and the given point."""
        if code in sub.points:
            return sub
        key = (sub.basis, code)
        hit = self._extend.get(key)
        if hit is not None:
            return hit
        rows = [self.decode(b) for b in sub.basis]
        rows.append(self.decode(code))
        rk, _, red = gfq.rref(self.field, np.array(rows, dtype=np.int8))
        basis = tuple(self.encode(red[i]) for i in range(rk))
        interned = self._intern.get(basis)
        if interned is None:
            interned = Subspace(rk, basis, self._span_points(red[:rk]))
            self._intern[basis] = interned
        self._extend[key] = interned
        return interned

    def closure_state(self, codes) -> Subspace:
        st = self.zero
        for c in codes:
            st = self.extend(st, c)
        return st

    def rank(self, codes) -> int:
        return self.closure_state(codes).rank


@dataclass(frozen=True)
class FlatRecord:
    """A flat of a matroid, as labels plus its rank."""

    elements: frozenset
    rank: int


@dataclass(frozen=True, eq=False)
class LinMap:
    """An invertible linear map of the ambient space, acting on columns."""

    field: FieldSpec
    matrix: np.ndarray

    def __post_init__(self):
        m = gfq.as_matrix(self.matrix)
        n = m.shape[0]
        if m.shape != (n, n) or gfq.rank(self.field, m) != n:
            raise ValueError("LinMap needs an invertible square matrix")

    def apply(self, vec):
        return gfq.mat_vec(self.field, self.matrix, vec)

    def apply_point(self, vec):
        return gfq.normalize(self.field, self.apply(vec))


class RepMatroid:
    """A simple matroid given by normalized projective points with labels."""

    __slots__ = (
        "field",
        "r",
        "codes",
        "labels",
        "_code_of",
        "_label_of",
        "_engine",
        "_rank",
        "_flats",
        "_circuits",
    )

    def __init__(self, fld: FieldSpec, r: int, points, labels=None):
        eng = SpanEngine.get(fld, r)
        codes = []
        for p in points:
            if isinstance(p, (int, np.integer)):
                code = int(p)
            else:
                code = eng.encode(p)
            if not (0 < code < fld.q**r):
                raise ValueError(f"point code {code} out of range for q={fld.q}, r={r}")
            if not eng.is_normalized(code):
                raise ValueError(
                    f"point {eng.decode(code)} is zero or not normalized"
                )
            codes.append(code)
        if len(set(codes)) != len(codes):
            raise ValueError("points must be distinct (simple matroid)")
        if labels is None:
            labels = ["".join(str(d) for d in eng.decode(c)) for c in codes]
        labels = [str(x) for x in labels]
        if len(labels) != len(codes):
            raise ValueError("one label per point required")
        if len(set(labels)) != len(labels):
            raise ValueError("labels must be unique")
        self.field = fld
        self.r = r
        self.codes = tuple(codes)
        self.labels = tuple(labels)
        self._code_of = dict(zip(self.labels, self.codes))
        self._label_of = dict(zip(self.codes, self.labels))
        self._engine = eng
        self._rank = None
        self._flats = None
        self._circuits = None

    # basic views -----------------------------------------------------------

    @property
    def n(self):
        return len(self.codes)

    def __len__(self):
        return len(self.codes)

    @property
    def ground(self):
        return frozenset(self.labels)

    @property
    def rank(self):
        if self._rank is None:
            self._rank = self._engine.rank(self.codes)
        return self._rank

    @property
    def points(self):
        """The points as an (n, r) int8 array of coordinates."""
        eng = self._engine
        if not self.codes:
            return np.zeros((0, self.r), dtype=np.int8)
        return np.array([eng.decode(c) for c in self.codes], dtype=np.int8)

    def code_of(self, label):
        try:
            return self._code_of[label]
        except KeyError:
            raise UnknownLabel(f"label {label!r} not in ground set") from None

    def label_of(self, code):
        return self._label_of[code]

    def codes_of(self, labels):
        return [self.code_of(x) for x in labels]

    def labels_of(self, codes):
        return frozenset(self._label_of[c] for c in codes)

    def __repr__(self):
        return (
            f"RepMatroid(q={self.field.q}, r={self.r}, n={self.n}, "
            f"rank={self.rank})"
        )

    def __eq__(self, other):
        return (
            isinstance(other, RepMatroid)
            and self.field == other.field
            and self.r == other.r
            and self.codes == other.codes
            and self.labels == other.labels
        )

    def __hash__(self):
        return hash((self.field.q, self.r, self.codes, self.labels))

    # internal flat lattice -------------------------------------------------

    def _flat_items(self):
        """All flats as (codes frozenset, projective closure Subspace)."""
        if self._flats is None:
            eng = self._engine
            own = frozenset(self.codes)
            items = {frozenset(): eng.zero}
            frontier = [(frozenset(), eng.zero)]
            while frontier:
                fresh = {}
                for _, fstate in frontier:
                    for c in self.codes:
                        if c in fstate.points:
                            continue
                        s2 = eng.extend(fstate, c)
                        f2 = s2.points & own
                        if f2 not in items and f2 not in fresh:
                            fresh[f2] = s2
                items.update(fresh)
                frontier = list(fresh.items())
            self._flats = sorted(
                items.items(), key=lambda kv: (kv[1].rank, sorted(kv[0]))
            )
        return self._flats

    def _restrict_codes(self, keep):
        keep = set(keep)
        pts = [c for c in self.codes if c in keep]
        lbs = [self._label_of[c] for c in pts]
        return RepMatroid(self.field, self.r, pts, lbs)


# ranks, closures, flats ----------------------------------------------------


def rank_of(M: RepMatroid, S) -> int:
    """Rank of a label set."""
    return M._engine.rank(M.codes_of(S))


def closure(M: RepMatroid, S) -> frozenset:
    """All elements of M lying in the linear span of S (a flat of M)."""
    st = M._engine.closure_state(M.codes_of(S))
    return M.labels_of(st.points & set(M.codes))


def pg_closure(M: RepMatroid, S) -> frozenset:
    """Every projective point spanned by S, inside E(M) or not.

    Returned as coordinate tuples, msd first.
    """
    st = M._engine.closure_state(M.codes_of(S))
    eng = M._engine
    return frozenset(eng.decode(c) for c in st.points)


def is_flat(M: RepMatroid, S) -> bool:
    S = frozenset(S)
    return closure(M, S) == S


def flats(M: RepMatroid, rank_filter=None):
    """Every flat of M (optionally only those of one rank), each once.

    Built by iterated covers: each level closes flat-plus-one-point sets, so
    the cost scales with the number of flats, not with 2^n.
    """
    out = [
        FlatRecord(M.labels_of(fc), st.rank)
        for fc, st in M._flat_items()
        if rank_filter is None or st.rank == rank_filter
    ]
    return out


# circuits and cocircuits ---------------------------------------------------


def is_circuit(M: RepMatroid, S) -> bool:
    """True iff S is dependent and every proper subset is independent."""
    codes = M.codes_of(S)
    if len(set(codes)) != len(codes) or not codes:
        return False
    eng = M._engine
    if eng.rank(codes) != len(codes) - 1:
        return False
    return all(
        eng.rank(codes[:i] + codes[i + 1 :]) == len(codes) - 1
        for i in range(len(codes))
    )


def _binary_kernel_masks(M: RepMatroid):
    """Basis of the GF(2) dependency space as index bitmasks."""
    mat = M.points.T  # r x n, columns are the points
    _, piv, red = gfq.rref(M.field, mat)
    free = [j for j in range(M.n) if j not in piv]
    basis = []
    for f in free:
        mask = 1 << f
        for row, pj in enumerate(piv):
            if red[row, f]:
                mask |= 1 << pj
        basis.append(mask)
    return basis


def _circuit_items(M: RepMatroid):
    """All circuits as frozensets of codes (size <= rank + 1), cached."""
    if M._circuits is not None:
        return M._circuits
    eng = M._engine
    cap = M.rank + 1
    out = []
    if M.field.q == 2 and M.n - M.rank <= 20:
        # every GF(2) dependency is a disjoint union of circuits; a vector of
        # support s is a circuit exactly when its points have rank s - 1
        vecs = [0]
        for b in _binary_kernel_masks(M):
            vecs += [v ^ b for v in vecs]
        for mask in vecs:
            s = mask.bit_count()
            if not 0 < s <= cap:
                continue
            codes = [M.codes[i] for i in range(M.n) if mask >> i & 1]
            if eng.rank(codes) == s - 1:
                out.append(frozenset(codes))
    else:
        for size in range(3, min(cap, M.n) + 1):
            for combo in itertools.combinations(M.codes, size):
                if eng.rank(combo) != size - 1:
                    continue
                if all(
                    eng.rank(combo[:i] + combo[i + 1 :]) == size - 1
                    for i in range(size)
                ):
                    out.append(frozenset(combo))
    M._circuits = sorted(out, key=lambda c: (len(c), sorted(c)))
    return M._circuits


def circuits(M: RepMatroid, max_size=None):
    """Minimal dependent sets, optionally capped at max_size elements."""
    out = [
        M.labels_of(c)
        for c in _circuit_items(M)
        if max_size is None or len(c) <= max_size
    ]
    return out


def cocircuits(M: RepMatroid):
    """Complements of the hyperplanes of M."""
    if M.rank < 1:
        raise RankZero("a rank-0 matroid has no cocircuits")
    own = frozenset(M.codes)
    out = [
        M.labels_of(own - fc)
        for fc, st in M._flat_items()
        if st.rank == M.rank - 1
    ]
    return sorted(out, key=sorted)


# minors and reembedding ----------------------------------------------------


def restrict(M: RepMatroid, S) -> RepMatroid:
    """Restriction to a label set; ambient rank is kept."""
    return M._restrict_codes(M.codes_of(S))


def delete(M: RepMatroid, S) -> RepMatroid:
    drop = set(M.codes_of(S))
    return M._restrict_codes(c for c in M.codes if c not in drop)


def respan(M: RepMatroid) -> RepMatroid:
    """Re-coordinatize so the ambient rank equals r(M).

    Keeps labels and the projective equivalence class of the point set.
    """
    k = M.rank
    if k == M.r:
        return M
    _, piv, _ = gfq.rref(M.field, M.points)
    pts = M.points[:, piv]
    return RepMatroid(M.field, k, pts, M.labels)


def contract_simplify(M: RepMatroid, I):
    """Contract an independent set and simplify, in one step.

    Points in the closure of I disappear; every other point is projected
    along span(I) onto the coordinate subspace complementary to the rref
    pivots of I (the lexicographically first such choice).  Parallel images
    are merged; the returned map sends every surviving original label to
    the label representing its parallel class.

    Returns (matroid of rank r(M) - |I| in ambient rank r - |I|, label map).
    """
    fld = M.field
    eng = M._engine
    codes_I = M.codes_of(I)
    if eng.rank(codes_I) != len(codes_I):
        raise DependentContractionSet(f"{sorted(I)} is dependent")
    st = eng.closure_state(codes_I)
    k = st.rank
    if k == 0:
        return M, {lab: lab for lab in M.labels}
    rows = np.array([eng.decode(b) for b in st.basis], dtype=np.int8)
    _, piv, red = gfq.rref(fld, rows)
    nonpiv = [c for c in range(M.r) if c not in piv]
    new_points, new_labels, mapping, seen = [], [], {}, {}
    for code, label in zip(M.codes, M.labels):
        if code in st.points:
            continue
        w = np.array(eng.decode(code), dtype=np.int8)
        for j, p in enumerate(piv):
            a = int(w[p])
            if a:
                w = fld.add_table[w, fld.mul_table[fld.neg_table[a], red[j]]]
        proj = tuple(gfq.normalize(fld, w[nonpiv]))
        rep = seen.get(proj)
        if rep is None:
            seen[proj] = label
            new_points.append(proj)
            new_labels.append(label)
            rep = label
        mapping[label] = rep
    return RepMatroid(fld, M.r - k, new_points, new_labels), mapping


# equivalence ---------------------------------------------------------------


def _lex_basis_codes(M: RepMatroid):
    eng = M._engine
    st = eng.zero
    basis = []
    for c in sorted(M.codes):
        s2 = eng.extend(st, c)
        if s2.rank > st.rank:
            basis.append(c)
            st = s2
        if st.rank == M.rank:
            break
    return basis


def _flat_census(M: RepMatroid):
    counts = {}
    for fc, st in M._flat_items():
        key = (st.rank, len(fc))
        counts[key] = counts.get(key, 0) + 1
    return tuple(sorted(counts.items()))


def proj_equivalent(M1: RepMatroid, M2: RepMatroid):
    """An invertible map carrying points(M1) onto points(M2), or None.

    Both matroids must be respanned.  The search maps a fixed basis of M1
    onto independent tuples of M2, pruning on closure sizes at every depth.
    """
    if M1.field != M2.field:
        raise FieldMismatch(f"q={M1.field.q} vs q={M2.field.q}")
    for m in (M1, M2):
        if m.r != m.rank:
            raise ValueError("proj_equivalent needs respanned inputs")
    if M1.n != M2.n or M1.r != M2.r:
        return None
    fld = M1.field
    r = M1.r
    if r == 0:
        return LinMap(fld, np.zeros((0, 0), dtype=np.int8))
    if _flat_census(M1) != _flat_census(M2):
        return None
    eng = M1._engine
    base = _lex_basis_codes(M1)
    # closure size fingerprints of the basis prefixes in M1
    own1 = set(M1.codes)
    pref_sizes = []
    st = eng.zero
    for c in base:
        st = eng.extend(st, c)
        pref_sizes.append(len(st.points & own1))
    own2 = set(M2.codes)
    target2 = frozenset(M2.codes)
    ordered2 = sorted(M2.codes)
    bmat = np.array([eng.decode(c) for c in base], dtype=np.int8).T
    binv = gfq.mat_inv(fld, bmat)

    def place(depth, st2, chosen):
        if depth == r:
            cmat = np.array([eng.decode(c) for c in chosen], dtype=np.int8).T
            t = gfq.mat_mul(fld, cmat, binv)
            image = set()
            for code in M1.codes:
                v = gfq.mat_vec(fld, t, eng.decode(code))
                image.add(eng.encode(gfq.normalize(fld, v)))
            if image == target2:
                return LinMap(fld, t)
            return None
        for c in ordered2:
            if c in st2.points:
                continue
            s2 = eng.extend(st2, c)
            if len(s2.points & own2) != pref_sizes[depth]:
                continue
            hit = place(depth + 1, s2, chosen + [c])
            if hit is not None:
                return hit
        return None

    return place(0, eng.zero, [])


def canonical_form(M: RepMatroid):
    """Lexicographically least image of points(M) over all invertible maps.

    Two respanned matroids get the same value exactly when they are
    projectively equivalent.  Only feasible (rank, q) pairs are supported;
    see orbits.feasible.
    """
    if M.r != M.rank:
        raise ValueError("canonical_form needs a respanned matroid")
    from .orbits import canonical_codes

    codes = canonical_codes(M.field, M.r, M.codes)
    eng = M._engine
    return tuple(eng.decode(c) for c in codes)
