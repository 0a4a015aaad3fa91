"""Orbits of point subsets of PG(r-1, q) under the full linear group.

For the small ambients where 2^N masks fit comfortably in memory we compute
the complete orbit partition of all subsets once, by breadth-first search
with elementary generators of GL(r, q).  Every equivalence or
canonical-form query inside such an ambient is then a table lookup, which
is what the exhaustive catalog leans on.

Feasible ambients: rank <= 4 over GF(2), rank <= 3 over GF(3), and rank
<= 2 over any supported field.

A subset is a bitmask over the ambient points sorted by code; the canonical
representative of an orbit is the member whose sorted point list is
lexicographically least.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import gfq
from .errors import InfeasibleUniverse
from .matroid import SpanEngine


def feasible(q: int, r: int) -> bool:
    """Whether the full orbit table for (q, r) is supported."""
    return (q == 2 and r <= 4) or (q == 3 and r <= 3) or r <= 2


def _primitive_element(fld) -> int:
    for g in range(2, fld.q):
        x, order = g, 1
        while x != 1:
            x = fld.mul(x, g)
            order += 1
        if order == fld.q - 1:
            return g
    return 1  # q == 2


def _generators(fld, r):
    """Elementary generating set of GL(r, q): transvections plus one scaling."""
    gens = []
    for i in range(r):
        for j in range(r):
            if i == j:
                continue
            for c in range(1, fld.q):
                m = gfq.identity(r)
                m[i, j] = c
                gens.append(m)
    if fld.q > 2 and r >= 1:
        g = _primitive_element(fld)
        m = gfq.identity(r)
        m[0, 0] = g
        gens.append(m)
    return gens


class AmbientOrbits:
    """Complete orbit partition of the subsets of one small ambient."""

    def __init__(self, q: int, r: int):
        if not feasible(q, r):
            raise InfeasibleUniverse(
                f"orbit tables for (rank={r}, q={q}) are out of range; "
                "supported: rank<=4 at q=2, rank<=3 at q=3, rank<=2 otherwise"
            )
        fld = gfq.make_field(q)
        eng = SpanEngine.get(fld, r)
        self.q = q
        self.r = r
        self.field = fld
        self.engine = eng
        self.points = eng.all_points
        self.index = {c: i for i, c in enumerate(self.points)}
        n = len(self.points)
        self.n_points = n
        self._build_tables(fld, eng, n)

    def _perm_of(self, fld, eng, matrix):
        perm = []
        for code in self.points:
            img = gfq.normalize(fld, gfq.mat_vec(fld, matrix, eng.decode(code)))
            perm.append(self.index[eng.encode(img)])
        return perm

    def _build_tables(self, fld, eng, n):
        total = 1 << n
        lob = min(8, n)
        lomask = (1 << lob) - 1

        actions = []
        for g in _generators(fld, self.r):
            perm = self._perm_of(fld, eng, g)
            bits = [1 << p for p in perm]
            lo = [0] * (1 << lob)
            for m in range(1, 1 << lob):
                low = m & -m
                lo[m] = lo[m ^ low] | bits[low.bit_length() - 1]
            hi = [0] * (1 << (n - lob))
            for m in range(1, 1 << (n - lob)):
                low = m & -m
                hi[m] = hi[m ^ low] | bits[lob + low.bit_length() - 1]
            actions.append((lo, hi))

        # reversed-bit weight: the orbit member maximizing it is the one
        # whose sorted point list is lexicographically least
        rev = [0] * total
        for m in range(1, total):
            rev[m] = (rev[m >> 1] >> 1) | ((m & 1) << (n - 1))

        canon = [0] * total
        visited = bytearray(total)
        reps = []
        sizes = {}
        for start in range(total):
            if visited[start]:
                continue
            visited[start] = 1
            members = [start]
            stack = [start]
            while stack:
                m = stack.pop()
                mlo = m & lomask
                mhi = m >> lob
                for lo, hi in actions:
                    m2 = lo[mlo] | hi[mhi]
                    if not visited[m2]:
                        visited[m2] = 1
                        members.append(m2)
                        stack.append(m2)
            best = max(members, key=rev.__getitem__)
            for m in members:
                canon[m] = best
            reps.append(best)
            sizes[best] = len(members)
        reps.sort()
        self.canon = canon
        self.reps = reps
        self.orbit_sizes = sizes

    def encode_mask(self, codes) -> int:
        m = 0
        for c in codes:
            m |= 1 << self.index[c]
        return m

    def decode_mask(self, mask):
        return tuple(
            self.points[i] for i in range(self.n_points) if mask >> i & 1
        )

    def canonical_mask(self, codes) -> int:
        return self.canon[self.encode_mask(codes)]

    def mask_rank(self, mask) -> int:
        return self.engine.rank(self.decode_mask(mask))


@lru_cache(maxsize=None)
def ambient_orbits(q: int, r: int) -> AmbientOrbits:
    return AmbientOrbits(q, r)


def canonical_codes(fld, r, codes):
    """Ascending point codes of the canonical class member."""
    ao = ambient_orbits(fld.q, r)
    return ao.decode_mask(ao.canonical_mask(codes))
