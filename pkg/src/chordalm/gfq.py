"""Arithmetic and dense linear algebra over GF(q) for q in {2, 3, 4, 5, 7, 8, 9}.

Field elements are integer codes 0..q-1.  For prime q the code is the residue
mod q.  For the three prime-power orders the code encodes the coefficient
vector over the prime subfield (constant term in the least significant digit)
and arithmetic is polynomial arithmetic modulo a fixed irreducible:

    GF(4):  x^2 + x + 1     codes 0,1,2,3 = 0, 1, w, w+1
    GF(8):  x^3 + x + 1     codes are bit vectors c2*a^2 + c1*a + c0
    GF(9):  x^2 + 1         codes are base-3 vectors c1*b + c0

The polynomials are fixed (not configurable) so that file encodings of
points are unambiguous.

Vectors and matrices are plain numpy int8 arrays of codes; all operations
go through fancy-indexed table lookups and never leave the code domain.
Every value here is immutable after construction, so concurrent use needs
no coordination.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatch, UnsupportedOrder, ZeroVector

SUPPORTED_ORDERS = (2, 3, 4, 5, 7, 8, 9)

# irreducible polynomials, coefficients listed from constant term upward
_IRREDUCIBLE = {
    4: (1, 1, 1),      # x^2 + x + 1
    8: (1, 1, 0, 1),   # x^3 + x + 1
    9: (1, 0, 1),      # x^2 + 1
}


@dataclass(frozen=True)
class FieldSpec:
    """Tables for one finite field GF(q) = GF(p^k).

    Attributes
    ----------
    q : int
        Field order.
    p : int
        Characteristic.
    k : int
        Extension degree over GF(p).
    add_table, mul_table : (q, q) int8 arrays
    neg_table, inv_table : (q,) int8 arrays
        ``inv_table[0]`` is 0 and must never be used as an inverse.
    """

    q: int
    p: int
    k: int
    add_table: np.ndarray = field(repr=False, compare=False)
    mul_table: np.ndarray = field(repr=False, compare=False)
    neg_table: np.ndarray = field(repr=False, compare=False)
    inv_table: np.ndarray = field(repr=False, compare=False)

    def __repr__(self) -> str:
        return f"FieldSpec(q={self.q})"

    def __hash__(self) -> int:
        return hash(("FieldSpec", self.q))

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldSpec) and other.q == self.q

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(self.inv_table[a])


def _poly_digits(code: int, p: int, k: int) -> tuple[int, ...]:
    out = []
    for _ in range(k):
        out.append(code % p)
        code //= p
    return tuple(out)


def _poly_code(digits, p: int) -> int:
    code = 0
    for d in reversed(digits):
        code = code * p + d
    return code


def _poly_mul(a, b, p, modulus):
    """Product of coefficient tuples modulo the irreducible polynomial."""
    k = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # reduce: x^k = -(modulus without leading term)
    for deg in range(len(prod) - 1, k - 1, -1):
        c = prod[deg]
        if c:
            prod[deg] = 0
            for j in range(k):
                prod[deg - k + j] = (prod[deg - k + j] - c * modulus[j]) % p
    return tuple(prod[:k]) + (0,) * (k - len(prod))


def _is_prime(n: int) -> bool:
    return n > 1 and all(n % d for d in range(2, int(n**0.5) + 1))


@lru_cache(maxsize=None)
def make_field(q: int) -> FieldSpec:
    """Build the GF(q) tables, q a prime power in 2..9.

    Raises UnsupportedOrder otherwise.  The result is cached and shared.
    """
    if q not in SUPPORTED_ORDERS:
        raise UnsupportedOrder(f"q={q} is not a prime power in 2..9")
    if _is_prime(q):
        p, k = q, 1
        add = np.fromfunction(lambda a, b: (a + b) % q, (q, q), dtype=int)
        mul = np.fromfunction(lambda a, b: (a * b) % q, (q, q), dtype=int)
        neg = np.array([(-a) % q for a in range(q)])
    else:
        modulus = _IRREDUCIBLE[q]
        k = len(modulus) - 1
        p = round(q ** (1.0 / k))
        polys = [_poly_digits(c, p, k) for c in range(q)]
        add = np.zeros((q, q), dtype=int)
        mul = np.zeros((q, q), dtype=int)
        for a in range(q):
            for b in range(q):
                add[a, b] = _poly_code(
                    [(x + y) % p for x, y in zip(polys[a], polys[b])], p
                )
                mul[a, b] = _poly_code(_poly_mul(polys[a], polys[b], p, modulus), p)
        neg = np.array(
            [_poly_code([(-x) % p for x in polys[a]], p) for a in range(q)]
        )
    inv = np.zeros(q, dtype=int)
    for a in range(1, q):
        hits = np.nonzero(mul[a] == 1)[0]
        assert len(hits) == 1, f"GF({q}) tables broken at {a}"
        inv[a] = hits[0]
    return FieldSpec(
        q=q,
        p=p,
        k=k,
        add_table=add.astype(np.int8),
        mul_table=mul.astype(np.int8),
        neg_table=neg.astype(np.int8),
        inv_table=inv.astype(np.int8),
    )


def as_matrix(m) -> np.ndarray:
    """Coerce to a 2-d int8 array without copying when possible."""
    a = np.asarray(m, dtype=np.int8)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got ndim={a.ndim}")
    return a


def rref(fld: FieldSpec, m) -> tuple[int, tuple[int, ...], np.ndarray]:
    """Reduced row-echelon form over GF(q).

    Returns (rank, pivot_columns, reduced).  The input is not modified and
    may be empty in either dimension.
    """
    a = as_matrix(m).copy()
    rows, cols = a.shape
    addt, mult, negt, invt = (
        fld.add_table,
        fld.mul_table,
        fld.neg_table,
        fld.inv_table,
    )
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        stripe = np.nonzero(a[r:, c])[0]
        if not stripe.size:
            continue
        pr = r + int(stripe[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        if a[r, c] != 1:
            a[r] = mult[invt[a[r, c]], a[r]]
        others = np.nonzero(a[:, c])[0]
        others = others[others != r]
        if others.size:
            factors = negt[a[others, c]]
            a[others] = addt[a[others], mult[factors[:, None], a[r][None, :]]]
        pivots.append(c)
        r += 1
    return r, tuple(pivots), a


def rank(fld: FieldSpec, m) -> int:
    return rref(fld, m)[0]


def in_span(fld: FieldSpec, v, vectors) -> bool:
    """True iff v is a linear combination of the given vectors."""
    v = np.asarray(v, dtype=np.int8)
    base = as_matrix(vectors) if len(vectors) else np.zeros((0, v.size), np.int8)
    if base.size and base.shape[1] != v.size:
        raise DimensionMismatch(
            f"vector length {v.size} vs span dimension {base.shape[1]}"
        )
    if not v.any():
        return True
    k = rank(fld, base)
    return rank(fld, np.vstack([base, v])) == k


def normalize(fld: FieldSpec, v) -> np.ndarray:
    """Unique scalar multiple of v whose first nonzero coordinate is 1."""
    v = np.asarray(v, dtype=np.int8)
    nz = np.nonzero(v)[0]
    if not nz.size:
        raise ZeroVector("cannot normalize the zero vector")
    lead = int(v[nz[0]])
    if lead == 1:
        return v.copy()
    return fld.mul_table[fld.inv_table[lead], v]


def mat_mul(fld: FieldSpec, a, b) -> np.ndarray:
    """Matrix product over GF(q)."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int8)
    for k in range(a.shape[1]):
        term = fld.mul_table[a[:, k][:, None], b[k][None, :]]
        out = fld.add_table[out, term]
    return out


def mat_vec(fld: FieldSpec, a, v) -> np.ndarray:
    return mat_mul(fld, a, np.asarray(v, dtype=np.int8).reshape(-1, 1)).reshape(-1)


def mul_scalar(fld: FieldSpec, c: int, v) -> np.ndarray:
    return fld.mul_table[c, np.asarray(v, dtype=np.int8)]


def mat_inv(fld: FieldSpec, a) -> np.ndarray:
    """Inverse of a square matrix; raises ValueError when singular."""
    a = as_matrix(a)
    n = a.shape[0]
    if a.shape != (n, n):
        raise DimensionMismatch("only square matrices invert")
    aug = np.hstack([a, np.eye(n, dtype=np.int8)])
    _, piv, red = rref(fld, aug)
    # [A | I] always has rank n; A is invertible iff every pivot is in A
    if piv != tuple(range(n)):
        raise ValueError("matrix is singular")
    return red[:, n:]


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int8)
