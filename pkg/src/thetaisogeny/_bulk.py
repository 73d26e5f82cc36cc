"""Vectorized field arithmetic used by the exhaustive searches.

An array of M elements of F_{p^d} has shape (d, M) and holds reduced
coefficients, low degree first.  Only the handful of operations the search
filters need are provided.
"""

from __future__ import annotations

import numpy as np

from .chain_arithmetic import plan_for
from .index_space import level_tables
from .theta_core import quadratic_table, relation_tuples


class BulkField:
    def __init__(self, field):
        self.field = field
        self.p = field.p
        self.d = field.d
        self.red = np.array(field._red, dtype=np.int64)

    def const(self, x, m):
        x = self.field(x)
        coeffs = x.coeffs
        return np.array([[c] * m for c in coeffs], dtype=np.int64).reshape(self.d, m)

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        p, d = self.p, self.d
        if d == 1:
            return a * b % p
        prod = np.zeros((2 * d - 1,) + a.shape[1:], dtype=np.int64)
        for i in range(d):
            for j in range(d):
                prod[i + j] += a[i] * b[j]
            prod %= p
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k] % p
            for i, r in enumerate(self.red):
                if r:
                    prod[k - d + i] = (prod[k - d + i] + c * int(r)) % p
        return prod[:d] % p

    def scale(self, x, a):
        """Field constant x times array a."""
        if self.d == 1:
            return a * int(self.field(x).v) % self.p
        return self.mul(self.const(x, a.shape[1]), a)

    def is_zero(self, a):
        return ~np.any(a, axis=0)

    def from_indices(self, idx):
        """Element number e = sum c_i p^i as coefficient arrays."""
        out = np.empty((self.d, idx.shape[0]), dtype=np.int64)
        rest = idx.copy()
        for i in range(self.d):
            rest, out[i] = np.divmod(rest, self.p)
        return out

    def to_element(self, col):
        vals = [int(c) for c in col]
        return self.field(vals[0] if self.d == 1 else tuple(vals))


def projective_count(q, size):
    return (q**size - 1) // (q - 1)


def projective_chunks(bulk, size, chunk=1 << 20):
    """Yield arrays (size, d, M) covering P^{size-1}, first nonzero entry 1."""
    q = bulk.field.q
    for lead in range(size):
        free = size - 1 - lead
        total = q**free
        for start in range(0, total, chunk):
            idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
            m = idx.shape[0]
            pts = np.zeros((size, bulk.d, m), dtype=np.int64)
            pts[lead, 0, :] = 1
            rest = idx
            for pos in range(size - 1, lead, -1):
                rest, digit = np.divmod(rest, q)
                pts[pos] = bulk.from_indices(digit)
            yield pts


def quadric_basis(null):
    """Independent quadrics cutting out the variety of a level >= 4 null point.

    Each is a list of (u, v, coefficient) over monomials x_u x_v with u <= v.
    """
    ctx = null.ctx
    g, level = ctx.g, null.level
    _, add, _ = level_tables(g, level)
    qa = quadratic_table(null)
    from .theta_core import torsion_offsets

    ts, _, signs = torsion_offsets(g, level)
    size = level**g
    monos = [(u, v) for u in range(size) for v in range(u, size)]
    pos = {m: k for k, m in enumerate(monos)}
    zero = ctx.field.zero()

    def form(ci, a, b, scalar, vec, sign):
        for t, s in zip(ts, signs[ci]):
            u, v = add[a][t], add[b][t]
            key = pos[(u, v) if u <= v else (v, u)]
            term = scalar if s > 0 else -scalar
            vec[key] = vec[key] + term if sign > 0 else vec[key] - term

    basis = []  # (pivot, row) in reduced echelon form
    seen = set()
    for ci in range(2**g):
        for i, j, k, l, i2, j2, k2, l2 in relation_tuples(g, level, symmetric_pairs=False):
            key = (ci, i, j, k, l, i2, j2, k2, l2)
            if key in seen:
                continue
            seen.add(key)
            vec = [zero] * len(monos)
            form(ci, i, j, qa[ci][k][l], vec, +1)
            form(ci, k2, l2, qa[ci][i2][j2], vec, -1)
            for piv, row in basis:
                c = vec[piv]
                if not c.is_zero():
                    vec = [a - c * b for a, b in zip(vec, row)]
            try:
                piv = next(n for n, c in enumerate(vec) if not c.is_zero())
            except StopIteration:
                continue
            inv = vec[piv].inv()
            vec = [c * inv for c in vec]
            reduced = []
            for opiv, orow in basis:
                c = orow[piv]
                if not c.is_zero():
                    orow = [a - c * b for a, b in zip(orow, vec)]
                reduced.append((opiv, orow))
            basis = reduced + [(piv, vec)]
            if len(basis) == len(monos):
                break
    return [[(monos[n][0], monos[n][1], c) for n, c in enumerate(row) if not c.is_zero()] for _, row in basis]


def variety_mask(bulk, quadrics, pts):
    m = pts.shape[2]
    ok = np.ones(m, dtype=bool)
    cache = {}
    for quad in quadrics:
        acc = np.zeros((bulk.d, m), dtype=np.int64)
        for u, v, c in quad:
            mono = cache.get((u, v))
            if mono is None:
                mono = bulk.mul(pts[u], pts[v])
                cache[(u, v)] = mono
            acc = bulk.add(acc, bulk.scale(c, mono))
        ok &= bulk.is_zero(acc)
    return ok


def _kummer_tensor(bulk, null, pts):
    """S(x, x) for every column, and the doubled point z read off its diagonal."""
    plan = plan_for(null)
    size = plan.size
    m = pts.shape[2]
    field = null.ctx.field
    scale = field(2 ** (plan.g - 1)).inv()

    qcache = {}

    def q(ci, a, b, a_neg):
        key = (ci, a, b, a_neg)
        got = qcache.get(key)
        if got is None:
            ar = plan.add[plan.neg[a]] if a_neg else plan.add[a]
            br = plan.add[b]
            got = np.zeros((bulk.d, m), dtype=np.int64)
            for t, s in zip(plan.ts, plan.signs[ci]):
                term = bulk.mul(pts[ar[t]], pts[br[t]])
                got = bulk.add(got, term) if s > 0 else bulk.sub(got, term)
            qcache[key] = got
        return got

    S = {}
    for i in range(size):
        for j in range(i, size):
            acc = np.zeros((bulk.d, m), dtype=np.int64)
            for ci, pick in enumerate(plan.choice(i, j)):
                if pick is None:
                    continue
                k2, l2, i2, j2, dinv = pick
                term = bulk.mul(q(ci, i2, j2, True), q(ci, k2, l2, False))
                acc = bulk.add(acc, bulk.scale(dinv * scale, term))
            S[(i, j)] = acc
    a = null.coords
    jj = next(i for i in range(size) if not a[i].is_zero())
    two_inv = field(2).inv()
    z = []
    for i in range(size):
        if not a[i].is_zero():
            z.append(bulk.scale(two_inv / a[i], S[(i, i)]))
        else:
            key = (i, jj) if i <= jj else (jj, i)
            z.append(bulk.scale(a[jj].inv(), S[key]))
    return S, z


def kummer_mask(bulk, null, pts):
    """Vectorized level-2 membership test (see ``chain_arithmetic.on_kummer``)."""
    S, z = _kummer_tensor(bulk, null, pts)
    a = null.coords
    size = len(a)
    ok = np.ones(pts.shape[2], dtype=bool)
    for i in range(size):
        for k in range(i, size):
            rhs = bulk.add(bulk.scale(a[k], z[i]), bulk.scale(a[i], z[k]))
            ok &= bulk.is_zero(bulk.sub(S[(i, k)], rhs))
    return ok


def kummer_double(bulk, null, pts):
    """Columns of 2x (as produced by chain_add(x, x, 0)) for Kummer points x."""
    return np.stack(_kummer_tensor(bulk, null, pts)[1])


def proportional_mask(bulk, x, y):
    """Columns where the vectors x and y (shape (size, d, M)) are proportional."""
    ok = np.ones(x.shape[2], dtype=bool)
    for i in range(x.shape[0]):
        for k in range(i + 1, x.shape[0]):
            ok &= bulk.is_zero(bulk.sub(bulk.mul(x[i], y[k]), bulk.mul(x[k], y[i])))
    return ok


def symmetric_chunks(bulk, g, level, chunk=1 << 20):
    """Projective enumeration of vectors with a_u = a_{-u}; yields (full coords array)."""
    _, _, neg = level_tables(g, level)
    size = level**g
    reps = [u for u in range(size) if u <= neg[u]]
    for pts in projective_chunks(bulk, len(reps), chunk):
        full = np.empty((size, bulk.d, pts.shape[2]), dtype=np.int64)
        for r, u in enumerate(reps):
            full[u] = pts[r]
            full[neg[u]] = pts[r]
        yield full


def null_relation_mask(bulk, g, level, pts, tuples):
    """Riemann relations between quadratic forms of candidate null points."""
    _, add, _ = level_tables(g, level)
    from .theta_core import torsion_offsets

    ts, _, signs = torsion_offsets(g, level)
    m = pts.shape[2]
    cache = {}

    def q(ci, a, b):
        key = (ci, a, b) if a <= b else (ci, b, a)
        got = cache.get(key)
        if got is None:
            got = np.zeros((bulk.d, m), dtype=np.int64)
            for t, s in zip(ts, signs[ci]):
                term = bulk.mul(pts[add[a][t]], pts[add[b][t]])
                got = bulk.add(got, term) if s > 0 else bulk.sub(got, term)
            cache[key] = got
        return got

    ok = np.ones(m, dtype=bool)
    for ci, i, j, k, l, i2, j2, k2, l2 in tuples:
        lhs = bulk.mul(q(ci, i, j), q(ci, k, l))
        rhs = bulk.mul(q(ci, i2, j2), q(ci, k2, l2))
        ok &= bulk.is_zero(bulk.sub(lhs, rhs))
    return ok


def distinct_null_tuples(g, level):
    """One representative per distinct relation, up to the obvious symmetries."""
    out = set()
    for ci in range(2**g):
        for tup in relation_tuples(g, level):
            i, j, k, l, i2, j2, k2, l2 = tup
            lhs = tuple(sorted([(min(i, j), max(i, j)), (min(k, l), max(k, l))]))
            rhs = tuple(sorted([(min(i2, j2), max(i2, j2)), (min(k2, l2), max(k2, l2))]))
            if lhs == rhs:
                continue
            a, b = sorted([lhs, rhs])
            out.add((ci, a[0][0], a[0][1], a[1][0], a[1][1], b[0][0], b[0][1], b[1][0], b[1][1]))
    return sorted(out)


__all__ = [
    "BulkField",
    "projective_chunks",
    "projective_count",
    "quadric_basis",
    "variety_mask",
    "kummer_mask",
    "kummer_double",
    "proportional_mask",
    "symmetric_chunks",
    "null_relation_mask",
    "distinct_null_tuples",
]

