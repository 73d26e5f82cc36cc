"""Pseudo-addition on the affine cone and the level-2 Kummer operations.

All formulas are instances of the quartic addition relations

    (sum_t chi(t) z_{i+t} d_{j+t}) * Q^0_chi(k, l)
        = (sum_t chi(t) y_{-i'+t} y_{j'+t}) * Q^x_chi(k', l')

with z = x + y, d = x - y, 2m = i + j + k + l and i' = m - i, etc.  For a
fixed j with d_j != 0, summing the left side over chi isolates 2^g z_i d_j.

At level 2 the null factor vanishes whenever chi(i + j) = -1, and only the
symmetric products z_i d_j + z_j d_i are recoverable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (
    ContextMismatch,
    DegenerateData,
    GenericityViolation,
    Level2Unsupported,
)
from .galois_field import sqrt
from .index_space import flat_index, level_tables
from .theta_core import AffineThetaPoint, negate, torsion_offsets


# ---------------------------------------------------------------------------
# per-null-point selection plans


class _Plan:
    """Index choices and null-point denominators for one null point."""

    def __init__(self, null):
        self.ctx = null.ctx
        self.g = null.ctx.g
        self.level = null.level
        self.coords = null.coords
        self.vecs, self.add, self.neg = level_tables(self.g, self.level)
        self.ts, _, self.signs = torsion_offsets(self.g, self.level)
        self.size = len(self.coords)
        self.evens = [
            flat_index(step, self.level)
            for step in itertools.product(range(0, self.level, 2), repeat=self.g)
        ]
        self._choice = {}
        self._sym = {}
        self.half = self.ctx.field(2**self.g).inv()
        self.two_inv = self.ctx.field(2).inv()

    def q(self, coords, ci, a, b, a_neg=False):
        add, sgn = self.add, self.signs[ci]
        ar = add[self.neg[a]] if a_neg else add[a]
        br = add[b]
        acc = None
        for t, s in zip(self.ts, sgn):
            term = coords[ar[t]] * coords[br[t]]
            if acc is None:
                acc = term if s > 0 else -term
            else:
                acc = acc + term if s > 0 else acc - term
        return acc

    def _primes(self, i, j, k, l):
        vecs, add, neg = self.vecs, self.add, self.neg
        m = flat_index([e // 2 for e in _lift_sum(vecs, (i, j, k, l), self.level)], self.level)
        return add[m][neg[i]], add[m][neg[j]], add[m][neg[k]], add[m][neg[l]]

    def _candidates(self, i, j):
        """k = i, l = j, then even offsets, then every pair of the right parity."""
        add = self.add
        seen = set()
        for a in self.evens:
            for b in self.evens:
                kl = (add[i][a], add[j][b])
                if kl not in seen:
                    seen.add(kl)
                    yield kl
        parity = tuple(e % 2 for e in self.vecs[add[i][j]])
        for k in range(self.size):
            for l in range(self.size):
                if (k, l) in seen:
                    continue
                if tuple(e % 2 for e in self.vecs[add[k][l]]) == parity:
                    yield k, l

    def choice(self, i, j):
        """Per character: (k', l', i', j', null denominator), or None when it is forced to 0."""
        key = (i, j)
        got = self._choice.get(key)
        if got is not None:
            return got
        out = []
        for ci in range(2**self.g):
            picked = None
            for k, l in self._candidates(i, j):
                den = self.q(self.coords, ci, k, l)
                if not den.is_zero():
                    i2, j2, k2, l2 = self._primes(i, j, k, l)
                    picked = (k2, l2, i2, j2, den.inv())
                    break
            if picked is None:
                if self.level == 2 and self._forced_zero(ci, i, j):
                    out.append(None)
                    continue
                raise DegenerateData(
                    f"no admissible (k, l) for index {self.vecs[i]} with d-index {self.vecs[j]}"
                )
            out.append(picked)
        got = tuple(out)
        self._choice[key] = got
        return got

    def _forced_zero(self, ci, i, j):
        bits = [e % 2 for e in self.vecs[self.add[i][j]]]
        chi_mask = list(itertools.product((0, 1), repeat=self.g))[ci]
        return sum(a * b for a, b in zip(chi_mask, bits)) % 2 == 1


def _lift_sum(vecs, idx, level):
    # entrywise sum of representatives in [0, level), reduced mod 2*level
    return [sum(vecs[a][c] for a in idx) % (2 * level) for c in range(len(vecs[0]))]


_PLANS = {}


def plan_for(null):
    key = (id(null.ctx), null.level, null.coords)
    plan = _PLANS.get(key)
    if plan is None:
        if len(_PLANS) > 256:
            _PLANS.clear()
        plan = _Plan(null)
        _PLANS[key] = plan
    return plan


def _check(*points):
    level = points[0].level
    for p in points[1:]:
        if p.level != level:
            raise ContextMismatch("points live at different levels")
    if level % 2:
        raise ContextMismatch("level must be even")


# ---------------------------------------------------------------------------
# core sums


def _weighted_row(plan, x, y, j):
    """T_i = sum_chi R_chi / D_chi = 2^g z_i d_j for every i (level >= 4)."""
    xc, yc = x.coords, y.coords
    out = []
    for i in range(plan.size):
        acc = None
        for ci, (k2, l2, i2, j2, dinv) in enumerate(plan.choice(i, j)):
            term = plan.q(yc, ci, i2, j2, a_neg=True) * plan.q(xc, ci, k2, l2) * dinv
            acc = term if acc is None else acc + term
        out.append(acc)
    return out


def symmetric_tensor(x, y, null):
    """S[i][j] = z_i d_j + z_j d_i at level 2, with z = x + y and d = x - y."""
    plan = plan_for(null)
    xc, yc = x.coords, y.coords
    scale = plan.ctx.field(2 ** (plan.g - 1)).inv()
    size = plan.size
    S = [[None] * size for _ in range(size)]
    for i in range(size):
        for j in range(i, size):
            acc = plan.ctx.field.zero()
            for ci, pick in enumerate(plan.choice(i, j)):
                if pick is None:
                    continue
                k2, l2, i2, j2, dinv = pick
                acc = acc + plan.q(yc, ci, i2, j2, a_neg=True) * plan.q(xc, ci, k2, l2) * dinv
            S[i][j] = S[j][i] = acc * scale
    return S


def chain_add(x, y, d, null):
    """Lift of x + y from lifts of x, y and x - y."""
    _check(x, y, d, null)
    plan = plan_for(null)
    try:
        j = next(a for a, c in enumerate(d.coords) if not c.is_zero())
    except StopIteration as exc:
        raise DegenerateData("difference point is the zero vector") from exc
    if plan.level == 2:
        return _chain_add_level2(plan, x, y, d, null)
    row = _weighted_row(plan, x, y, j)
    scale = (plan.ctx.field(2**plan.g) * d.coords[j]).inv()
    return AffineThetaPoint._raw(x.ctx, x.level, [v * scale for v in row])


def _chain_add_level2(plan, x, y, d, null):
    S = symmetric_tensor(x, y, null)
    dc = d.coords
    j = next(a for a, c in enumerate(dc) if not c.is_zero())
    inv_dj = dc[j].inv()
    out = []
    for i in range(plan.size):
        if not dc[i].is_zero():
            out.append(S[i][i] * plan.two_inv / dc[i])
        else:
            out.append(S[i][j] * inv_dj)
    return AffineThetaPoint._raw(x.ctx, x.level, out)


def normal_add(x, y, null):
    """A representative of x + y with no difference point."""
    _check(x, y, null)
    plan = plan_for(null)
    if plan.level == 2:
        raise Level2Unsupported("level 2 only supports the Kummer pair")
    for j in range(plan.size):
        row = _weighted_row(plan, x, y, j)
        if any(not v.is_zero() for v in row):
            return AffineThetaPoint._raw(x.ctx, x.level, row)
    raise DegenerateData("all difference coordinates vanish")


# ---------------------------------------------------------------------------
# multiplication chains


def chain_multadd(m, x_plus_y, x, y, null):
    """Lift of m*x + y by a Montgomery ladder."""
    m = int(m)
    if m < 0:
        raise ValueError("m must be >= 0")
    if m == 0:
        return y
    if m == 1:
        return x_plus_y
    y_minus_x = chain_add(y, negate(x), x_plus_y, null)
    lo, hi, acc = null, x, y  # m' x, (m'+1) x, m' x + y
    for bit in bin(m)[2:]:
        if bit == "0":
            acc = chain_add(acc, lo, y, null)
            hi = chain_add(hi, lo, x, null)
            lo = chain_add(lo, lo, null, null)
        else:
            acc = chain_add(acc, hi, y_minus_x, null)
            lo = chain_add(hi, lo, x, null)
            hi = chain_add(hi, hi, null, null)
    return acc


def chain_multadd_naive(m, x_plus_y, x, y, null):
    """The defining recursion m x + y = add((m-1) x + y, x, (m-2) x + y)."""
    m = int(m)
    if m == 0:
        return y
    prev, cur = y, x_plus_y
    for _ in range(m - 1):
        prev, cur = cur, chain_add(cur, x, prev, null)
    return cur


def chain_mult(m, x, null):
    """Lift of m*x; scales by lam^(m^2) when x is scaled by lam."""
    m = int(m)
    if m < 0:
        raise ValueError("m must be >= 0")
    if m == 0:
        return null.as_point() if hasattr(null, "as_point") else null
    lo, hi = null, x
    for bit in bin(m)[2:]:
        if bit == "0":
            hi = chain_add(hi, lo, x, null)
            lo = chain_add(lo, lo, null, null)
        else:
            lo = chain_add(hi, lo, x, null)
            hi = chain_add(hi, hi, null, null)
    return lo


def multiples(x, null, count):
    """[0, x, 2x, ..., (count-1) x] by successive chain additions."""
    out = [null.as_point(), x]
    while len(out) < count:
        out.append(chain_add(out[-1], x, out[-2], null))
    return out[:count]


# ---------------------------------------------------------------------------
# level 2


@dataclass(frozen=True)
class KummerPair:
    first: AffineThetaPoint
    second: AffineThetaPoint

    @classmethod
    def of(cls, a, b):
        a, b = a.normalized(), b.normalized()
        if _key(b) < _key(a):
            a, b = b, a
        return cls(a, b)

    def __iter__(self):
        return iter((self.first, self.second))

    def __contains__(self, point):
        from .theta_core import projective_eq

        return any(projective_eq(m, point)[0] for m in (self.first, self.second))


def _key(p):
    return tuple(c.sort_key() for c in p.coords)


def _factor_symmetric(S, field):
    """Split S = p q^T + q p^T into {p, q}; raises NoSqrt when it needs an extension.

    With p_a = 1 the ratio p_b is a root of S_aa t^2 - 2 S_ab t + S_bb, and
    every further coordinate follows linearly.
    """
    size = len(S)
    a = next((i for i in range(size) if not S[i][i].is_zero()), None)
    if a is None:
        return _factor_hollow(S)
    qa = S[a][a] / 2
    for b in range(size):
        if b == a:
            continue
        disc = S[a][b] * S[a][b] - S[a][a] * S[b][b]
        if disc.is_zero():
            continue
        pb = (S[a][b] + sqrt(disc)) / S[a][a]
        qb = S[a][b] - pb * qa
        den = qb - pb * qa
        p = [None] * size
        q = [None] * size
        p[a], q[a], p[b], q[b] = field.one(), qa, pb, qb
        for c in range(size):
            if c not in (a, b):
                p[c] = (S[b][c] - pb * S[a][c]) / den
                q[c] = S[a][c] - p[c] * qa
        return p, q
    # every discriminant vanished: p and q are proportional
    p = [S[a][c] / S[a][a] for c in range(size)]
    return p, p


def _factor_hollow(S):
    # p_a q_a = 0 everywhere: with S_ab != 0 take p_a = 1, q_a = 0, q_b != 0, p_b = 0
    size = len(S)
    try:
        a, b = next((i, j) for i in range(size) for j in range(size) if not S[i][j].is_zero())
    except StopIteration:
        raise DegenerateData("the symmetric tensor vanishes") from None
    inv = S[a][b].inv()
    return [S[b][c] * inv for c in range(size)], list(S[a])


def _rank_one(S):
    """The common factor when S = 2 p p^T, else None."""
    size = len(S)
    a = next((i for i in range(size) if not S[i][i].is_zero()), None)
    if a is None:
        return None
    if all(S[a][b] * S[a][b] == S[a][a] * S[b][b] for b in range(size)):
        return [S[a][c] / S[a][a] for c in range(size)]
    return None


def kummer_add_pair(x, y, null):
    """The unordered pair {x + y, x - y} of level-2 points."""
    _check(x, y, null)
    if x.level != 2:
        raise ContextMismatch("Kummer pair needs level 2")
    S = symmetric_tensor(x, y, null)
    p, q = _factor_symmetric(S, x.ctx.field)
    pa = AffineThetaPoint._raw(x.ctx, 2, p)
    qa = AffineThetaPoint._raw(x.ctx, 2, q)
    return KummerPair.of(pa, qa)


def _quadric(S, a, b):
    # t = r_b / r_a of each factor is a root of S_aa t^2 - 2 S_ab t + S_bb
    return S[a][a], -2 * S[a][b], S[b][b]


def kummer_compatible_add(x, y, z, x_plus_y, y_plus_z, null):
    """+-(x + z), picked consistently with the given x + y and y + z, sqrt-free.

    {x + z, x - z} and {(x + y) + (y + z), x - z} share x - z; the other factor
    of the first pair is the answer.
    """
    _check(x, y, z, x_plus_y, y_plus_z, null)
    field = x.ctx.field
    S1 = symmetric_tensor(x, z, null)
    S2 = symmetric_tensor(x_plus_y, y_plus_z, null)
    size = len(S1)
    double = _rank_one(S1)
    if double is not None:
        # x + z = x - z, nothing to choose
        return AffineThetaPoint._raw(x.ctx, 2, double).normalized()
    for a in range(size):
        if S1[a][a].is_zero() or S2[a][a].is_zero():
            continue
        for b in range(size):
            if b == a:
                continue
            a1, b1, c1 = _quadric(S1, a, b)
            a2, b2, c2 = _quadric(S2, a, b)
            lin = a2 * b1 - a1 * b2
            const = a2 * c1 - a1 * c2
            if lin.is_zero():
                continue
            t0 = -const / lin
            t1 = -b1 / a1 - t0
            if t1 == t0:
                continue
            # both roots shared means the two tensors agree up to scale here
            if (a2 * t1 * t1 + b2 * t1 + c2).is_zero():
                continue
            qa = S1[a][a] / 2
            qb = S1[a][b] - t1 * qa
            den = qb - t1 * qa
            if den.is_zero():
                continue
            p = [None] * size
            p[a], p[b] = field.one(), t1
            for c in range(size):
                if c in (a, b):
                    continue
                p[c] = (S1[b][c] - t1 * S1[a][c]) / den
            return AffineThetaPoint._raw(x.ctx, 2, p).normalized()
    raise GenericityViolation("the two quadratic systems do not single out a common root")


def on_kummer(x, null):
    """Level-2 membership: S(x, x) must be z a^T + a z^T for some z."""
    if x.level != 2:
        raise ContextMismatch("Kummer test needs level 2")
    S = symmetric_tensor(x, x, null)
    a = null.coords
    size = len(a)
    field = x.ctx.field
    two_inv = field(2).inv()
    j = next(i for i in range(size) if not a[i].is_zero())
    z = []
    for i in range(size):
        if not a[i].is_zero():
            z.append(S[i][i] * two_inv / a[i])
        else:
            z.append(S[i][j] / a[j])
    for i in range(size):
        for k in range(size):
            if S[i][k] != z[i] * a[k] + z[k] * a[i]:
                return False
    return True
