"""Theta points on the affine cone and the linear algebra acting on them.

Coordinates are stored densely, in lexicographic index order, as tuples of
field elements.  The quadratic forms

    Q_chi(a, b) = sum_{t in Z(2)} chi(t) x_{a+t} x_{b+t}

appear in every relation below; ``quadratic_table`` evaluates all of them once.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import BothZero, ContextMismatch, SchemaError
from .index_space import (
    IndexVector,
    characters,
    enumerate_indices,
    flat_index,
    level_tables,
    two_torsion,
)

POINT_FORMAT = "theta-point/1"


class AffineThetaPoint:
    """A coordinate vector (x_i) for i in Z(level)^g."""

    __slots__ = ("ctx", "level", "coords")

    def __init__(self, ctx, level, coords):
        level = int(level)
        coords = tuple(ctx.field(c) for c in coords)
        if len(coords) != level**ctx.g:
            raise ValueError(f"expected {level ** ctx.g} coordinates, got {len(coords)}")
        self.ctx = ctx
        self.level = level
        self.coords = coords

    @classmethod
    def _raw(cls, ctx, level, coords):
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj.level = level
        obj.coords = tuple(coords)
        return obj

    @property
    def g(self):
        return self.ctx.g

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, key):
        if isinstance(key, IndexVector):
            return self.coords[flat_index(key.entries, self.level)]
        if isinstance(key, tuple):
            return self.coords[flat_index(key, self.level)]
        return self.coords[key]

    def indices(self):
        return enumerate_indices(self.ctx.g, self.level)

    def is_zero(self):
        return all(c.is_zero() for c in self.coords)

    def scale(self, lam):
        lam = self.ctx.field(lam)
        return type(self)._raw(self.ctx, self.level, [lam * c for c in self.coords])

    def __mul__(self, lam):
        return self.scale(lam)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, AffineThetaPoint)
            and self.level == other.level
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((self.level, self.coords))

    def __repr__(self):
        body = ", ".join(str(c) for c in self.coords)
        return f"{type(self).__name__}(level={self.level}, [{body}])"

    def as_point(self):
        return AffineThetaPoint._raw(self.ctx, self.level, self.coords)

    def normalized(self):
        """Projective representative with first nonzero coordinate equal to 1."""
        for c in self.coords:
            if not c.is_zero():
                return self.scale(c.inv())
        raise BothZero("zero vector has no projective class")

    def to_json(self):
        return {
            "format": POINT_FORMAT,
            "level": self.level,
            "g": self.ctx.g,
            "coords": [str(c) for c in self.coords],
        }

    @classmethod
    def from_json(cls, ctx, data):
        try:
            if data.get("format", POINT_FORMAT) != POINT_FORMAT:
                raise SchemaError(f"unknown point format {data.get('format')!r}")
            if int(data["g"]) != ctx.g:
                raise SchemaError("dimension does not match the context")
            level = int(data["level"])
            coords = [ctx.field.parse(s) for s in data["coords"]]
        except (KeyError, TypeError, AttributeError) as exc:
            raise SchemaError(f"bad point record: {exc}") from exc
        if len(coords) != level**ctx.g:
            raise SchemaError("coordinate count does not match the level")
        return cls(ctx, level, coords)


class ThetaNullPoint(AffineThetaPoint):
    """Affine lift of a theta null point.  ``valid`` is filled by validation."""

    __slots__ = ("valid",)

    def __init__(self, ctx, level, coords, valid=None):
        super().__init__(ctx, level, coords)
        self.valid = valid

    @classmethod
    def _raw(cls, ctx, level, coords):
        obj = super()._raw(ctx, level, coords)
        obj.valid = None
        return obj

    @classmethod
    def from_point(cls, point, valid=None):
        obj = cls._raw(point.ctx, point.level, point.coords)
        obj.valid = valid
        return obj


@dataclass(frozen=True)
class HeisenbergElement:
    alpha: object
    i: IndexVector
    j: IndexVector

    @property
    def level(self):
        return self.i.modulus

    def times(self, other, ctx):
        return heisenberg_product(ctx, self, other)


def heisenberg_product(ctx, h1, h2):
    """(a1, i1, j1)(a2, i2, j2) = (a1 a2 e(i1, j2), i1 + i2, j1 + j2)."""
    level = h1.level
    e = ctx.zeta(level) ** (h1.i.dot(h2.j))
    return HeisenbergElement(h1.alpha * h2.alpha * e, h1.i + h2.i, h1.j + h2.j)


def heisenberg_act(h, x):
    """result_u = alpha * e(-u - i, j) * x_{u + i}."""
    ctx, level = x.ctx, x.level
    if h.i.modulus != level or h.j.modulus != level:
        raise ContextMismatch("Heisenberg element and point have different levels")
    vecs, add, _ = level_tables(ctx.g, level)
    zeta = ctx.zeta(level)
    alpha = ctx.field(h.alpha)
    ii = h.i.flat()
    jj = h.j.entries
    powers = [zeta**k for k in range(level)]
    out = []
    for u in range(len(x.coords)):
        ui = add[u][ii]
        exponent = -sum(a * b for a, b in zip(vecs[ui], jj)) % level
        out.append(alpha * powers[exponent] * x.coords[ui])
    return AffineThetaPoint._raw(ctx, level, out)


def negate(x):
    """Coordinate at u becomes the coordinate at -u."""
    _, _, neg = level_tables(x.ctx.g, x.level)
    return AffineThetaPoint._raw(x.ctx, x.level, [x.coords[neg[u]] for u in range(len(x.coords))])


# ---------------------------------------------------------------------------
# quadratic forms and relation sweeps


def torsion_offsets(g, level):
    """Flat indices of Z(2) in Z(level) and the character signs on them."""
    ts = [t.flat() for t in two_torsion(g, level)]
    chis = characters(g)
    bits = list(itertools.product((0, 1), repeat=g))
    signs = [[chi(b) for b in bits] for chi in chis]
    return ts, chis, signs


def quadratic_table(x, y=None):
    """Q[chi][a][b] = sum_t chi(t) x_{a+t} y_{b+t} over flat indices."""
    y = x if y is None else y
    g, level = x.ctx.g, x.level
    _, add, _ = level_tables(g, level)
    ts, chis, signs = torsion_offsets(g, level)
    size = len(x.coords)
    xc, yc = x.coords, y.coords
    zero = x.ctx.field.zero()
    # products for every translate, then signed sums
    table = []
    for sgn in signs:
        rows = []
        for a in range(size):
            arow = add[a]
            row = []
            for b in range(size):
                brow = add[b]
                acc = zero
                for t, s in zip(ts, sgn):
                    term = xc[arow[t]] * yc[brow[t]]
                    acc = acc + term if s > 0 else acc - term
                row.append(acc)
            rows.append(row)
        table.append(rows)
    return table


def _half(vec_sum, level):
    return tuple(e // 2 for e in vec_sum)


def relation_tuples(g, level, symmetric_pairs=True):
    """Yield flat (i, j, k, l, i', j', k', l') with i + j + k + l = 2m."""
    vecs, add, neg = level_tables(g, level)
    size = level**g
    for i in range(size):
        for j in range(i if symmetric_pairs else 0, size):
            ij = add[i][j]
            for k in range(size):
                ijk = add[ij][k]
                # l must make every entry of i + j + k + l even
                base = [(-e) % 2 for e in vecs[ijk]]
                for step in itertools.product(range(0, level, 2), repeat=g):
                    l = flat_index([b + s for b, s in zip(base, step)], level)
                    if symmetric_pairs and l < k:
                        continue
                    total = vecs[add[ijk][l]]
                    m = flat_index(_half(total, level), level)
                    yield i, j, k, l, add[m][neg[i]], add[m][neg[j]], add[m][neg[k]], add[m][neg[l]]


@dataclass
class ValidationReport:
    ok: bool
    level: int
    violations: list = field(default_factory=list)
    checked: int = 0
    suspect: bool = False

    def __bool__(self):
        return self.ok


def _symmetry_violations(x):
    _, _, neg = level_tables(x.ctx.g, x.level)
    vecs = level_tables(x.ctx.g, x.level)[0]
    out = []
    for u in range(len(x.coords)):
        if x.coords[u] != x.coords[neg[u]]:
            out.append(("symmetry", vecs[u], vecs[neg[u]]))
    return out


def degenerate_classes(null):
    """Parity classes / characters for which every Q_chi(k, l) of the null point vanishes."""
    g, level = null.ctx.g, null.level
    vecs, add, _ = level_tables(g, level)
    table = quadratic_table(null)
    chis = characters(g)
    bad = []
    for ci, chi in enumerate(chis):
        for cls in itertools.product((0, 1), repeat=g):
            found = False
            for k in range(level**g):
                for l in range(level**g):
                    if tuple(e % 2 for e in vecs[add[k][l]]) != cls:
                        continue
                    if level == 2 and chi(vecs[add[k][l]]) < 0:
                        continue
                    if not table[ci][k][l].is_zero():
                        found = True
                        break
                if found:
                    break
            if not found:
                if level == 2 and chi(cls) < 0:
                    continue
                bad.append((chi.mask, cls))
    return bad


def validate_null_point(null, max_report=10):
    """Symmetry plus the quartic relations between the quadratic forms of 0."""
    g, level = null.ctx.g, null.level
    vecs = level_tables(g, level)[0]
    violations = _symmetry_violations(null)
    checked = len(null.coords)
    if level > 2 and level % 2 == 0:
        table = quadratic_table(null)
        for ci in range(2**g):
            q = table[ci]
            for i, j, k, l, i2, j2, k2, l2 in relation_tuples(g, level):
                checked += 1
                if q[i][j] * q[k][l] != q[i2][j2] * q[k2][l2]:
                    if len(violations) < max_report:
                        violations.append(
                            ("riemann", characters(g)[ci].mask, vecs[i], vecs[j], vecs[k], vecs[l])
                        )
                    else:
                        break
            if len(violations) >= max_report:
                break
    ok = not violations and not null.is_zero()
    report = ValidationReport(ok, level, violations[:max_report], checked)
    if ok:
        report.suspect = bool(degenerate_classes(null))
    if isinstance(null, ThetaNullPoint):
        null.valid = ok
    return report


def validate_on_variety(x, null):
    """True iff x satisfies the quadratic Riemann equations relative to null.

    At level 2 the Riemann equations are empty; the Kummer test of
    ``chain_arithmetic.on_kummer`` is used instead.
    """
    if x.level != null.level:
        raise ContextMismatch("levels differ")
    if x.is_zero():
        return False
    if x.level == 2:
        from .chain_arithmetic import on_kummer

        return on_kummer(x, null)
    g, level = x.ctx.g, x.level
    qx = quadratic_table(x)
    qa = quadratic_table(null)
    for ci in range(2**g):
        px, pa = qx[ci], qa[ci]
        for i, j, k, l, i2, j2, k2, l2 in _variety_tuples(g, level):
            if px[i][j] * pa[k][l] != px[k2][l2] * pa[i2][j2]:
                return False
    return True


def _variety_tuples(g, level):
    vecs, add, neg = level_tables(g, level)
    size = level**g
    for i in range(size):
        for j in range(i, size):
            ij = add[i][j]
            for k in range(size):
                ijk = add[ij][k]
                base = [(-e) % 2 for e in vecs[ijk]]
                for step in itertools.product(range(0, level, 2), repeat=g):
                    l = flat_index([b + s for b, s in zip(base, step)], level)
                    if l < k:
                        continue
                    m = flat_index(_half(vecs[add[ijk][l]], level), level)
                    yield i, j, k, l, add[m][neg[i]], add[m][neg[j]], add[m][neg[k]], add[m][neg[l]]


# ---------------------------------------------------------------------------
# transforms


class CharTable:
    """u[i][c] = sum_t chi_c(t) x_{i+t}; dense over all i and all characters."""

    __slots__ = ("ctx", "level", "values")

    def __init__(self, ctx, level, values):
        self.ctx = ctx
        self.level = level
        self.values = values

    def __getitem__(self, key):
        i, chi = key
        if isinstance(i, IndexVector):
            i = i.flat()
        if not isinstance(chi, int):
            chi = characters(self.ctx.g).index(chi)
        return self.values[i][chi]


def char_transform(x):
    g, level = x.ctx.g, x.level
    if level % 2:
        raise ValueError("level must be even")
    _, add, _ = level_tables(g, level)
    ts, _, signs = torsion_offsets(g, level)
    zero = x.ctx.field.zero()
    values = []
    for i in range(len(x.coords)):
        row = []
        for sgn in signs:
            acc = zero
            for t, s in zip(ts, sgn):
                c = x.coords[add[i][t]]
                acc = acc + c if s > 0 else acc - c
            row.append(acc)
        values.append(row)
    return CharTable(x.ctx, level, values)


def inverse_char_transform(table):
    ctx = table.ctx
    scale = ctx.field(2**ctx.g).inv()
    zero = ctx.field.zero()
    coords = []
    for row in table.values:
        acc = zero
        for v in row:
            acc = acc + v
        coords.append(acc * scale)
    return AffineThetaPoint._raw(ctx, table.level, coords)


def inversion_transform(x):
    """result_i = sum_j e(i, j) x_j at the level of x."""
    ctx, level = x.ctx, x.level
    vecs = level_tables(ctx.g, level)[0]
    zeta = ctx.zeta(level)
    powers = [zeta**k for k in range(level)]
    zero = ctx.field.zero()
    out = []
    for vi in vecs:
        acc = zero
        for b, vj in enumerate(vecs):
            acc = acc + powers[sum(p * q for p, q in zip(vi, vj)) % level] * x.coords[b]
        out.append(acc)
    return AffineThetaPoint._raw(ctx, level, out)


def projective_eq(x, y):
    """(True, lam) when y = lam * x, else (False, None)."""
    if x.level != y.level:
        raise ContextMismatch("levels differ")
    if x.is_zero() or y.is_zero():
        raise BothZero("projective comparison with the zero vector")
    lam = None
    for a, b in zip(x.coords, y.coords):
        if not a.is_zero():
            lam = b / a
            break
    if lam.is_zero():
        return False, None
    for a, b in zip(x.coords, y.coords):
        if lam * a != b:
            return False, None
    return True, lam


def ratio(x, y):
    """lam with y = lam * x, or None."""
    ok, lam = projective_eq(x, y)
    return lam if ok else None


def embed_point(x, ctx):
    """The same coordinates read in ``ctx`` (typically over an extension field)."""
    if ctx.g != x.ctx.g:
        raise ContextMismatch("dimensions differ")
    coords = [ctx.field(c) for c in x.coords]
    if isinstance(x, ThetaNullPoint):
        return ThetaNullPoint.from_point(AffineThetaPoint._raw(ctx, x.level, coords), x.valid)
    return AffineThetaPoint._raw(ctx, x.level, coords)
