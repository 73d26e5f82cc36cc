"""Index groups Z(delta) = (Z/delta)^g, characters of Z(2), and level data."""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import gcd

from .errors import SchemaError


class IndexVector:
    """An element of (Z/modulus)^g; also used for dual-group elements."""

    __slots__ = ("entries", "modulus")

    def __init__(self, entries, modulus):
        modulus = int(modulus)
        self.modulus = modulus
        self.entries = tuple(int(e) % modulus for e in entries)

    @property
    def g(self):
        return len(self.entries)

    def _check(self, other):
        if other.modulus != self.modulus or len(other.entries) != len(self.entries):
            raise ValueError("index vectors of different shape")

    def __add__(self, other):
        self._check(other)
        return IndexVector([a + b for a, b in zip(self.entries, other.entries)], self.modulus)

    def __sub__(self, other):
        self._check(other)
        return IndexVector([a - b for a, b in zip(self.entries, other.entries)], self.modulus)

    def __neg__(self):
        return IndexVector([-a for a in self.entries], self.modulus)

    def __mul__(self, c):
        return IndexVector([a * int(c) for a in self.entries], self.modulus)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, IndexVector)
            and self.modulus == other.modulus
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.entries, self.modulus))

    def __lt__(self, other):
        return self.entries < other.entries

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, k):
        return self.entries[k]

    def dot(self, other):
        self._check(other)
        return sum(a * b for a, b in zip(self.entries, other.entries)) % self.modulus

    def reduce(self, modulus):
        """Reduction into (Z/modulus)^g for modulus dividing the current one."""
        return IndexVector(self.entries, modulus)

    def flat(self):
        return flat_index(self.entries, self.modulus)

    def __str__(self):
        return "[" + ",".join(str(e) for e in self.entries) + "]"

    def __repr__(self):
        return f"IndexVector({list(self.entries)}, mod {self.modulus})"

    @classmethod
    def parse(cls, text, modulus):
        text = str(text).strip()
        if not (text.startswith("[") and text.endswith("]")):
            raise SchemaError(f"bad index vector {text!r}")
        body = text[1:-1].strip()
        try:
            entries = [int(s) for s in body.split(",")] if body else []
        except ValueError as exc:
            raise SchemaError(f"bad index vector {text!r}") from exc
        return cls(entries, modulus)


def flat_index(entries, modulus):
    """Position of a vector in the lexicographic enumeration (entry 0 most significant)."""
    pos = 0
    for e in entries:
        pos = pos * modulus + (e % modulus)
    return pos


def unflat_index(pos, g, modulus):
    entries = [0] * g
    for k in range(g - 1, -1, -1):
        pos, entries[k] = divmod(pos, modulus)
    return tuple(entries)


def enumerate_indices(g, delta):
    """All delta^g vectors of (Z/delta)^g in lexicographic order."""
    if delta < 1:
        raise ValueError("level must be >= 1")
    return [IndexVector(e, delta) for e in itertools.product(range(delta), repeat=g)]


class Character2:
    """Character of Z(2) = (Z/2)^g given by a bit mask."""

    __slots__ = ("mask",)

    def __init__(self, mask):
        self.mask = tuple(int(b) & 1 for b in mask)

    def __call__(self, t):
        """Value on t, given either as bits or as a vector of Z(delta) inside (delta/2)Z."""
        if isinstance(t, IndexVector):
            half = t.modulus // 2
            bits = [e // half for e in t.entries]
        else:
            bits = t
        s = sum(m * b for m, b in zip(self.mask, bits)) & 1
        return -1 if s else 1

    def is_trivial(self):
        return not any(self.mask)

    def __eq__(self, other):
        return isinstance(other, Character2) and self.mask == other.mask

    def __hash__(self):
        return hash(self.mask)

    def __repr__(self):
        return f"Character2({list(self.mask)})"


def characters(g):
    return [Character2(m) for m in itertools.product((0, 1), repeat=g)]


def two_torsion(g, delta):
    """The subgroup Z(2) embedded in Z(delta) as (delta/2) * {0,1}^g."""
    if delta % 2:
        raise ValueError("level must be even")
    half = delta // 2
    return [IndexVector([half * b for b in bits], delta) for bits in itertools.product((0, 1), repeat=g)]


def embed_scale(i, factor, level=None):
    """x -> factor * x, from Z(n) into Z(factor * n)."""
    level = level or i.modulus * factor
    return IndexVector([factor * e for e in i.entries], level)


class ThetaContext:
    """Dimension, levels and roots of unity shared by a computation.

    ``ell`` may be None for work that only happens at level n.
    """

    def __init__(self, field, g, n, ell=None, zeta_ln=None):
        g, n = int(g), int(n)
        if g < 1:
            raise ValueError("g must be >= 1")
        if n < 2 or n % 2:
            raise ValueError("n must be even")
        if ell is not None:
            ell = int(ell)
            if ell < 3 or ell % 2 == 0:
                raise ValueError("ell must be odd and >= 3")
            if gcd(ell, n) != 1:
                raise ValueError("ell must be prime to n")
        self.field = field
        self.g = g
        self.n = n
        self.ell = ell
        top = n * ell if ell else n
        if zeta_ln is None:
            zeta_ln = field.primitive_root_of_unity(top)
        else:
            zeta_ln = field(zeta_ln)
            if not (zeta_ln**top).is_one() or any(
                (zeta_ln ** (top // r)).is_one() for r in _prime_divisors(top)
            ):
                raise ValueError("supplied root of unity has the wrong order")
        self.top_level = top
        self.zeta_ln = zeta_ln
        self.zeta_n = zeta_ln ** (ell or 1)
        self.zeta_ell = zeta_ln**n if ell else None
        self._zeta = {}

    @property
    def ln(self):
        if self.ell is None:
            raise ValueError("context has no ell")
        return self.ell * self.n

    def zeta(self, delta):
        """Primitive delta-th root used by the canonical pairing at level delta."""
        z = self._zeta.get(delta)
        if z is None:
            if self.top_level % delta:
                raise ValueError(f"level {delta} does not divide {self.top_level}")
            z = self.zeta_ln ** (self.top_level // delta)
            self._zeta[delta] = z
        return z

    def with_field(self, field, zeta_ln=None):
        """Same levels over another field (e.g. an extension)."""
        if zeta_ln is None and field.p == self.field.p and field.d % self.field.d == 0:
            zeta_ln = field(self.zeta_ln)
        return ThetaContext(field, self.g, self.n, self.ell, zeta_ln)

    def to_dict(self):
        return {"g": self.g, "n": self.n, "ell": self.ell, "zeta_ln": str(self.zeta_ln)}

    def __eq__(self, other):
        return (
            isinstance(other, ThetaContext)
            and self.g == other.g
            and self.n == other.n
            and self.ell == other.ell
            and self.field == other.field
            and self.zeta_ln == other.zeta_ln
        )

    def __hash__(self):
        return hash((self.g, self.n, self.ell, self.field))

    def __repr__(self):
        return f"ThetaContext(g={self.g}, n={self.n}, ell={self.ell}, {self.field!r})"


def _prime_divisors(m):
    out, f = [], 2
    while f * f <= m:
        if m % f == 0:
            out.append(f)
            while m % f == 0:
                m //= f
        f += 1
    if m > 1:
        out.append(m)
    return out


def section_set(ctx):
    """n * Z(ell) inside Z(ell * n)."""
    ln = ctx.ln
    return [IndexVector([ctx.n * e for e in v.entries], ln) for v in enumerate_indices(ctx.g, ctx.ell)]


def chain_basis(ctx):
    """0, d_i = n e_i, d_i + d_j (i < j), as vectors of Z(ell * n)."""
    g, n, ln = ctx.g, ctx.n, ctx.ln
    out = [IndexVector([0] * g, ln)]
    unit = []
    for i in range(g):
        e = [0] * g
        e[i] = n
        unit.append(IndexVector(e, ln))
    out.extend(unit)
    for i in range(g):
        for j in range(i + 1, g):
            out.append(unit[i] + unit[j])
    return out


def chain_basis_coefficients(g):
    """The chain basis written in coordinates of Z(ell): 0, e_i, e_i + e_j."""
    out = [tuple([0] * g)]
    for i in range(g):
        e = [0] * g
        e[i] = 1
        out.append(tuple(e))
    for i in range(g):
        for j in range(i + 1, g):
            e = [0] * g
            e[i] = e[j] = 1
            out.append(tuple(e))
    return out


def dual_pairing(ctx, i, j, level=None):
    """e(i, j) = zeta_level ** <i, j>."""
    level = level or i.modulus
    if i.modulus != level or j.modulus != level:
        i = i.reduce(level) if i.modulus % level == 0 else i
        j = j.reduce(level) if j.modulus % level == 0 else j
    return ctx.zeta(level) ** (sum(a * b for a, b in zip(i.entries, j.entries)) % level)


@lru_cache(maxsize=None)
def level_tables(g, delta):
    """Flat-index tables for addition and negation at level delta."""
    size = delta**g
    vecs = [unflat_index(a, g, delta) for a in range(size)]
    neg = tuple(flat_index([-e for e in v], delta) for v in vecs)
    add = tuple(
        tuple(flat_index([x + y for x, y in zip(vecs[a], vecs[b])], delta) for b in range(size))
        for a in range(size)
    )
    return vecs, add, neg
