"""Exact arithmetic in F_p and small extensions F_{p^d}.

Elements of F_p are stored as plain ints, elements of F_{p^d} with d > 1 as
tuples of d residues (low degree first) modulo a monic irreducible polynomial.
Roots of unity and k-th roots are chosen by fixed rules so that every run of
the library produces bit-identical results:

* the multiplicative group is generated by the smallest generator, where
  elements are compared through their coefficient tuple ``(c0, c1, ...)``;
* ``zeta_m = gamma ** ((q - 1) // m)``;
* among all k-th roots of an element the one with the smallest coefficient
  tuple is returned.
"""

from __future__ import annotations

import itertools
import random
from functools import lru_cache
from math import gcd

import sympy

from .errors import ContextMismatch, DivisionByZero, NoRoot, NoSuchRoot, SchemaError


@lru_cache(maxsize=None)
def _factor(n):
    return tuple(sorted(sympy.factorint(n).items()))


def _find_irreducible(p, d):
    # monic x^d + sum c_i x^i, scanned with (c0, c1, ...) in lexicographic order
    x = sympy.Symbol("x")
    for tail in itertools.product(range(p), repeat=d):
        if tail[0] == 0:
            continue
        expr = x**d + sum(c * x**i for i, c in enumerate(tail))
        if sympy.Poly(expr, x, modulus=p).is_irreducible:
            return tuple(tail) + (1,)
    raise ValueError(f"no irreducible polynomial of degree {d} over F_{p}")


class FieldContext:
    """The field F_{p^d}.

    ``modulus`` is the full monic modulus, low degree first, ``d + 1`` entries.
    It may be omitted, in which case the first irreducible polynomial of the
    lexicographic scan is used.  ``unity_orders`` pre-fills the root cache.
    """

    def __init__(self, p, d=1, modulus=None, unity_orders=()):
        p = int(p)
        d = int(d)
        if p == 2 or not sympy.isprime(p):
            raise ValueError(f"p={p} must be an odd prime")
        if d < 1:
            raise ValueError("extension degree must be >= 1")
        self.p = p
        self.d = d
        self.q = p**d
        if d == 1:
            self.modulus = (0, 1)
        else:
            if modulus is None:
                modulus = _find_irreducible(p, d)
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) == d:
                modulus = modulus + (1,)
            if len(modulus) != d + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree d")
            x = sympy.Symbol("x")
            poly = sympy.Poly(sum(c * x**i for i, c in enumerate(modulus)), x, modulus=p)
            if not poly.is_irreducible:
                raise ValueError("modulus polynomial is reducible")
            self.modulus = modulus
        self._red = tuple((-c) % p for c in self.modulus[:-1])
        self._generator = None
        self._roots = {}
        self._embeddings = {}
        for m in unity_orders:
            self.primitive_root_of_unity(m)

    # -- identity -----------------------------------------------------------
    def __eq__(self, other):
        return (
            isinstance(other, FieldContext)
            and self.p == other.p
            and self.d == other.d
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.d, self.modulus))

    def __repr__(self):
        if self.d == 1:
            return f"FieldContext(p={self.p})"
        return f"FieldContext(p={self.p}, d={self.d}, modulus={list(self.modulus)})"

    def to_dict(self):
        return {"p": self.p, "d": self.d, "modulus_poly": list(self.modulus)}

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(data["p"], data.get("d", 1), data.get("modulus_poly"))
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"bad field description: {exc}") from exc

    # -- raw arithmetic on ints / tuples -------------------------------------
    def _norm(self, value):
        p = self.p
        if self.d == 1:
            if isinstance(value, (tuple, list)):
                if len(value) != 1:
                    raise ValueError("prime field elements have one coefficient")
                value = value[0]
            return int(value) % p
        if isinstance(value, (tuple, list)):
            if len(value) > self.d:
                raise ValueError("too many coefficients")
            vals = [int(c) % p for c in value] + [0] * (self.d - len(value))
            return tuple(vals)
        return (int(value) % p,) + (0,) * (self.d - 1)

    def _add(self, a, b):
        if self.d == 1:
            return (a + b) % self.p
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def _sub(self, a, b):
        if self.d == 1:
            return (a - b) % self.p
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def _neg(self, a):
        if self.d == 1:
            return (-a) % self.p
        p = self.p
        return tuple((-x) % p for x in a)

    def _mul(self, a, b):
        p = self.p
        if self.d == 1:
            return a * b % p
        d = self.d
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        red = self._red
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k] % p
            if c:
                base = k - d
                for i, r in enumerate(red):
                    prod[base + i] += c * r
        return tuple(c % p for c in prod[:d])

    def _pow(self, a, e):
        if self.d == 1:
            return pow(a, e, self.p)
        result = self._norm(1)
        base = a
        while e:
            if e & 1:
                result = self._mul(result, base)
            e >>= 1
            if e:
                base = self._mul(base, base)
        return result

    def _is_zero(self, a):
        if self.d == 1:
            return a == 0
        return not any(a)

    def _inv(self, a):
        if self._is_zero(a):
            raise DivisionByZero("inverse of zero")
        if self.d == 1:
            return pow(a, -1, self.p)
        return self._pow(a, self.q - 2)

    # -- element constructors -------------------------------------------------
    def __call__(self, value):
        if isinstance(value, FieldElement):
            if value.ctx is self:
                return value
            if value.ctx == self:
                return FieldElement(self, value.v)
            if value.ctx.d == 1 and value.ctx.p == self.p:
                return FieldElement(self, self._norm(value.v))
            return self.embed(value)
        return FieldElement(self, self._norm(value))

    def zero(self):
        return FieldElement(self, self._norm(0))

    def one(self):
        return FieldElement(self, self._norm(1))

    def parse(self, text):
        """Inverse of ``str(element)``: decimal coefficients, low degree first."""
        try:
            parts = [int(s) for s in str(text).split(",")]
        except ValueError as exc:
            raise SchemaError(f"bad field element {text!r}") from exc
        if len(parts) > self.d:
            raise SchemaError(f"field element {text!r} has too many coefficients")
        return FieldElement(self, self._norm(parts))

    def elements(self):
        """All field elements in lexicographic coefficient order."""
        if self.d == 1:
            for c in range(self.p):
                yield FieldElement(self, c)
            return
        for coeffs in itertools.product(range(self.p), repeat=self.d):
            yield FieldElement(self, tuple(coeffs))

    def random_element(self, rng=None, nonzero=False):
        rng = rng or random
        while True:
            if self.d == 1:
                v = rng.randrange(self.p)
            else:
                v = tuple(rng.randrange(self.p) for _ in range(self.d))
            if not nonzero or not self._is_zero(v):
                return FieldElement(self, v)

    # -- multiplicative structure ------------------------------------------------
    def generator(self):
        """Smallest generator of the multiplicative group."""
        if self._generator is None:
            q1 = self.q - 1
            exps = [q1 // r for r, _ in _factor(q1)]
            for x in self.elements():
                if x.is_zero():
                    continue
                if all(not FieldElement(self, self._pow(x.v, e)).is_one() for e in exps):
                    self._generator = x
                    break
        return self._generator

    def primitive_root_of_unity(self, m):
        m = int(m)
        if m < 1:
            raise ValueError("order must be positive")
        if (self.q - 1) % m:
            raise NoSuchRoot(f"no primitive {m}-th root of unity in F_{self.q}")
        root = self._roots.get(m)
        if root is None:
            root = self.generator() ** ((self.q - 1) // m)
            self._roots[m] = root
        return root

    def subfield_generator(self, sub):
        """Image of the class of x in ``sub`` under the embedding sub -> self.

        The embedding is fixed by taking the root of sub's modulus with the
        smallest coefficient tuple; the subfield is scanned directly, so this
        is meant for desk-sized subfields.
        """
        if sub.p != self.p or self.d % sub.d:
            raise ContextMismatch(f"F_{sub.q} is not a subfield of F_{self.q}")
        key = (sub.d, sub.modulus)
        got = self._embeddings.get(key)
        if got is None:
            beta = self.generator() ** ((self.q - 1) // (sub.q - 1))
            best, cur = None, self.one()
            for _ in range(sub.q - 1):
                val = self.zero()
                for c in reversed(sub.modulus):
                    val = val * cur + c
                if val.is_zero() and (best is None or cur.sort_key() < best.sort_key()):
                    best = cur
                cur = cur * beta
            got = self._embeddings[key] = best
        return got

    def embed(self, x):
        """Map an element of a subfield F_{p^e} (e | d) into this field."""
        sub = x.ctx
        if sub.d == 1:
            return self.embed_prime_field(x)
        root = self.subfield_generator(sub)
        acc = self.zero()
        for c in reversed(x.coeffs):
            acc = acc * root + c
        return acc

    def embed_prime_field(self, x):
        """Map an element of F_p into this field."""
        if x.ctx.d != 1 or x.ctx.p != self.p:
            raise ContextMismatch("source must be the prime field F_p")
        return self(x.v)


class FieldElement:
    __slots__ = ("ctx", "v")

    def __init__(self, ctx, v):
        self.ctx = ctx
        self.v = v

    # coefficient view
    @property
    def coeffs(self):
        if self.ctx.d == 1:
            return (self.v,)
        return self.v

    def sort_key(self):
        return self.coeffs

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.ctx is self.ctx:
                return other.v
            if other.ctx == self.ctx:
                return other.v
            raise ContextMismatch("operands live in different fields")
        if isinstance(other, int):
            return self.ctx._norm(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.ctx, self.ctx._add(self.v, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.ctx, self.ctx._sub(self.v, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.ctx, self.ctx._sub(o, self.v))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.ctx, self.ctx._mul(self.v, o))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx._neg(self.v))

    def inv(self):
        return FieldElement(self.ctx, self.ctx._inv(self.v))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.ctx, self.ctx._mul(self.v, self.ctx._inv(o)))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.ctx, self.ctx._mul(o, self.ctx._inv(self.v)))

    def __pow__(self, e):
        e = int(e)
        if e < 0:
            return FieldElement(self.ctx, self.ctx._pow(self.ctx._inv(self.v), -e))
        return FieldElement(self.ctx, self.ctx._pow(self.v, e))

    def is_zero(self):
        return self.ctx._is_zero(self.v)

    def is_one(self):
        return self.v == self.ctx._norm(1)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.v == other.v and (other.ctx is self.ctx or other.ctx == self.ctx)
        if isinstance(other, int):
            return self.v == self.ctx._norm(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.v)

    def __str__(self):
        return ",".join(str(c) for c in self.coeffs)

    def __repr__(self):
        return f"F{self.ctx.q}({self})"

    def __int__(self):
        if self.ctx.d != 1 and any(self.v[1:]):
            raise ValueError("element is not in the prime field")
        return self.coeffs[0]


def field_ops():
    """Names of the supported element operations (all exposed as operators)."""
    return ("add", "sub", "mul", "div", "pow", "inv", "neg")


def primitive_root_of_unity(ctx, m):
    return ctx.primitive_root_of_unity(m)


def _dlog_prime_power(ctx, a, b, r, s):
    """Discrete log of a in base b, where b has order r**s."""
    # digits brute-forced over the order-r subgroup, r is a small prime
    top = ctx._pow(b, r ** (s - 1))
    table = {}
    cur = ctx._norm(1)
    for dgt in range(r):
        table[cur] = dgt
        cur = ctx._mul(cur, top)
    e = 0
    binv = ctx._inv(b)
    for i in range(s):
        c = ctx._mul(a, ctx._pow(binv, e))
        c = ctx._pow(c, r ** (s - 1 - i))
        dgt = table.get(c)
        if dgt is None:
            raise NoRoot("element outside the cyclic subgroup")
        e += dgt * r**i
    return e


def kth_root(x, k):
    """Deterministic k-th root of x (the root with the smallest coefficient tuple)."""
    ctx = x.ctx
    k = int(k)
    if k < 1:
        raise ValueError("k must be positive")
    if x.is_zero():
        return ctx.zero()
    q1 = ctx.q - 1
    g = gcd(k, q1)
    if not (x ** (q1 // g)).is_one():
        raise NoRoot(f"{x} has no {k}-th root in F_{ctx.q}")
    primes = [(r, s) for r, s in _factor(q1) if k % r == 0]
    h = 1
    for r, s in primes:
        h *= r**s
    w = q1 // h
    # split into the part of order h (primes of k) and the part of order w
    u = w * pow(w, -1, h) % q1 if h > 1 else 0
    x_h = ctx._pow(x.v, u)
    x_w = ctx._pow(x.v, (1 - u) % q1)
    y_w = ctx._pow(x_w, pow(k, -1, w)) if w > 1 else ctx._norm(1)
    if h > 1:
        gamma_h = ctx._pow(ctx.generator().v, w)
        residues, moduli = [], []
        for r, s in primes:
            cof = h // r**s
            a = ctx._pow(x_h, cof)
            b = ctx._pow(gamma_h, cof)
            residues.append(_dlog_prime_power(ctx, a, b, r, s))
            moduli.append(r**s)
        e = int(sympy.ntheory.modular.crt(moduli, residues)[0]) % h
        g_h = gcd(k, h)
        if e % g_h:
            raise NoRoot(f"{x} has no {k}-th root in F_{ctx.q}")
        f = (e // g_h) * pow(k // g_h, -1, h // g_h) % (h // g_h)
        y_h = ctx._pow(gamma_h, f)
    else:
        y_h = ctx._norm(1)
    y = FieldElement(ctx, ctx._mul(y_h, y_w))
    if y**k != x:
        raise NoRoot(f"root extraction failed for {x}")
    zeta = ctx.primitive_root_of_unity(g)
    best = y
    cur = y
    for _ in range(g - 1):
        cur = cur * zeta
        if cur.sort_key() < best.sort_key():
            best = cur
    return best


def sqrt(x):
    """Deterministic square root; raises NoSqrt when x is a non-square."""
    from .errors import NoSqrt

    try:
        return kth_root(x, 2)
    except NoRoot as exc:
        raise NoSqrt(str(exc)) from exc


def is_kth_power(x, k):
    if x.is_zero():
        return True
    q1 = x.ctx.q - 1
    return (x ** (q1 // gcd(k, q1))).is_one()
