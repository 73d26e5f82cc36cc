"""Projections attached to a level-(ell n) null point, point compression and the dual isogeny.

Indices of Z(ell n) are written n*c + ell*j with c in Z(ell)^g (the "ell part",
a coefficient vector) and j in Z(n)^g.  ``project_i(x, c)`` is the level-n
block (x_{n c + ell j})_j and ``R[c] = project_i(0_A, c)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .chain_arithmetic import (
    chain_add,
    chain_multadd,
    kummer_add_pair,
    kummer_compatible_add,
    normal_add,
)
from .errors import (
    ContextMismatch,
    DegenerateData,
    GenericityViolation,
    InconsistentBlocks,
    SchemaError,
    ScalarExtractionFailure,
)
from .index_space import IndexVector, chain_basis_coefficients, flat_index
from .theta_core import AffineThetaPoint, ThetaNullPoint, projective_eq, ratio

COMPRESSED_FORMAT = "theta-compressed/1"


def _coefficients(ctx, i):
    """Accept a coefficient vector of Z(ell)^g or an embedded index n*c of Z(ell n)^g."""
    ell, n = ctx.ell, ctx.n
    if isinstance(i, IndexVector):
        if i.modulus == ell:
            return i.entries
        if i.modulus == ell * n:
            if any(e % n for e in i.entries):
                raise ValueError(f"{i} is not in n * Z(ell)")
            return tuple(e // n for e in i.entries)
        raise ValueError("index must live in Z(ell) or Z(ell n)")
    return tuple(int(e) % ell for e in i)


def block_indices(ctx, c):
    """Flat level-(ell n) indices n*c + ell*j, j running over Z(n)^g in lex order."""
    ell, n, g = ctx.ell, ctx.n, ctx.g
    top = ell * n
    out = []
    for j in itertools.product(range(n), repeat=g):
        out.append(flat_index([n * a + ell * b for a, b in zip(c, j)], top))
    return out


def project(x):
    """Subsample at the embedded Z(n): result_j = x_{ell j}."""
    ctx = x.ctx
    if x.level != ctx.ln:
        raise ContextMismatch("project expects a level ell*n point")
    idx = block_indices(ctx, (0,) * ctx.g)
    return AffineThetaPoint._raw(ctx, ctx.n, [x.coords[k] for k in idx])


def project_i(x, i):
    ctx = x.ctx
    if x.level != ctx.ln:
        raise ContextMismatch("project_i expects a level ell*n point")
    c = _coefficients(ctx, i)
    idx = block_indices(ctx, c)
    return AffineThetaPoint._raw(ctx, ctx.n, [x.coords[k] for k in idx])


def all_coefficients(ctx):
    return list(itertools.product(range(ctx.ell), repeat=ctx.g))


def _sub(a, b, ell):
    return tuple((x - y) % ell for x, y in zip(a, b))


def _add(a, b, ell):
    return tuple((x + y) % ell for x, y in zip(a, b))


def chain_fill(known, step_point, null, ell, g, limit=None):
    """Complete a family indexed by Z(ell)^g from a chain basis.

    ``known[c]`` holds the block for c; a missing c is obtained as
    chain_add(known[c - s], step_point(s), known[c - 2s]) for the first step s
    (lex order) where both are known and ``step_point(s)`` is available.
    Returns the number of chain additions performed.
    """
    targets = list(itertools.product(range(ell), repeat=g))
    steps = [s for s in targets if any(s)]
    count = 0
    progress = True
    while progress and len(known) < len(targets):
        progress = False
        for t in targets:
            if t in known:
                continue
            for s in steps:
                a, b = _sub(t, s, ell), _sub(t, _add(s, s, ell), ell)
                if a in known and b in known:
                    step = step_point(s)
                    if step is None:
                        continue
                    known[t] = chain_add(known[a], step, known[b], null)
                    count += 1
                    progress = True
                    break
    if len(known) < len(targets):
        raise DegenerateData("chain basis does not generate Z(ell)^g")
    return count


def assemble(ctx, blocks):
    """Level-(ell n) coordinates from the blocks of every c in Z(ell)^g."""
    size = ctx.ln**ctx.g
    coords = [None] * size
    for c, block in blocks.items():
        for k, v in zip(block_indices(ctx, c), block.coords):
            if coords[k] is not None and coords[k] != v:
                raise InconsistentBlocks(f"index {k} receives two values")
            coords[k] = v
    if any(v is None for v in coords):
        raise InconsistentBlocks("some coordinates were never assigned")
    return coords


# ---------------------------------------------------------------------------


class IsogenyData:
    """The pair of null points (0_A at level ell n, 0_B at level n) and the R lifts."""

    def __init__(self, null_A, null_B=None, check=True):
        ctx = null_A.ctx
        if ctx.ell is None:
            raise ContextMismatch("isogeny data needs a context with ell")
        if null_A.level != ctx.ln:
            raise ContextMismatch("null_A must have level ell*n")
        self.ctx = ctx
        self.null_A = ThetaNullPoint.from_point(null_A, getattr(null_A, "valid", None))
        projected = project(null_A)
        if null_B is None:
            null_B = projected
        elif null_B.coords != projected.coords:
            raise InconsistentBlocks("null_B is not the subsample of null_A")
        self.null_B = ThetaNullPoint.from_point(null_B, getattr(null_B, "valid", None))
        self.R = {c: project_i(null_A, c) for c in all_coefficients(ctx)}
        if check:
            self.check()

    def check(self):
        ell = self.ctx.ell
        zero = (0,) * self.ctx.g
        if self.R[zero].coords != self.null_B.coords:
            raise InconsistentBlocks("R_0 differs from 0_B")
        for i in self.R:
            for j in self.R:
                got = chain_add(self.R[i], self.R[j], self.R[_sub(i, j, ell)], self.null_B)
                if got.coords != self.R[_add(i, j, ell)].coords:
                    raise InconsistentBlocks(f"R_{i}+R_{j} breaks the chain relation")
        return True

    def basis(self):
        return chain_basis_coefficients(self.ctx.g)


@dataclass
class CompressedPoint:
    basis: list
    blocks: list

    def block(self, c):
        return self.blocks[self.basis.index(tuple(c))]

    def size(self):
        return sum(len(b.coords) for b in self.blocks)

    def to_json(self, ctx):
        n = ctx.n
        return {
            "format": COMPRESSED_FORMAT,
            "basis": [str(IndexVector([n * e for e in c], ctx.ln)) for c in self.basis],
            "blocks": [b.to_json() for b in self.blocks],
        }

    @classmethod
    def from_json(cls, ctx, data):
        try:
            if data.get("format", COMPRESSED_FORMAT) != COMPRESSED_FORMAT:
                raise SchemaError("unknown compressed-point format")
            basis = [_coefficients(ctx, IndexVector.parse(s, ctx.ln)) for s in data["basis"]]
            blocks = [AffineThetaPoint.from_json(ctx, b) for b in data["blocks"]]
        except (KeyError, TypeError, AttributeError, ValueError) as exc:
            if isinstance(exc, SchemaError):
                raise
            raise SchemaError(f"bad compressed point: {exc}") from exc
        if len(basis) != len(blocks):
            raise SchemaError("basis and blocks differ in length")
        return cls(basis, blocks)


def compress(x):
    basis = chain_basis_coefficients(x.ctx.g)
    return CompressedPoint(list(basis), [project_i(x, c) for c in basis])


def decompress(C, iso, verify=True):
    """Rebuild the level-(ell n) point from its chain-basis blocks."""
    ctx = iso.ctx
    known = dict(zip(C.basis, C.blocks))
    given = dict(known)
    chain_fill(known, lambda s: iso.R[s], iso.null_B, ctx.ell, ctx.g)
    if verify:
        _cross_check(known, given, iso.R.get, iso.null_B, ctx.ell)
    return AffineThetaPoint._raw(ctx, ctx.ln, assemble(ctx, known))


def compressed_chain_add(X, Y, D, iso):
    """Compressed x + y from compressed x, y and x - y, without decompressing.

    Block c of x + y is chain_add(block_c(x), block_0(y), block_c(x - y)) over 0_B.
    """
    if X.basis != Y.basis or X.basis != D.basis:
        raise ContextMismatch("compressed points use different bases")
    y0 = Y.blocks[X.basis.index((0,) * iso.ctx.g)]
    blocks = [chain_add(xb, y0, db, iso.null_B) for xb, db in zip(X.blocks, D.blocks)]
    return CompressedPoint(list(X.basis), blocks)


def _cross_check(known, given, step_point, null, ell):
    # a supplied two-term block must also follow from the others
    for c, block in given.items():
        if sum(1 for e in c if e) < 2:
            continue
        for k in range(len(c)):
            if not c[k]:
                continue
            s = tuple(1 if m == k else 0 for m in range(len(c)))
            a, b = _sub(c, s, ell), _sub(c, _add(s, s, ell), ell)
            step = step_point(s)
            if step is None or c in (a, b):
                continue
            got = chain_add(known[a], step, known[b], null)
            if got.coords != block.coords:
                raise InconsistentBlocks(f"block {c} does not match its neighbours")
            break


def decompress_null(compressed_R, null_B, ctx):
    """Full level-(ell n) null point from R_0 = 0_B, R_{d_i} and R_{d_i + d_j}."""
    known = dict(compressed_R)
    known[(0,) * ctx.g] = null_B
    chain_fill(known, known.get, null_B, ctx.ell, ctx.g)
    coords = assemble(ctx, known)
    return ThetaNullPoint._raw(ctx, ctx.ln, coords)


# ---------------------------------------------------------------------------
# dual isogeny and kernel


def _sum_lifts(y, iso, basis):
    """Lifts of y + R_c for c in the basis."""
    out = {}
    zero = (0,) * iso.ctx.g
    if iso.ctx.n >= 4:
        for c in basis:
            out[c] = y if c == zero else normal_add(y, iso.R[c], iso.null_B)
        return out
    first = next(c for c in basis if any(c))
    pair = kummer_add_pair(y, iso.R[first], iso.null_B)
    out[zero] = y
    out[first] = pair.first
    ell = iso.ctx.ell
    for c in basis:
        if c in out:
            continue
        # y + R_c from y + R_k and R_k + R_c, trying every pivot k already known
        error = None
        for k in [first] + [k for k in out if any(k) and k != first]:
            try:
                out[c] = kummer_compatible_add(y, iso.R[k], iso.R[c], out[k], iso.R[_add(k, c, ell)], iso.null_B)
                break
            except GenericityViolation as exc:
                error = exc
        else:
            shifted = _kernel_shift(y, out[first], first, iso)
            if shifted is None:
                raise error
            out[c] = iso.R[_add(shifted, c, ell)]
    return out


def _kernel_shift(y, y_first, first, iso):
    """k with y = R_k and y + R_first = R_(k + first) on the Kummer variety, or None.

    For kernel points every compatible addition is ambiguous, but then the sums
    are themselves R's.
    """
    ell = iso.ctx.ell
    for k, R in iso.R.items():
        if projective_eq(R, y)[0] and projective_eq(iso.R[_add(k, first, ell)], y_first)[0]:
            return k
    return None


def scalar_between(reference, candidate):
    """lam with reference = lam * candidate; ScalarExtractionFailure otherwise."""
    lam = ratio(candidate, reference)
    if lam is None:
        raise ScalarExtractionFailure("points are not proportional")
    return lam


def isogeny_image(y, iso, lifts=None):
    """Compressed coordinates of the dual isogeny applied to y."""
    ctx = iso.ctx
    basis = list(chain_basis_coefficients(ctx.g))
    lifts = lifts or _sum_lifts(y, iso, basis)
    blocks = []
    for c in basis:
        yc = lifts[c]
        back = chain_multadd(ctx.ell, yc, iso.R[c], y, iso.null_B)
        lam = scalar_between(y, back)
        blocks.append(chain_multadd(ctx.ell, yc, y, iso.R[c], iso.null_B).scale(lam))
    return CompressedPoint(basis, blocks)


def kernel_ratios(y, iso, lifts=None):
    """alpha_i / beta_i for the kernel basis, corrected by the ell-multiple scalars."""
    from .chain_arithmetic import chain_mult

    ctx = iso.ctx
    basis = list(chain_basis_coefficients(ctx.g))
    units = [c for c in basis if sum(1 for e in c if e) == 1]
    lifts = lifts or _sum_lifts(y, iso, units + [(0,) * ctx.g])
    lam_y = scalar_between(chain_mult(ctx.ell, y, iso.null_B), iso.null_B)
    out = []
    for c in units:
        yc = lifts[c]
        alpha = scalar_between(chain_multadd(ctx.ell, yc, y, iso.R[c], iso.null_B), iso.R[c])
        beta = scalar_between(chain_multadd(ctx.ell, yc, iso.R[c], y, iso.null_B), y)
        lam_r = scalar_between(chain_mult(ctx.ell, iso.R[c], iso.null_B), iso.null_B)
        out.append(alpha * lam_r / (beta * lam_y))
    return out


def kernel_contains(y, iso):
    return all(r.is_one() for r in kernel_ratios(y, iso))


def image_is_zero(y, iso):
    """True iff the dual isogeny sends y to 0_A."""
    image = decompress(isogeny_image(y, iso), iso)
    return projective_eq(iso.null_A, image)[0]
