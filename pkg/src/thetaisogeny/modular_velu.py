"""Null points of l-isogenous varieties from a kernel, and the search helpers feeding them.

A lift T of an l-torsion point is *true* when, with l = 2h + 1,

    chain_mult(h + 1, T) = negate(chain_mult(h, T))

exactly.  Scaling T by mu multiplies the ratio of the two sides by mu**l, so a
true lift exists as soon as one l-th root is available and is unique up to an
l-th root of unity.  The blocks R_c of the level-(l n) null point are true
lifts of the kernel points, which is all the reconstruction needs.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _bulk
from .chain_arithmetic import chain_mult, kummer_add_pair, kummer_compatible_add, normal_add
from .errors import (
    BudgetExceeded,
    ContextMismatch,
    IsotropyViolation,
    MathFailure,
    NoRoot,
    NotSpanning,
    NotTorsion,
)
from .galois_field import FieldContext, kth_root
from .isogeny_eval import IsogenyData, all_coefficients, chain_fill, decompress_null, project, project_i
from .pairing import commutator_pairing, discrete_log
from .theta_core import (
    AffineThetaPoint,
    ThetaNullPoint,
    embed_point,
    negate,
    projective_eq,
    ratio,
    validate_null_point,
)

DEFAULT_BUDGET = 10**8


def _ell(ctx, ell):
    ell = ell or ctx.ell
    if ell is None:
        raise ContextMismatch("no ell given and none in the context")
    if ell % 2 == 0:
        raise ValueError("ell must be odd")
    return ell


def _threads():
    try:
        return max(1, int(os.environ.get("THETA_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# true lifts


def true_lift_defect(x, null, ell):
    """alpha with chain_mult(h + 1, x) = alpha * negate(chain_mult(h, x)), or None."""
    h = (ell - 1) // 2
    return ratio(negate(chain_mult(h, x, null)), chain_mult(h + 1, x, null))


@dataclass(frozen=True)
class TrueTorsionLift:
    point: AffineThetaPoint
    order: int

    def check(self, null):
        alpha = true_lift_defect(self.point, null, self.order)
        return alpha is not None and alpha.is_one()


def is_true_lift(x, null, ell=None):
    return TrueTorsionLift(x, _ell(x.ctx, ell)).check(null)


def true_lift(T, null, ell=None, root=None):
    """Rescale any lift of T into a true lift.

    ``root`` pins the scalar mu (it must satisfy mu**ell * alpha = 1);
    otherwise the deterministic ell-th root of 1/alpha is used.
    Returns (TrueTorsionLift, mu).
    """
    ell = _ell(T.ctx, ell)
    if not projective_eq(chain_mult(ell, T, null), null)[0]:
        raise NotTorsion("point is not killed by ell")
    alpha = true_lift_defect(T, null, ell)
    if alpha is None:
        raise NotTorsion("the two half multiples are not proportional")
    if root is None:
        mu = kth_root(alpha.inv(), ell)
    else:
        mu = T.ctx.field(root)
        if not (mu**ell * alpha).is_one():
            raise NoRoot(f"{mu} is not an {ell}-th root of {alpha.inv()}")
    return TrueTorsionLift(T.scale(mu).as_point(), ell), mu


def extension_context(ctx, degree):
    """The context over F_{p^(d*degree)}; the roots of unity are carried over."""
    base = ctx.field
    return ctx.with_field(FieldContext(base.p, base.d * degree))


# ---------------------------------------------------------------------------
# kernels


def sum_choices(points, null):
    """Lifts of points[i] + points[j] for i < j.

    Normal addition at level >= 4.  At level 2 one square root fixes
    points[0] + points[1] and everything else follows by compatible additions.
    """
    k = len(points)
    sums = {}
    if not points or null.level != 2:
        for i in range(k):
            for j in range(i + 1, k):
                sums[(i, j)] = normal_add(points[i], points[j], null)
        return sums
    for j in range(1, k):
        sums[(0, j)] = kummer_add_pair(points[0], points[j], null).first
    for i in range(1, k):
        for j in range(i + 1, k):
            sums[(i, j)] = kummer_compatible_add(
                points[i], points[0], points[j], sums[(0, i)], sums[(0, j)], null
            )
    return sums


@dataclass
class KernelSpec:
    """Generators T_1..T_g of the kernel and chosen lifts of T_i + T_j (i < j)."""

    basis: list
    pair_sums: dict = field(default_factory=dict)

    @classmethod
    def from_basis(cls, basis, null):
        return cls(list(basis), sum_choices(list(basis), null))

    def check(self, null, ell=None):
        ell = _ell(null.ctx, ell)
        for T in self.basis:
            if projective_eq(T, null)[0] or not projective_eq(chain_mult(ell, T, null), null)[0]:
                raise NotTorsion("kernel generator does not have order ell")
        for (i, j), s in self.pair_sums.items():
            value = commutator_pairing(self.basis[i], self.basis[j], s, null, ell).value
            if not value.is_one():
                raise IsotropyViolation(f"generators {i} and {j} pair to {value}")
        return True


@dataclass
class VeluResult:
    null_A: ThetaNullPoint
    lifts: dict
    root_choices: list
    ctx: object

    def isogeny_data(self, check=True):
        return IsogenyData(self.null_A, check=check)


def _unit(g, i):
    return tuple(1 if k == i else 0 for k in range(g))


def velu_reconstruct(K, null_B, roots=None, ctx=None, check=True):
    """The level-(ell n) null point whose kernel is K.

    ``ctx`` may name an extension (see ``extension_context``) holding the ell-th
    roots; every input is read in it.  ``roots`` pins the g(g+1)/2 rescaling
    scalars, in chain-basis order (d_1..d_g, then d_i + d_j).
    """
    ctx = ctx or null_B.ctx
    g = ctx.g
    ell = _ell(ctx, None)
    if len(K.basis) != g:
        raise ValueError(f"a kernel basis has {g} points")
    null_B = embed_point(null_B, ctx)
    basis = [embed_point(T, ctx) for T in K.basis]
    sums = {key: embed_point(s, ctx) for key, s in K.pair_sums.items()}
    if check:
        KernelSpec(basis, sums).check(null_B, ell)
    targets = [(_unit(g, i), basis[i]) for i in range(g)]
    for i in range(g):
        for j in range(i + 1, g):
            if (i, j) not in sums:
                raise ValueError(f"missing the sum of generators {i} and {j}")
            c = tuple(a + b for a, b in zip(_unit(g, i), _unit(g, j)))
            targets.append((c, sums[(i, j)]))
    if roots is not None and len(roots) != len(targets):
        raise ValueError(f"expected {len(targets)} root choices")
    lifts, chosen = {}, []
    for k, (c, T) in enumerate(targets):
        lift, mu = true_lift(T, null_B, ell, None if roots is None else roots[k])
        lifts[c] = lift.point
        chosen.append(mu)
    null_A = decompress_null(lifts, null_B, ctx)
    if check:
        report = validate_null_point(null_A)
        if not report.ok:
            raise IsotropyViolation(f"reconstructed null point fails validation: {report.violations[:1]}")
    return VeluResult(null_A, lifts, chosen, ctx)


def modular_phi(null_A):
    """(b, c): b subsamples the level-n part, c_i sums the ell translates of block i."""
    ctx = null_A.ctx
    b = project(null_A)
    blocks = [project_i(null_A, c) for c in all_coefficients(ctx)]
    coords = list(blocks[0].coords)
    for blk in blocks[1:]:
        coords = [u + v for u, v in zip(coords, blk.coords)]
    return (
        ThetaNullPoint.from_point(b),
        ThetaNullPoint._raw(ctx, ctx.n, coords),
    )


# ---------------------------------------------------------------------------
# every modular point above 0_B


def _rank_mod(rows, ell):
    rows = [list(r) for r in rows]
    rank, col = 0, 0
    width = len(rows[0]) if rows else 0
    while rank < len(rows) and col < width:
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] % ell), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, ell)
        rows[rank] = [v * inv % ell for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] % ell:
                f = rows[r][col]
                rows[r] = [(a - f * b) % ell for a, b in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def _form(E, u, v, ell):
    return sum(u[a] * E[a][b] * v[b] for a in range(len(u)) for b in range(len(v))) % ell


def symplectic_basis(E, ell):
    """Rows e_1..e_g, f_1..f_g (coefficient vectors) with <e_i, f_i> = 1 and all else 0."""
    m = len(E)
    rest = [tuple(1 if k == i else 0 for k in range(m)) for i in range(m)]
    es, fs = [], []
    while rest:
        e = rest.pop(0)
        k = next((k for k, v in enumerate(rest) if _form(E, e, v, ell)), None)
        if k is None:
            raise NotSpanning("the pairing is degenerate on the given points")
        f = rest.pop(k)
        inv = pow(_form(E, e, f, ell), -1, ell)
        f = tuple(v * inv % ell for v in f)
        reduced = []
        for v in rest:
            a, b = _form(E, v, f, ell), _form(E, e, v, ell)
            # v - <v, f> e - <e, v> f is orthogonal to e and f
            reduced.append(tuple((x - a * y - b * z) % ell for x, y, z in zip(v, e, f)))
        rest = reduced
        es.append(e)
        fs.append(f)
    return es + fs


def lagrangian_subspaces(g, ell):
    """Maximal isotropic subspaces of F_ell^(2g) with the standard form, as RREF rows."""
    m = 2 * g
    J = [[0] * m for _ in range(m)]
    for i in range(g):
        J[i][g + i] = 1
        J[g + i][i] = ell - 1
    out = []
    for pivots in itertools.combinations(range(m), g):
        free = [(r, c) for r in range(g) for c in range(pivots[r] + 1, m) if c not in pivots]
        for vals in itertools.product(range(ell), repeat=len(free)):
            rows = [[0] * m for _ in range(g)]
            for r, c in enumerate(pivots):
                rows[r][c] = 1
            for (r, c), v in zip(free, vals):
                rows[r][c] = v
            if all(_form(J, rows[a], rows[b], ell) == 0 for a in range(g) for b in range(a + 1, g)):
                out.append([tuple(r) for r in rows])
    return out


@dataclass
class TorsionClosure:
    """True lifts of every combination sum a_k P_k of a basis of B[ell]."""

    basis: list
    lifts: dict
    exponents: list
    symplectic: list

    def lift(self, coeffs):
        ell = self.basis[0].ctx.ell
        return self.lifts[tuple(int(c) % ell for c in coeffs)]


def torsion_closure(torsion_basis, null_B, ctx=None):
    """Pairings, symplectic basis and true lifts of all ell^(2g) torsion points."""
    ctx = ctx or null_B.ctx
    g = ctx.g
    ell = _ell(ctx, None)
    if len(torsion_basis) != 2 * g:
        raise NotSpanning(f"B[ell] needs {2 * g} generators")
    null_B = embed_point(null_B, ctx)
    basis = [embed_point(P, ctx) for P in torsion_basis]
    for P in basis:
        if projective_eq(P, null_B)[0] or not projective_eq(chain_mult(ell, P, null_B), null_B)[0]:
            raise NotSpanning("basis point does not have order ell")
    sums = sum_choices(basis, null_B)
    m = 2 * g
    E = [[0] * m for _ in range(m)]
    zeta = ctx.zeta_ell
    for (i, j), s in sums.items():
        v = commutator_pairing(basis[i], basis[j], s, null_B, ell).value
        E[i][j] = discrete_log(v, zeta, ell)
        E[j][i] = (-E[i][j]) % ell
    if _rank_mod(E, ell) < m:
        raise NotSpanning("the points do not span B[ell]")
    symp = symplectic_basis(E, ell)
    known = {(0,) * m: null_B.as_point()}
    for i in range(m):
        known[_unit(m, i)] = true_lift(basis[i], null_B, ell)[0].point
    for (i, j), s in sums.items():
        c = tuple(a + b for a, b in zip(_unit(m, i), _unit(m, j)))
        known[c] = true_lift(s, null_B, ell)[0].point
    chain_fill(known, known.get, null_B, ell, m)
    return TorsionClosure(basis, known, E, symp), null_B


def _combine(rows, coeffs, ell):
    out = [0] * len(rows[0])
    for c, r in zip(coeffs, rows):
        out = [(a + c * b) % ell for a, b in zip(out, r)]
    return tuple(out)


def all_modular_points(torsion_basis, null_B, ctx=None, closure=None):
    """One level-(ell n) null point per maximal isotropic subgroup of B[ell].

    Subgroups come out in RREF order with respect to the symplectic basis of
    the pairing.  Returns a list of (kernel coefficient rows, ThetaNullPoint).
    """
    ctx = ctx or null_B.ctx
    g, ell = ctx.g, _ell(ctx, None)
    if closure is None:
        closure, null_B = torsion_closure(torsion_basis, null_B, ctx)
    else:
        null_B = embed_point(null_B, ctx)
    symp = closure.symplectic
    out = []
    for rows in lagrangian_subspaces(g, ell):
        gens = [_combine(symp, r, ell) for r in rows]
        lifts = {_unit(g, i): closure.lifts[gens[i]] for i in range(g)}
        for i in range(g):
            for j in range(i + 1, g):
                c = tuple(a + b for a, b in zip(_unit(g, i), _unit(g, j)))
                lifts[c] = closure.lifts[tuple((a + b) % ell for a, b in zip(gens[i], gens[j]))]
        out.append((gens, decompress_null(lifts, null_B, ctx)))
    return out


# ---------------------------------------------------------------------------
# exhaustive searches


def _candidate_count(field, size):
    return _bulk.projective_count(field.q, size)


def _scan(chunks, test, threads):
    if threads <= 1:
        found = []
        for pts in chunks:
            found.extend(test(pts))
        return found
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return [x for part in pool.map(test, chunks) for x in part]


def _columns(bulk, pts, mask):
    out = []
    for k in np.nonzero(mask)[0]:
        out.append([bulk.to_element(pts[u][:, k]) for u in range(pts.shape[0])])
    return out


def variety_points(null, budget=DEFAULT_BUDGET, chunk=1 << 20, threads=None):
    """All projective points of the variety (or Kummer variety at level 2) of null."""
    ctx = null.ctx
    size = len(null.coords)
    total = _candidate_count(ctx.field, size)
    if total > budget:
        raise BudgetExceeded(f"{total} candidates exceed the budget of {budget}")
    bulk = _bulk.BulkField(ctx.field)
    if null.level == 2:
        test = lambda pts: _columns(bulk, pts, _bulk.kummer_mask(bulk, null, pts))  # noqa: E731
    else:
        quadrics = _bulk.quadric_basis(null)
        test = lambda pts: _columns(bulk, pts, _bulk.variety_mask(bulk, quadrics, pts))  # noqa: E731
    rows = _scan(_bulk.projective_chunks(bulk, size, chunk), test, threads or _threads())
    points = [AffineThetaPoint._raw(ctx, null.level, r) for r in rows]
    points.sort(key=_point_key)
    return points


def _point_key(x):
    return tuple(c.sort_key() for c in x.coords)


def brute_torsion_search(null, ell=None, budget=DEFAULT_BUDGET, chunk=1 << 20, threads=None):
    """Every projective point x of the variety with ell x = 0, normalized and sorted."""
    ell = _ell(null.ctx, ell)
    out = []
    for x in variety_points(null, budget, chunk, threads):
        try:
            if projective_eq(chain_mult(ell, x, null), null)[0]:
                out.append(x)
        except MathFailure:
            continue
    return out


def brute_null_points(ctx, level, budget=DEFAULT_BUDGET, nondegenerate=True, chunk=1 << 20):
    """Symmetric vectors satisfying every Riemann relation, as validated null points."""
    g = ctx.g
    reps = len(set(min(u, v) for u, v in _neg_pairs(g, level)))
    total = _candidate_count(ctx.field, reps)
    if total > budget:
        raise BudgetExceeded(f"{total} candidates exceed the budget of {budget}")
    bulk = _bulk.BulkField(ctx.field)
    tuples = _bulk.distinct_null_tuples(g, level)
    out = []
    for pts in _bulk.symmetric_chunks(bulk, g, level, chunk):
        mask = _bulk.null_relation_mask(bulk, g, level, pts, tuples)
        for coords in _columns(bulk, pts, mask):
            null = ThetaNullPoint(ctx, level, coords)
            report = validate_null_point(null)
            if not report.ok or (nondegenerate and report.suspect):
                continue
            out.append(null)
    out.sort(key=_point_key)
    return out


def _neg_pairs(g, level):
    from .index_space import level_tables

    _, _, neg = level_tables(g, level)
    return [(u, neg[u]) for u in range(len(neg))]


__all__ = [
    "TrueTorsionLift",
    "KernelSpec",
    "VeluResult",
    "TorsionClosure",
    "true_lift",
    "true_lift_defect",
    "is_true_lift",
    "extension_context",
    "sum_choices",
    "velu_reconstruct",
    "modular_phi",
    "symplectic_basis",
    "lagrangian_subspaces",
    "torsion_closure",
    "all_modular_points",
    "variety_points",
    "brute_torsion_search",
    "brute_null_points",
]
