"""Frozen instances used across the suite.

Everything here was produced by exhaustive search (see discover_fixtures.py)
and is re-verified by tests/test_fixtures.py where feasible.
"""

from functools import lru_cache

from thetaisogeny.galois_field import FieldContext
from thetaisogeny.index_space import ThetaContext
from thetaisogeny.modular_velu import extension_context
from thetaisogeny.theta_core import AffineThetaPoint, ThetaNullPoint

# number of non-degenerate level-4 null points (a0 = 1) of elliptic curves
NULL_COUNTS = {(13, 2): 128, (17, 2): 368}
# every symmetric solution over the prime field is degenerate
DEGENERATE_PRIME_COUNTS = {13: 8, 17: 12}

# g = 1, n = 4, ell = 3: #E = 288 with E[3] rational
P3 = 277
NULL3 = [1, 1, 23, 1]
TORSION3 = [
    [1, 1, 23, 1],
    [1, 28, 147, 61],
    [1, 40, 151, 53],
    [1, 53, 151, 40],
    [1, 61, 147, 28],
    [1, 85, 261, 258],
    [1, 133, 226, 175],
    [1, 175, 226, 133],
    [1, 258, 261, 85],
]

# g = 1, n = 4, ell = 5: #E = 800 with E[5] rational
P5 = 821
NULL5 = [1, 20, 20, 20]
TORSION5 = [
    [1, 3, 637, 29],
    [1, 20, 20, 20],
    [1, 21, 536, 775],
    [1, 29, 637, 3],
    [1, 33, 119, 109],
    [1, 38, 622, 133],
    [1, 109, 119, 33],
    [1, 112, 134, 558],
    [1, 133, 622, 38],
    [1, 166, 375, 562],
    [1, 171, 427, 616],
    [1, 257, 737, 544],
    [1, 331, 174, 599],
    [1, 342, 13, 770],
    [1, 467, 120, 471],
    [1, 471, 120, 467],
    [1, 474, 251, 509],
    [1, 509, 251, 474],
    [1, 544, 737, 257],
    [1, 558, 134, 112],
    [1, 562, 375, 166],
    [1, 599, 174, 331],
    [1, 616, 427, 171],
    [1, 770, 13, 342],
    [1, 775, 536, 21],
]

# g = 2, n = 2, ell = 3 over F_{7^2}: the first Kummer surface (in the order
# of discover_fixtures.py) whose rational 3-torsion is a Lagrangian subgroup
# (9 points, 5 classes up to sign)
P_G2, D_G2 = 7, 2
NULL_G2 = ["1", "1", "1", "3"]
TORSION_G2 = [
    ["1", "1", "1", "3"],
    ["1", "1", "1", "4,3"],
    ["1", "1", "1", "4,4"],
    ["1", "2", "4", "0"],
    ["1", "4", "2", "0"],
]


@lru_cache(maxsize=None)
def ell3():
    F = FieldContext(P3)
    ctx = ThetaContext(F, 1, 4, 3)
    null = ThetaNullPoint(ctx, 4, NULL3)
    tors = [AffineThetaPoint(ctx, 4, c) for c in TORSION3]
    return ctx, null, tors


@lru_cache(maxsize=None)
def ell3_extension():
    return extension_context(ell3()[0], 3)


@lru_cache(maxsize=None)
def ell5():
    F = FieldContext(P5)
    ctx = ThetaContext(F, 1, 4, 5)
    null = ThetaNullPoint(ctx, 4, NULL5)
    tors = [AffineThetaPoint(ctx, 4, c) for c in TORSION5]
    return ctx, null, tors


@lru_cache(maxsize=None)
def genus2():
    F = FieldContext(P_G2, D_G2)
    ctx = ThetaContext(F, 2, 2, 3)
    null = ThetaNullPoint(ctx, 2, [F.parse(c) for c in NULL_G2])
    tors = [AffineThetaPoint(ctx, 2, [F.parse(c) for c in pt]) for pt in TORSION_G2]
    return ctx, null, tors


@lru_cache(maxsize=None)
def genus2_extension():
    return extension_context(genus2()[0], 3)


@lru_cache(maxsize=None)
def level4_nulls(p, d):
    from thetaisogeny.modular_velu import brute_null_points

    F = FieldContext(p, d)
    ctx = ThetaContext(F, 1, 4)
    return ctx, brute_null_points(ctx, 4)


@lru_cache(maxsize=None)
def curve169():
    """The first level-4 null point over F_{13^2} and every point of its curve."""
    from thetaisogeny.modular_velu import variety_points

    ctx, nulls = level4_nulls(13, 2)
    return ctx, nulls[0], variety_points(nulls[0])


@lru_cache(maxsize=None)
def ell3_points():
    """Every rational point of the p = 277 curve (288 of them)."""
    from thetaisogeny.modular_velu import variety_points

    return variety_points(ell3()[1])


@lru_cache(maxsize=None)
def ell3_isogeny():
    """Velu reconstruction over F_{277^3} with kernel generated by TORSION3[1]."""
    from thetaisogeny.modular_velu import KernelSpec, velu_reconstruct

    _, null, tors = ell3()
    big = ell3_extension()
    res = velu_reconstruct(KernelSpec.from_basis([tors[1]], null), null, ctx=big)
    return big, res, res.isogeny_data()


@lru_cache(maxsize=None)
def genus2_points():
    """Every point of the F_{7^2} Kummer surface, up to sign."""
    from thetaisogeny.modular_velu import variety_points

    return variety_points(genus2()[1])


@lru_cache(maxsize=None)
def genus2_isogeny():
    """Velu reconstruction over F_{7^6} with kernel the rational 3-torsion."""
    from thetaisogeny.modular_velu import KernelSpec, velu_reconstruct

    _, null, tors = genus2()
    res = velu_reconstruct(KernelSpec.from_basis([tors[1], tors[3]], null), null, ctx=genus2_extension())
    return genus2_extension(), res, res.isogeny_data()
