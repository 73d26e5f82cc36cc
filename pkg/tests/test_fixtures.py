"""Re-derive the frozen instances from scratch."""

import pytest

from fixtures import (
    DEGENERATE_PRIME_COUNTS,
    NULL_COUNTS,
    TORSION3,
    TORSION_G2,
    ell3,
    ell5,
    genus2,
    level4_nulls,
)
from thetaisogeny.chain_arithmetic import chain_mult
from thetaisogeny.galois_field import FieldContext
from thetaisogeny.index_space import ThetaContext
from thetaisogeny.modular_velu import brute_null_points, brute_torsion_search
from thetaisogeny.theta_core import projective_eq, validate_null_point, validate_on_variety


def coords(points):
    return sorted([str(c) for c in x.coords] for x in points)


@pytest.mark.parametrize("key", sorted(NULL_COUNTS))
def test_null_counts(key):
    ctx, nulls = level4_nulls(*key)
    assert len(nulls) == NULL_COUNTS[key]
    assert all(validate_null_point(n).ok for n in nulls)


@pytest.mark.parametrize("p", sorted(DEGENERATE_PRIME_COUNTS))
def test_prime_field_nulls_are_degenerate(p):
    ctx = ThetaContext(FieldContext(p), 1, 4)
    assert brute_null_points(ctx, 4) == []
    assert len(brute_null_points(ctx, 4, nondegenerate=False)) == DEGENERATE_PRIME_COUNTS[p]


def test_torsion3_matches_search():
    _, null, tors = ell3()
    assert validate_null_point(null).ok
    assert coords(brute_torsion_search(null, 3, budget=10**10)) == coords(tors)
    assert len(TORSION3) == 9


def test_torsion5_is_full_torsion():
    # 25 distinct 5-torsion points is already all of E[5]
    _, null, tors = ell5()
    assert validate_null_point(null).ok
    assert len({tuple(str(c) for c in x.coords) for x in tors}) == 25
    for x in tors:
        assert validate_on_variety(x, null)
        assert projective_eq(chain_mult(5, x, null), null)[0]


def test_genus2_torsion_matches_search():
    _, null, tors = genus2()
    report = validate_null_point(null)
    assert report.ok and not report.suspect
    assert coords(brute_torsion_search(null, 3)) == coords(tors)
    # a rank-2 subgroup of 9 points, identified up to sign
    assert len(TORSION_G2) == (9 + 1) // 2
