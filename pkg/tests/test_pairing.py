import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixtures import ell3, ell3_isogeny, ell5, genus2
from thetaisogeny.chain_arithmetic import normal_add
from thetaisogeny.errors import ScalarExtractionFailure
from thetaisogeny.galois_field import FieldContext
from thetaisogeny.index_space import ThetaContext
from thetaisogeny.isogeny_eval import kernel_ratios
from thetaisogeny.pairing import (
    PairingValue,
    commutator_pairing,
    discrete_log,
    kummer_symmetric_pairing,
    pairing_matrix,
)
from thetaisogeny.theta_core import AffineThetaPoint, ThetaNullPoint, embed_point, negate


def combinations(P, Q, null, ell):
    """Lifts of aP + bQ for all a, b."""
    mult = {}
    for a in range(ell):
        for b in range(ell):
            if (a, b) == (0, 0):
                mult[a, b] = null.as_point()
            elif b == 0:
                mult[a, b] = P if a == 1 else normal_add(mult[a - 1, 0], P, null)
            else:
                mult[a, b] = Q if (a, b) == (0, 1) else normal_add(mult[a, b - 1], Q, null)
    return mult


def pairing(X, Y, null, ell):
    return commutator_pairing(X, Y, normal_add(X, Y, null), null, ell).value


def nonzero(null, tors):
    return [T for T in tors if T.coords != null.coords]


def independent_pair(null, tors, ell):
    P, *rest = nonzero(null, tors)
    for Q in rest:
        if not pairing(P, Q, null, ell).is_one():
            return P, Q
    raise AssertionError("no independent pair")


@pytest.mark.parametrize("instance,ell", [(ell3, 3), (ell5, 5)])
def test_determinant_law(instance, ell):
    ctx, null, tors = instance()
    P, Q = independent_pair(null, tors, ell)
    e = pairing(P, Q, null, ell)
    zeta = ctx.field.primitive_root_of_unity(ell)
    assert discrete_log(e, zeta, ell) != 0
    mult = combinations(P, Q, null, ell)
    for a, b, c, d in itertools.product(range(ell), repeat=4):
        want = e ** ((a * d - b * c) % ell)
        assert pairing(mult[a, b], mult[c, d], null, ell) == want


def test_lift_independence():
    ctx, null, tors = ell3()
    P, Q = independent_pair(null, tors, 3)
    e = pairing(P, Q, null, 3)
    rng = random.Random(1)
    for _ in range(10):
        a, b, c = (ctx.field.random_element(rng, nonzero=True) for _ in range(3))
        PQ = normal_add(P, Q, null).scale(c)
        assert commutator_pairing(P.scale(a), Q.scale(b), PQ, null).value == e


def test_pairing_matrix():
    ctx, null, tors = ell5()
    pts = nonzero(null, tors)[:5]
    M = pairing_matrix(pts, null)
    for i, j in itertools.product(range(len(pts)), repeat=2):
        assert (M[i][j].value ** 5).is_one()
        if i == j:
            assert M[i][i].value.is_one()
        else:
            assert M[i][j].value * M[j][i].value == 1
    assert any(not M[0][j].value.is_one() for j in range(1, len(pts)))


def test_pairing_value_checks_order():
    F = FieldContext(13)
    assert PairingValue(F(3), 3).log(F(3)) == 1
    with pytest.raises(ScalarExtractionFailure):
        PairingValue(F(2), 3)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 819), st.sampled_from([5, 20, 41, 205, 820]))
def test_discrete_log(k, order):
    F = FieldContext(821)
    zeta = F.primitive_root_of_unity(order)
    assert discrete_log(zeta ** (k % order), zeta, order) == k % order


def test_kernel_ratio_is_the_pairing():
    big, res, iso = ell3_isogeny()
    _, null, tors = ell3()
    R1 = iso.R[(1,)]
    for T in tors:
        y = embed_point(T, big)
        ratio = kernel_ratios(y, iso)[0]
        assert ratio == commutator_pairing(y, R1, normal_add(y, R1, iso.null_B), iso.null_B).value


def test_symmetric_pairing_on_kummer_surface():
    ctx, null, tors = genus2()
    for P in tors:
        assert kummer_symmetric_pairing(P, null.as_point(), null) == 2
        assert kummer_symmetric_pairing(P, P, null) == 2
    for P, Q in itertools.combinations(nonzero(null, tors), 2):
        assert kummer_symmetric_pairing(P, Q, null) == 2


def test_symmetric_pairing_matches_level4():
    # the level-2 subsample (x_0, x_2) of the p = 277 curve
    ctx4, null4, tors = ell3()
    ctx = ThetaContext(ctx4.field, 1, 2, 3)
    null = ThetaNullPoint(ctx, 2, [null4[0], null4[2]])
    sub = lambda p: AffineThetaPoint(ctx, 2, [p[0], p[2]])  # noqa: E731
    values = set()
    for P, Q in itertools.combinations(nonzero(null4, tors), 2):
        e = pairing(P, Q, null4, 3)
        got = kummer_symmetric_pairing(sub(P), sub(Q), null)
        assert got == e + e.inv()
        assert kummer_symmetric_pairing(sub(negate(P)), sub(Q), null) == got
        values.add(int(got))
    assert values == {2, 276}
