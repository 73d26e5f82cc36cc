import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixtures import ell3, ell3_extension, ell3_isogeny, genus2, genus2_extension, genus2_isogeny
from thetaisogeny.chain_arithmetic import chain_mult
from thetaisogeny.errors import BudgetExceeded, IsotropyViolation, NoRoot, NotSpanning, NotTorsion
from thetaisogeny.isogeny_eval import IsogenyData, chain_fill, project, project_i
from thetaisogeny.modular_velu import (
    KernelSpec,
    _form,
    _rank_mod,
    all_modular_points,
    brute_torsion_search,
    is_true_lift,
    lagrangian_subspaces,
    modular_phi,
    sum_choices,
    symplectic_basis,
    torsion_closure,
    true_lift,
    true_lift_defect,
    variety_points,
    velu_reconstruct,
)
from thetaisogeny.theta_core import embed_point, negate, projective_eq, validate_null_point


def same(x, y):
    return projective_eq(x, y)[0]


def big3():
    _, null, tors = ell3()
    big = ell3_extension()
    return big, embed_point(null, big), [embed_point(T, big) for T in tors]


def test_true_lift_definition():
    big, null, tors = big3()
    for T in tors[1:]:
        lift, mu = true_lift(T, null)
        assert lift.check(null) and is_true_lift(lift.point, null)
        h = 1
        assert chain_mult(h + 1, lift.point, null) == negate(chain_mult(h, lift.point, null))
        assert (mu**3 * true_lift_defect(T, null, 3)).is_one()


def test_true_lift_defect_scales_by_ell_th_power():
    big, null, tors = big3()
    T = tors[2]
    alpha = true_lift_defect(T, null, 3)
    lam = big.field.generator()
    assert true_lift_defect(T.scale(lam), null, 3) == alpha * lam**3


def test_true_lifts_differ_by_roots_of_unity():
    big, null, tors = big3()
    T = tors[1]
    lift, mu = true_lift(T, null)
    zeta = big.zeta_ell
    for k in range(3):
        other, nu = true_lift(T, null, root=mu * zeta**k)
        assert other.check(null)
        assert other.point == lift.point.scale(zeta**k)
    with pytest.raises(NoRoot):
        true_lift(T, null, root=mu * 2)


def test_true_lift_needs_the_extension():
    _, null, tors = ell3()
    with pytest.raises(NoRoot):
        true_lift(tors[1], null)


def test_true_lift_rejects_non_torsion():
    from fixtures import ell3_points

    big, null, _ = big3()
    x = embed_point(ell3_points()[100], big)
    assert not same(chain_mult(3, x, null), null)
    with pytest.raises(NotTorsion):
        true_lift(x, null)


def test_velu_roundtrip():
    big, res, iso = ell3_isogeny()
    _, null, _ = ell3()
    assert validate_null_point(res.null_A).ok
    b, _ = modular_phi(res.null_A)
    assert b.coords == embed_point(null, big).coords
    assert iso.check()
    assert len(res.root_choices) == 1


def test_every_root_choice_gives_a_theta_null_point():
    _, null, tors = ell3()
    big = ell3_extension()
    K = KernelSpec.from_basis([tors[1]], null)
    mu = velu_reconstruct(K, null, ctx=big).root_choices[0]
    nulls = []
    for k in range(3):
        res = velu_reconstruct(K, null, roots=[mu * big.zeta_ell**k], ctx=big)
        assert validate_null_point(res.null_A).ok
        assert project(res.null_A).coords == embed_point(null, big).coords
        IsogenyData(res.null_A)
        nulls.append(res.null_A)
    assert len({tuple(a.coords) for a in nulls}) == 3


def test_velu_over_the_base_field_asks_for_an_extension():
    _, null, tors = ell3()
    with pytest.raises(NoRoot):
        velu_reconstruct(KernelSpec.from_basis([tors[1]], null), null)


def test_kernel_checks():
    _, null, tors = ell3()
    with pytest.raises(NotTorsion):
        KernelSpec([null.as_point()], {}).check(null)
    # T1 and T2 pair nontrivially, so they cannot share a kernel
    spec = KernelSpec.from_basis([tors[1], tors[2]], null)
    with pytest.raises(IsotropyViolation):
        spec.check(null)


def test_modular_phi_sums_translates():
    big, res, iso = ell3_isogeny()
    a = res.null_A
    b, c = modular_phi(a)
    for j in range(4):
        direct = sum((a[(3 * j + 4 * k) % 12] for k in range(3)), big.field.zero())
        assert c[j] == direct
    assert all(b[j] == a[3 * j] for j in range(4))


def test_lagrangian_subspace_counts():
    assert len(lagrangian_subspaces(1, 3)) == 4
    assert len(lagrangian_subspaces(1, 5)) == 6
    assert len(lagrangian_subspaces(2, 3)) == 40
    J = [[0, 0, 1, 0], [0, 0, 0, 1], [2, 0, 0, 0], [0, 2, 0, 0]]
    for rows in lagrangian_subspaces(2, 3):
        assert all(_form(J, u, v, 3) == 0 for u, v in itertools.product(rows, repeat=2))


def test_symplectic_basis():
    E = [[0, 1, 2, 0], [2, 0, 1, 1], [1, 2, 0, 1], [0, 2, 2, 0]]
    rows = symplectic_basis(E, 3)
    es, fs = rows[:2], rows[2:]
    for a, b in itertools.product(range(2), repeat=2):
        assert _form(E, es[a], fs[b], 3) == (1 if a == b else 0)
        assert _form(E, es[a], es[b], 3) == 0 and _form(E, fs[a], fs[b], 3) == 0
    with pytest.raises(NotSpanning):
        symplectic_basis([[0, 0], [0, 0]], 3)


def test_torsion_closure_lifts_are_true():
    _, null, tors = ell3()
    big = ell3_extension()
    closure, null_big = torsion_closure([tors[1], tors[2]], null, big)
    assert len(closure.lifts) == 9
    for coeffs, lift in closure.lifts.items():
        if any(coeffs):
            assert is_true_lift(lift, null_big)
    # every torsion point appears once up to sign
    classes = {tuple(x.normalized().coords) for x in closure.lifts.values()}
    assert len(classes) == 9


def test_torsion_closure_needs_a_spanning_basis():
    _, null, tors = ell3()
    big = ell3_extension()
    with pytest.raises(NotSpanning):
        torsion_closure([tors[1], tors[4]], null, big)


def test_all_modular_points():
    _, null, tors = ell3()
    big = ell3_extension()
    out = all_modular_points([tors[1], tors[2]], null, big)
    assert len(out) == 4
    null_big = embed_point(null, big)
    for gens, null_A in out:
        assert validate_null_point(null_A).ok
        assert modular_phi(null_A)[0].coords == null_big.coords
        IsogenyData(null_A)
    classes = {tuple(a.normalized().coords) for _, a in out}
    assert len(classes) == 4
    kernels = {frozenset(tuple(c * k % 3 for c in gens[0]) for k in range(3)) for gens, _ in out}
    assert len(kernels) == 4


def test_genus2_reconstruction():
    big, res, iso = genus2_isogeny()
    _, null, _ = genus2()
    assert validate_null_point(res.null_A).ok
    assert modular_phi(res.null_A)[0].coords == embed_point(null, big).coords
    assert iso.check()
    assert len(res.root_choices) == 3


def test_genus2_chain_generated_lifts_are_true():
    big, res, iso = genus2_isogeny()
    null = embed_point(genus2()[1], big)
    known = dict(res.lifts)
    known[(0, 0)] = null.as_point()
    chain_fill(known, known.get, null, 3, 2)
    assert len(known) == 9
    for c, lift in known.items():
        if any(c):
            assert is_true_lift(lift, null)
        assert lift == project_i(res.null_A, c)


def test_genus2_kernel_is_isotropic_and_sums_are_compatible():
    _, null, tors = genus2()
    spec = KernelSpec.from_basis([tors[1], tors[3]], null)
    assert spec.check(null)
    sums = sum_choices([tors[1], tors[3], tors[4]], null)
    assert set(sums) == {(0, 1), (0, 2), (1, 2)}


def test_brute_torsion_search():
    _, null, tors = ell3()
    assert [x.coords for x in brute_torsion_search(null)] == [x.coords for x in tors]


def test_searches_honour_the_budget():
    _, null, _ = ell3()
    with pytest.raises(BudgetExceeded):
        brute_torsion_search(null, budget=1000)
    with pytest.raises(BudgetExceeded):
        variety_points(genus2()[1], budget=10)


def test_kummer_search_returns_classes_up_to_sign():
    _, null, tors = genus2()
    found = brute_torsion_search(null)
    assert len(found) == (9 + 1) // 2
    assert [x.coords for x in found] == [x.coords for x in tors]


def test_extension_context_carries_roots():
    big = genus2_extension()
    ctx = genus2()[0]
    assert big.field.d == 6 and big.zeta_ln == big.field(ctx.zeta_ln)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 5, 7]), st.integers(1, 3), st.data())
def test_symplectic_basis_property(ell, g, data):
    m = 2 * g
    upper = data.draw(st.lists(st.integers(0, ell - 1), min_size=m * (m - 1) // 2, max_size=m * (m - 1) // 2))
    E = [[0] * m for _ in range(m)]
    for (a, b), v in zip(itertools.combinations(range(m), 2), upper):
        E[a][b], E[b][a] = v, (-v) % ell
    if _rank_mod(E, ell) < m:
        with pytest.raises(NotSpanning):
            symplectic_basis(E, ell)
        return
    rows = symplectic_basis(E, ell)
    es, fs = rows[:g], rows[g:]
    for a, b in itertools.product(range(g), repeat=2):
        assert _form(E, es[a], fs[b], ell) == (1 if a == b else 0)
        assert _form(E, es[a], es[b], ell) == 0 and _form(E, fs[a], fs[b], ell) == 0
