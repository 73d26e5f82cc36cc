"""One PASS/FAIL line per acceptance criterion.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

import itertools
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest  # noqa: E402

from fixtures import (  # noqa: E402
    curve169,
    ell3,
    ell3_extension,
    ell3_isogeny,
    ell3_points,
    ell5,
    genus2,
    genus2_extension,
    level4_nulls,
)
from thetaisogeny.chain_arithmetic import (  # noqa: E402
    chain_add,
    chain_mult,
    chain_multadd,
    chain_multadd_naive,
    normal_add,
)
from thetaisogeny.errors import MathFailure  # noqa: E402
from thetaisogeny.galois_field import FieldContext  # noqa: E402
from thetaisogeny.index_space import IndexVector, ThetaContext  # noqa: E402
from thetaisogeny.isogeny_eval import (  # noqa: E402
    IsogenyData,
    chain_fill,
    compress,
    compressed_chain_add,
    decompress,
    isogeny_image,
    kernel_contains,
    kernel_ratios,
    project,
    project_i,
)
from thetaisogeny.modular_velu import (  # noqa: E402
    KernelSpec,
    all_modular_points,
    brute_torsion_search,
    is_true_lift,
    modular_phi,
    velu_reconstruct,
)
from thetaisogeny.pairing import commutator_pairing, discrete_log  # noqa: E402
from thetaisogeny.theta_core import (  # noqa: E402
    AffineThetaPoint,
    HeisenbergElement,
    embed_point,
    heisenberg_act,
    negate,
    projective_eq,
    validate_null_point,
    validate_on_variety,
)

LINES = []


def same(x, y):
    return projective_eq(x, y)[0]


def report(number, title, body):
    try:
        detail = body()
        ok = True
    except (AssertionError, MathFailure) as exc:
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    line = f"{'PASS' if ok else 'FAIL'} [{number}] {title}: {detail}"
    LINES.append(line)
    print(line)
    return ok, line


def translates(null, count, rng):
    ctx = null.ctx
    out = []
    for _ in range(count):
        h = HeisenbergElement(
            ctx.field.random_element(rng, nonzero=True),
            IndexVector([rng.randrange(4)], 4),
            IndexVector([rng.randrange(4)], 4),
        )
        out.append(heisenberg_act(h, null))
    return out


def riemann_suite():
    rng = random.Random(11)
    points = []
    for key in ((13, 2), (17, 2)):
        _, nulls = level4_nulls(*key)
        for null in rng.sample(nulls, 5):
            points += [(null, x) for x in translates(null, 8, rng)]
    # generic points moved around by the Heisenberg group
    _, null169, pts = curve169()
    for x in rng.sample(pts, 20):
        h = HeisenbergElement(
            null169.ctx.field.random_element(rng, nonzero=True),
            IndexVector([rng.randrange(4)], 4),
            IndexVector([rng.randrange(4)], 4),
        )
        points.append((null169, heisenberg_act(h, x)))
    assert len(points) >= 100
    lams, ms = (2, 3, 5), (2, 3, 5, 7)
    for null, x in points:
        F = null.ctx.field
        assert validate_on_variety(x, null)
        assert chain_add(x, null, x, null) == x
        base = chain_mult(2, x, null)
        for lam in lams:
            assert chain_mult(2, x.scale(lam), null) == base.scale(F(lam) ** 4)
    generic = [x for null, x in points if null is null169]
    triples = 0
    for x, y in zip(generic[::2], generic[1::2]):
        F = null169.ctx.field
        d = normal_add(x, negate(y), null169)
        s = normal_add(x, y, null169)
        add = chain_add(x, y, d, null169)
        for lx, ly, ld in itertools.product(lams, repeat=3):
            got = chain_add(x.scale(lx), y.scale(ly), d.scale(ld), null169)
            assert got == add.scale(F(lx) ** 2 * F(ly) ** 2 / F(ld))
        for m in ms:
            assert chain_mult(m, x.scale(lams[triples % 3]), null169) == chain_mult(m, x, null169).scale(
                F(lams[triples % 3]) ** (m * m)
            )
            base = chain_multadd(m, s, x, y, null169)
            for ls, lx, ly in ((2, 3, 5), (5, 2, 3), (3, 5, 2)):
                got = chain_multadd(m, s.scale(ls), x.scale(lx), y.scale(ly), null169)
                assert got == base.scale(F(lx) ** (m * (m - 1)) * F(ls) ** m / F(ly) ** (m - 1))
        triples += 1
    return f"{len(points)} points, {triples} generic triples"


def velu_roundtrip():
    _, null, _ = ell3()
    tors = brute_torsion_search(null, 3, budget=10**10)
    assert len(tors) == 9
    big = ell3_extension()
    res = velu_reconstruct(KernelSpec.from_basis([tors[1]], null), null, ctx=big)
    assert validate_null_point(res.null_A).ok
    assert modular_phi(res.null_A)[0].coords == embed_point(null, big).coords
    out = all_modular_points([tors[1], tors[2]], null, big)
    assert len(out) == 4
    assert len({tuple(a.normalized().coords) for _, a in out}) == 4
    for _, a in out:
        assert validate_null_point(a).ok
        assert modular_phi(a)[0].coords == embed_point(null, big).coords
    return "9 torsion points over F_277, reconstruction over F_277^3, 4 modular points"


def functoriality():
    big, _, iso = ell3_isogeny()
    pts = ell3_points()[::12]
    for y in pts:
        y = embed_point(y, big)
        assert same(project(decompress(isogeny_image(y, iso), iso)), chain_mult(3, y, iso.null_B))
    assert len(pts) >= 20
    return f"{len(pts)} points"


def kernel():
    big, _, iso = ell3_isogeny()
    tors = [embed_point(T, big) for T in ell3()[2]]
    inside = [kernel_contains(T, iso) for T in tors]
    assert sum(inside) == 3
    for T, k in zip(tors, inside):
        if k:
            assert same(decompress(isogeny_image(T, iso), iso), iso.null_A)
    return f"{sum(inside)} of {len(tors)} torsion points in the kernel"


def _pairing(X, Y, null, ell):
    return commutator_pairing(X, Y, normal_add(X, Y, null), null, ell).value


def _determinant_law(instance, ell):
    ctx, null, tors = instance()
    nonzero = [T for T in tors if T.coords != null.coords]
    P = nonzero[0]
    Q = next(T for T in nonzero[1:] if not _pairing(P, T, null, ell).is_one())
    e = _pairing(P, Q, null, ell)
    assert discrete_log(e, ctx.field.primitive_root_of_unity(ell), ell) != 0
    mult = {(0, 0): null.as_point()}
    for a in range(1, ell):
        mult[a, 0] = P if a == 1 else normal_add(mult[a - 1, 0], P, null)
    for a, b in itertools.product(range(ell), range(1, ell)):
        mult[a, b] = normal_add(mult[a, b - 1], Q, null)
    for a, b, c, d in itertools.product(range(ell), repeat=4):
        assert _pairing(mult[a, b], mult[c, d], null, ell) == e ** ((a * d - b * c) % ell)


def pairing_law():
    _determinant_law(ell3, 3)
    _determinant_law(ell5, 5)
    big, _, iso = ell3_isogeny()
    R1 = iso.R[(1,)]
    for T in ell3()[2]:
        y = embed_point(T, big)
        assert kernel_ratios(y, iso)[0] == commutator_pairing(y, R1, normal_add(y, R1, iso.null_B), iso.null_B).value
    return "E[3] at p=277 and E[5] at p=821, kernel ratios agree"


def compression():
    big, _, iso = ell3_isogeny()
    g, n = 1, 4
    assert compress(iso.null_A).size() == (1 + g * (g + 1) // 2) * n**g
    # g = 2, n = 4: g(g+1)/2 * 4^g coordinates plus the base block
    ctx2 = ThetaContext(FieldContext(13), 2, 4, 3)
    x2 = AffineThetaPoint(ctx2, 12, [i % 13 for i in range(144)])
    assert compress(x2).size() == 3 * 16 + 16
    rng = random.Random(5)
    pts = [iso.null_A]
    for _ in range(30):
        h = HeisenbergElement(
            big.field.random_element(rng, nonzero=True),
            IndexVector([rng.randrange(12)], 12),
            IndexVector([rng.randrange(12)], 12),
        )
        pts.append(heisenberg_act(h, iso.null_A))
    for y in rng.sample(ell3_points(), 20):
        pts.append(decompress(isogeny_image(embed_point(y, big), iso), iso))
    for x in pts:
        assert decompress(compress(x), iso) == x
    for x, y in zip(pts[1::2], pts[2::2]):
        d = normal_add(x, negate(y), iso.null_A)
        C = compressed_chain_add(compress(x), compress(y), compress(d), iso)
        assert decompress(C, iso) == chain_add(x, y, d, iso.null_A)
    return f"sizes 8 and 64, {len(pts)} roundtrips"


def genus2_instance():
    ctx, null, _ = genus2()
    assert ctx.field.p % 6 == 1 and ctx.field.p <= 101
    tors = brute_torsion_search(null, 3)
    assert len(tors) == 5
    big = genus2_extension()
    res = velu_reconstruct(KernelSpec.from_basis([tors[1], tors[3]], null), null, ctx=big)
    null_big = embed_point(null, big)
    known = dict(res.lifts)
    known[(0, 0)] = null_big.as_point()
    chain_fill(known, known.get, null_big, 3, 2)
    assert len(known) == 9
    for c, lift in known.items():
        if any(c):
            assert is_true_lift(lift, null_big)
        assert lift == project_i(res.null_A, c)
    assert validate_null_point(res.null_A).ok
    assert IsogenyData(res.null_A).check()
    return f"F_{ctx.field.p}^{ctx.field.d}, {len(tors)} torsion classes, 8 true lifts"


def ladder():
    rng = random.Random(6)
    _, null, pts = curve169()
    F = null.ctx.field
    for _ in range(10):
        x, y = (p.scale(F.random_element(rng, nonzero=True)) for p in rng.sample(pts, 2))
        s = normal_add(x, y, null).scale(F.random_element(rng, nonzero=True))
        for m in range(21):
            assert chain_multadd(m, s, x, y, null) == chain_multadd_naive(m, s, x, y, null)
    return "10 triples, m <= 20"


CRITERIA = [
    (1, "Riemann and homogeneity identities", riemann_suite),
    (2, "Velu roundtrip", velu_roundtrip),
    (3, "isogeny functoriality", functoriality),
    (4, "kernel annihilation and counting", kernel),
    (5, "pairing determinant law", pairing_law),
    (6, "compression contract", compression),
    (7, "genus-2 instance", genus2_instance),
    (8, "ladder equivalence", ladder),
]


@pytest.mark.parametrize("number,title,body", CRITERIA, ids=[f"criterion{c[0]}" for c in CRITERIA])
def test_criterion(number, title, body):
    ok, line = report(number, title, body)
    assert ok, line


if __name__ == "__main__":
    results = [report(*c)[0] for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
