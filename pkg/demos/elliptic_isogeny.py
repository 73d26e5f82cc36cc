"""A 3-isogeny of elliptic curves in level-4 theta coordinates.

Finds the rational 3-torsion of y: (1 : 1 : 23 : 1) over F_277, builds the
isogenous level-12 null point over F_{277^3} and pushes a few points through
the isogeny.
"""

from thetaisogeny import (
    FieldContext,
    KernelSpec,
    ThetaContext,
    ThetaNullPoint,
    all_modular_points,
    brute_torsion_search,
    chain_mult,
    decompress,
    isogeny_image,
    kernel_contains,
    validate_null_point,
    velu_reconstruct,
)
from thetaisogeny.isogeny_eval import project
from thetaisogeny.modular_velu import extension_context, variety_points
from thetaisogeny.theta_core import embed_point, projective_eq

ctx = ThetaContext(FieldContext(277), 1, 4, 3)
null = ThetaNullPoint(ctx, 4, [1, 1, 23, 1])
print("null point valid:", validate_null_point(null).ok)

torsion = brute_torsion_search(null, 3)
print(len(torsion), "points of 3-torsion")
for T in torsion:
    print("  ", T)

# the true lifts need a cube root that only exists in F_{277^3}
big = extension_context(ctx, 3)
res = velu_reconstruct(KernelSpec.from_basis([torsion[1]], null), null, ctx=big)
iso = res.isogeny_data()
print("level-12 null point:", res.null_A)
print("root choice:", res.root_choices[0])

inside = [kernel_contains(embed_point(T, big), iso) for T in torsion]
print("kernel membership of the torsion points:", inside)

for y in variety_points(null)[:5]:
    y = embed_point(y, big)
    image = isogeny_image(y, iso)
    back = project(decompress(image, iso))
    print(f"{image.size()} compressed coordinates, pi(phi(y)) = 3y: {projective_eq(back, chain_mult(3, y, iso.null_B))[0]}")

print(len(all_modular_points([torsion[1], torsion[2]], null, big)), "isogenous null points in total")
