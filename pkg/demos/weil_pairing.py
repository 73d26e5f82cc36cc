"""The commutator pairing on E[5] over F_821.

The torsion search walks all of P^3(F_821) and takes a minute or two.
"""

import itertools

from thetaisogeny import FieldContext, ThetaContext, ThetaNullPoint, brute_torsion_search, pairing_matrix
from thetaisogeny.pairing import discrete_log

F = FieldContext(821)
ctx = ThetaContext(F, 1, 4, 5)
null = ThetaNullPoint(ctx, 4, [1, 20, 20, 20])
points = [T for T in brute_torsion_search(null, 5, budget=10**10) if T.coords != null.coords]
print(len(points) + 1, "points of 5-torsion")

zeta = F.primitive_root_of_unity(5)
M = pairing_matrix(points[:6], null)
print("discrete logs of e(P_i, P_j) to base", zeta)
for row in M:
    print("  ", [discrete_log(v.value, zeta, 5) for v in row])

# antisymmetry, read off the logs
logs = [[discrete_log(v.value, zeta, 5) for v in row] for row in M]
print("antisymmetric:", all((logs[i][j] + logs[j][i]) % 5 == 0 for i, j in itertools.product(range(6), repeat=2)))
