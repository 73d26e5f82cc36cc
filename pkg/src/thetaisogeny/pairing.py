"""The extended commutator pairing on ell-torsion, from multiplication chains.

With ell P = lam_P0 * 0, ell P + Q = lam_P1 * Q, P + ell Q = lam_Q1 * P and
ell Q = lam_Q0 * 0, the pairing is lam_P1 * lam_Q0 / (lam_Q1 * lam_P0).
"""

from __future__ import annotations

from dataclasses import dataclass

from .chain_arithmetic import chain_add, kummer_add_pair, normal_add
from .errors import ContextMismatch, ScalarExtractionFailure
from .theta_core import negate, ratio


@dataclass(frozen=True)
class PairingValue:
    value: object
    order_bound: int

    def __post_init__(self):
        if not (self.value**self.order_bound).is_one():
            raise ScalarExtractionFailure("pairing value is not an ell-th root of unity")

    def log(self, zeta):
        return discrete_log(self.value, zeta, self.order_bound)

    def __str__(self):
        return str(self.value)


def _scalar(target, base):
    """lam with target = lam * base."""
    lam = ratio(base, target)
    if lam is None:
        raise ScalarExtractionFailure("multiplication chain did not land on the expected point")
    return lam


def ladder_pair(m, x_plus_y, x, y, null):
    """(m x, m x + y) from one Montgomery ladder; both chains add the same point each step."""
    y_minus_x = chain_add(y, negate(x), x_plus_y, null)
    lo, hi, acc = null, x, y
    for bit in bin(m)[2:]:
        if bit == "0":
            acc = chain_add(acc, lo, y, null)
            hi = chain_add(hi, lo, x, null)
            lo = chain_add(lo, lo, null, null)
        else:
            acc = chain_add(acc, hi, y_minus_x, null)
            lo = chain_add(hi, lo, x, null)
            hi = chain_add(hi, hi, null, null)
    return lo, acc


def pairing_scalars(P, Q, PQ, null, ell):
    lP, lPQ = ladder_pair(ell, PQ, P, Q, null)
    lQ, lQP = ladder_pair(ell, PQ, Q, P, null)
    return (
        _scalar(lP, null),
        _scalar(lPQ, Q),
        _scalar(lQP, P),
        _scalar(lQ, null),
    )


def commutator_pairing(P, Q, PQ, null, ell=None):
    """e'_ell(P, Q) from lifts of P, Q and any lift of P + Q."""
    ell = ell or P.ctx.ell
    if ell is None:
        raise ContextMismatch("no ell in the context")
    lam_p0, lam_p1, lam_q1, lam_q0 = pairing_scalars(P, Q, PQ, null, ell)
    return PairingValue(lam_p1 * lam_q0 / (lam_q1 * lam_p0), ell)


def sum_lift(P, Q, null):
    """Any lift of P + Q (normal addition, or one member of the Kummer pair at level 2)."""
    if P.level == 2:
        return kummer_add_pair(P, Q, null).first
    return normal_add(P, Q, null)


def pairing_matrix(points, null, sums=None, ell=None):
    """All pairwise values; ``sums[(i, j)]`` may supply lifts of points[i] + points[j]."""
    sums = dict(sums or {})
    k = len(points)
    ell = ell or points[0].ctx.ell
    one = points[0].ctx.field.one()
    M = [[PairingValue(one, ell) for _ in range(k)] for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            pq = sums.get((i, j))
            if pq is None:
                pq = sum_lift(points[i], points[j], null)
            v = commutator_pairing(points[i], points[j], pq, null, ell).value
            M[i][j] = PairingValue(v, ell)
            M[j][i] = PairingValue(v.inv(), ell)
    return M


def kummer_symmetric_pairing(P, Q, null, ell=None):
    """e(P, Q) + e(P, Q)^-1 on a level-2 Kummer variety."""
    if P.level != 2:
        raise ContextMismatch("symmetric pairing is defined at level 2")
    ell = ell or P.ctx.ell
    pair = kummer_add_pair(P, Q, null)
    e1 = commutator_pairing(P, Q, pair.first, null, ell).value
    e2 = commutator_pairing(P, Q, pair.second, null, ell).value
    return e1 + e2


def discrete_log(value, zeta, order):
    """k in [0, order) with zeta^k = value (baby-step giant-step)."""
    from math import isqrt

    m = isqrt(order - 1) + 1
    baby = {}
    cur = value.ctx.one()
    for j in range(m):
        baby.setdefault(cur, j)
        cur = cur * zeta
    giant = (zeta**m).inv()
    cur = value
    for i in range(m + 1):
        j = baby.get(cur)
        if j is not None:
            k = (i * m + j) % order
            if (zeta**k) == value:
                return k
        cur = cur * giant
    raise ScalarExtractionFailure("value is not a power of the given root")
