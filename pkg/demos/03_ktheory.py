"""
From transition matrices to K-groups.

C(Γ) = coker(I - X1 | I - X2) for either pair of matrices; with q=2 it is
Z_3, every letter has the same class g, and the unit classes are 6g and 9g.
The generic presentation gives Z_{q^2-1} for every q.
"""

import numpy as np

from a2boundary.building import build_chamber_ball
from a2boundary.group import Group
from a2boundary.ktheory import (
    A0,
    compute_CGamma,
    compute_CGamma_M,
    cuntz_k,
    generic_presentation_group,
    k_groups_rank2,
    kunneth,
    order_of_unit,
    rank1_ck_k,
    unit_class,
)
from a2boundary.shift import (
    build_hexagon_alphabet,
    build_tile_alphabet,
    build_transition_M,
    build_transition_N,
)

G = Group.from_preset("paper-q2")
ball = build_chamber_ball(G, 12)
A, L = build_tile_alphabet(ball), build_hexagon_alphabet(ball)
M = [build_transition_M(j, ball, A) for j in (1, 2)]
N = [build_transition_N(j, ball, L) for j in (1, 2)]

CM = compute_CGamma_M(*M)
CN = compute_CGamma(*N)
print(f"C(Γ) from tiles:    {CM.group}")
print(f"C(Γ) from hexagons: {CN.group}")
print("K0 = K1 =", k_groups_rank2(CM.group).K0)

u = unit_class(A, CM, G.q)
print(f"g = {u.g}, class of sum of letters = {u.c}, unit = {u.unit}")
print("checks:", u.checks)

print("\n q  C(Γ)    order of [1]")
for q in range(2, 12):
    print(f"{q:2d}  {str(generic_presentation_group(q)):7s} {order_of_unit(q)}")

a0 = rank1_ck_k(A0)
o4 = cuntz_k(4)
print("\nK(A0) =", a0, "  K(O4) =", o4)
print("K(O4 x O4) =", kunneth(o4, o4))
print("K(A0 x O4) =", kunneth(a0, o4))
print("I - A0^T =\n", np.eye(3, dtype=int) - np.array(A0).T)
