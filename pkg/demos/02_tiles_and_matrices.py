"""
Tiles, hexagons and the transition matrices.

Builds a radius-12 ball (about 15 s), lists the tile and hexagon orbits,
and checks the conditions on M1, M2.
"""

import time

import numpy as np

from a2boundary.building import build_chamber_ball
from a2boundary.group import Group
from a2boundary.regions import enumerate_flat, tile
from a2boundary.shift import (
    build_hexagon_alphabet,
    build_tile_alphabet,
    build_transition_M,
    build_transition_N,
    verify_H1,
    verify_H2,
    verify_H3,
    word_count_crosscheck,
)

G = Group.from_preset("paper-q2")
t0 = time.perf_counter()
ball = build_chamber_ball(G, 12)
print(f"ball: {len(ball)} chambers in {time.perf_counter() - t0:.1f}s")

m = tile(0)
tiles = enumerate_flat(ball, m, {m.initial: ""})
print(f"tiles of base type 0 with initial chamber 1: {len(tiles)}")
print("  first one:", [G.format(w) for w in tiles[0].images])

A = build_tile_alphabet(ball)
L = build_hexagon_alphabet(ball)
print(f"|A| = {len(A)} {A.block_sizes()},  |Λ| = {len(L)} {L.block_sizes()}")

M1, M2 = (build_transition_M(j, ball, A) for j in (1, 2))
N1, N2 = (build_transition_N(j, ball, L) for j in (1, 2))
for name, X in (("M1", M1), ("M2", M2), ("N1", N1), ("N2", N2)):
    print(f"{name}: {X.shape}, {int(X.sum())} ones, row sums {set(X.sum(1).tolist())}")

# block pattern of M1: letters of block i go to block i+1
blocks = np.array(A.blocks)
pattern = np.zeros((3, 3), dtype=int)
for b, a in zip(*np.nonzero(M1)):
    pattern[blocks[b], blocks[a]] += 1
print("M1 block counts (rows = target block):\n", pattern)

for rep in (verify_H1(M1, M2), verify_H2(M1, M2), verify_H3(M1, M2)):
    extra = {k: v for k, v in rep.details.items() if k != "witnesses"}
    print(f"{rep.name}: {rep.status} {extra}")

for shape in [(0, 0), (1, 0), (0, 1), (1, 1)]:
    r = word_count_crosscheck(shape, ball, A, M1, M2)
    print(f"words of shape {shape}: {r.details}")
