import random

import pytest

from a2boundary.building import BallError
from a2boundary.regions import (
    canonical_orbit_key,
    enumerate_flat,
    hexagon,
    hexagon_labels,
    hexagons_with_up,
    parallelogram,
    single_chamber,
    tile,
    translate,
)


def test_single_chamber(small_ball):
    m = single_chamber(0)
    out = enumerate_flat(small_ball, m, {m.initial: ""})
    assert len(out) == 1 and out[0].images == ("",)


def test_model_shapes():
    assert len(tile(0).chambers) == 8
    assert len(hexagon(1).chambers) == 6
    assert len(parallelogram(3, 2, 0).chambers) == 12
    # scan order: rows by j, lower chamber first
    assert tile(0).chambers[:3] == ((0, 0, 0), (0, 0, 1), (1, 0, 0))
    assert len(tile(0).interior_vertices()) == 1


@pytest.mark.parametrize("i", [0, 1, 2])
def test_hexagons_with_up_identity(small_ball, i):
    hexes = hexagons_with_up(small_ball, "", i)
    assert len(hexes) == 8
    assert all(h.vtype == i for h in hexes)
    assert all(h.image((1, 1, 0)) == "" for h in hexes)


def test_hexagon_types_disjoint(small_ball):
    sets = [{frozenset(h.images) for h in hexagons_with_up(small_ball, "", i)} for i in range(3)]
    assert not (sets[0] & sets[1]) and not (sets[1] & sets[2]) and not (sets[0] & sets[2])


def test_hexagon_found_once_per_up_chamber(ball):
    h = hexagons_with_up(ball, "", 0)[3]
    cells = frozenset(h.images)
    for c in h.images:
        hits = [x for x in hexagons_with_up(ball, c, 0) if frozenset(x.images) == cells]
        assert len(hits) == 1


def test_hexagon_labels_cover_hexagon():
    labels = hexagon_labels((1, 1), 0)
    assert set(labels.values()) == set(hexagon(0).chambers)


def test_tiles_containing_a_hexagon(ball):
    # a fixed hexagon sits in q^2 = 4 tiles
    h = hexagons_with_up(ball, "", 0)[0]
    m = tile(h.vtype)  # centre v11 of a tile of base type t has type t
    anchor = {c: h.image(c) for c in hexagon(0).chambers}
    assert len(enumerate_flat(ball, m, anchor)) == 4


@pytest.mark.parametrize("t", [0, 1, 2])
def test_tiles_at_identity(ball, t):
    m = tile(t)
    regions = enumerate_flat(ball, m, {m.initial: ""})
    assert len(regions) == 32
    assert all(r.images[0] == "" for r in regions)


def test_keys_of_different_types_are_disjoint(ball):
    keys = []
    for t in range(3):
        m = tile(t)
        keys.append({canonical_orbit_key(ball.group, r) for r in enumerate_flat(ball, m, {m.initial: ""})})
    assert all(len(k) == 32 for k in keys)
    assert not (keys[0] & keys[1] or keys[1] & keys[2] or keys[0] & keys[2])


def test_key_invariant_under_translation(ball, group):
    rng = random.Random(7)
    m = tile(1)
    regions = enumerate_flat(ball, m, {m.initial: ""})
    near = [w for w in ball.words if len(w) <= 6]
    for _ in range(50):
        r = rng.choice(regions)
        g = rng.choice(near)
        moved = translate(group, r, g)
        assert canonical_orbit_key(group, moved) == canonical_orbit_key(group, r)


def test_parallelogram_33_count(ball):
    m = parallelogram(3, 3, 0)
    assert len(enumerate_flat(ball, m, {m.initial: ""})) == 2 ** 9


def test_region_too_big_for_ball(small_ball):
    m = parallelogram(4, 4, 0)
    with pytest.raises(BallError):
        enumerate_flat(small_ball, m, {m.initial: ""})
