import numpy as np
import pytest

from a2boundary.building import (
    BallError,
    LinkGraph,
    Vertex,
    build_chamber_ball,
    validate_link,
)


def test_radius_zero_is_identity(group):
    b = build_chamber_ball(group, 0)
    assert b.words == [""]
    assert np.all(b.adj == -1)


def test_radius_two_neighbours(group):
    b = build_chamber_ball(group, 2)
    e = b.index[""]
    nbrs = {int(x) for x in b.adj[e].ravel()}
    # 3 panels x q neighbours
    assert len(nbrs) == 6 and -1 not in nbrs
    assert sorted(b.words, key=lambda w: (len(w), w)) == b.words


def test_residue_is_coset(small_ball, group):
    b = small_ball
    for c in (0, 5, 17):
        g = b.words[c]
        for p, P in enumerate(group.panel_subgroups):
            coset = {group.multiply(g, h) for h in P}
            res = {b.words[x] for x in b.adj[c, p]} | {g}
            assert res == coset


def test_vertex_residue_inside_ball(small_ball, group):
    H = set(group.vertex_subgroup(0))
    assert H <= set(small_ball.words)
    assert {small_ball.words[c] for c in small_ball.residue(0, 0)} == H


def test_vertex_of_identity(small_ball, group):
    b = small_ball
    vs = [b.vertex_of(0, t) for t in range(3)]
    assert len(set(vs)) == 3
    assert len(b.chambers_at(vs[0])) == 21
    for t in range(3):
        for h in group.vertex_subgroup(t):
            assert b.vertex_of(b.index[h], t) == vs[t]


def test_link_of_identity_vertex(small_ball):
    g = small_ball.vertex_link(small_ball.vertex_of(0, 0))
    rep = validate_link(g, 2)
    assert rep.passed, rep
    assert g.n_nodes == 14
    assert rep.details["girth"] == 6 and rep.details["diameter"] == 3


def test_six_cycle_fails_node_count():
    g = LinkGraph.from_edges([(0, 3), (3, 1), (1, 4), (4, 2), (2, 5), (5, 0)], n_points=3, n_lines=3)
    rep = validate_link(g, 2)
    assert not rep.passed
    assert not rep.checks["node_count"]
    assert rep.details["girth"] == 6


def test_short_cycle_counterexample():
    # K_{3,3}: right counts for q=1 style degrees but girth 4
    edges = [(a, 3 + b) for a in range(3) for b in range(3)]
    rep = validate_link(LinkGraph(None, 3, 3, edges), 2)
    assert not rep.checks["girth"]
    assert len(rep.details["short_cycle"]) == 4


def test_truncated_residue_raises(small_ball):
    outer = int(np.flatnonzero(small_ball.dist == small_ball.radius)[0])
    with pytest.raises(BallError):
        small_ball.residue(outer, 0)


def test_all_small_ball_interior_links(small_ball):
    verts = small_ball.interior_vertices()
    assert verts and all(isinstance(v, Vertex) for v in verts)
    for v in verts:
        assert validate_link(small_ball.vertex_link(v), 2).passed


def test_lookup_outside_ball(small_ball, group):
    w = group.normal_form(group.parse("s0 s1 s2 s0 s1 s2 s0 s1 s2 s0 s1 s2"))
    with pytest.raises(BallError):
        small_ball.lookup(w)
