"""
Finite balls in the chamber system of a chamber-regular group.

Chambers are group elements; the chambers sharing the panel of type pair
(p, p+1) with ``g`` are ``g * h`` for ``h`` in the panel subgroup P_p.  The
vertex of type t of ``g`` is the coset ``g H_t`` with ``H_t`` generated by
the two panel subgroups whose type pairs contain t.

Chambers in a ball are stored in shortlex order, so the smallest index in
any set of chambers is also its shortlex-least member.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .group import Group, shortlex_key

__all__ = [
    "BallError",
    "ChamberBall",
    "Vertex",
    "LinkGraph",
    "LinkReport",
    "build_chamber_ball",
    "validate_link",
    "vertex_panels",
]


class BallError(RuntimeError):
    """Ball too small for the request, or local structure inconsistent."""


def vertex_panels(t: int) -> tuple[int, int]:
    """Panel indices through a vertex of type t: points side first, lines second."""
    return t % 3, (t - 1) % 3


@dataclass(frozen=True, order=True)
class Vertex:
    vtype: int
    key: str  # shortlex-least chamber word in the vertex residue


@dataclass
class LinkGraph:
    """Incidence graph of a vertex link.

    ``points`` are the (t,t+1)-panels through the vertex, ``lines`` the
    (t-1,t)-panels; every chamber at the vertex is an edge joining its two
    panels.  Nodes are numbered points first.
    """

    vertex: Vertex | None
    n_points: int
    n_lines: int
    edges: list[tuple[int, int]]  # (point, n_points + line)

    @property
    def n_nodes(self) -> int:
        return self.n_points + self.n_lines

    def neighbours(self) -> list[list[int]]:
        nb = [[] for _ in range(self.n_nodes)]
        for a, b in self.edges:
            nb[a].append(b)
            nb[b].append(a)
        return nb

    @classmethod
    def from_edges(cls, edges, n_points=None, n_lines=None, vertex=None):
        """Generic graph (used for controls); nodes are 0..n-1."""
        edges = [tuple(e) for e in edges]
        n = 1 + max((max(e) for e in edges), default=-1)
        if n_points is None:
            n_points, n_lines = n, 0
        return cls(vertex, n_points, n_lines, edges)


@dataclass
class LinkReport:
    passed: bool
    checks: dict[str, bool]
    details: dict = field(default_factory=dict)


def _bfs_dist(nb, s):
    dist = [-1] * len(nb)
    dist[s] = 0
    dq = deque([s])
    while dq:
        x = dq.popleft()
        for y in nb[x]:
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                dq.append(y)
    return dist


def _shortest_cycle(edges, n):
    """Shortest cycle in a multigraph as a node list, or None if acyclic."""
    seen = {}
    for k, (a, b) in enumerate(edges):
        if a == b:
            return [a]
        e = (min(a, b), max(a, b))
        if e in seen:
            return [a, b]
        seen[e] = k
    nb = [[] for _ in range(n)]
    for k, (a, b) in enumerate(edges):
        nb[a].append((b, k))
        nb[b].append((a, k))
    best = None
    for s in range(n):
        dist, parent, pedge = {s: 0}, {s: None}, {s: None}
        dq = deque([s])
        while dq:
            x = dq.popleft()
            for y, k in nb[x]:
                if k == pedge[x]:
                    continue
                if y not in dist:
                    dist[y], parent[y], pedge[y] = dist[x] + 1, x, k
                    dq.append(y)
                elif best is None or dist[x] + dist[y] + 1 < len(best):
                    # walk both branches back to the root
                    px, py = [x], [y]
                    while parent[px[-1]] is not None:
                        px.append(parent[px[-1]])
                    while parent[py[-1]] is not None:
                        py.append(parent[py[-1]])
                    common = set(px) & set(py)
                    cx = [v for v in px if v not in common] + [next(v for v in px if v in common)]
                    cy = [v for v in py if v not in common]
                    cyc = cx + cy[::-1]
                    if best is None or len(cyc) < len(best):
                        best = cyc
    return best


def validate_link(g: LinkGraph, q: int) -> LinkReport:
    """Check that ``g`` is the incidence graph of a projective plane of order q."""
    n_side = q * q + q + 1
    nb = g.neighbours()
    checks, details = {}, {}

    checks["node_count"] = g.n_points == n_side and g.n_lines == n_side
    details["nodes"] = (g.n_points, g.n_lines)
    degrees = [len(x) for x in nb]
    checks["biregular"] = bool(degrees) and all(d == q + 1 for d in degrees)
    if not checks["biregular"]:
        details["bad_degree"] = [(v, d) for v, d in enumerate(degrees) if d != q + 1][:5]
    checks["bipartite"] = all(
        (a < g.n_points) != (b < g.n_points) for a, b in g.edges
    ) and g.n_lines > 0

    dists = [_bfs_dist(nb, s) for s in range(g.n_nodes)] if g.n_nodes else []
    checks["connected"] = bool(dists) and all(d >= 0 for row in dists for d in row)
    if checks["connected"]:
        diam = max(max(row) for row in dists)
        checks["diameter"] = diam == 3
        details["diameter"] = diam
        if diam != 3:
            s = max(range(g.n_nodes), key=lambda v: max(dists[v]))
            details["far_pair"] = (s, dists[s].index(max(dists[s])))
    else:
        checks["diameter"] = False
    cyc = _shortest_cycle(g.edges, g.n_nodes)
    girth = len(cyc) if cyc else None
    details["girth"] = girth
    checks["girth"] = girth == 6
    if girth is not None and girth != 6:
        details["short_cycle"] = cyc
    return LinkReport(all(checks.values()), checks, details)


class ChamberBall:
    """Chambers within gallery distance ``radius`` of the identity.

    ``adj[c, p]`` lists the q chambers other than ``c`` sharing its panel of
    type pair (p, p+1); ``-1`` marks neighbours outside the ball (only on the
    outermost sphere).
    """

    def __init__(self, group: Group, words, dist, adj, radius: int):
        self.group = group
        self.q = group.q
        self.words = list(words)
        self.index = {w: k for k, w in enumerate(self.words)}
        self.dist = np.asarray(dist, dtype=np.int32)
        self.adj = np.asarray(adj, dtype=np.int32)
        self.radius = radius
        self._components: dict[int, np.ndarray] = {}
        self._residue_cache: dict[tuple[int, int], tuple[int, ...]] = {}

    def __len__(self):
        return len(self.words)

    def __contains__(self, w):
        return w in self.index

    def neighbours(self, c: int, p: int) -> np.ndarray:
        return self.adj[c, p]

    def is_interior(self, c: int, margin: int = 1) -> bool:
        return self.dist[c] <= self.radius - margin

    # --- vertices -----------------------------------------------------

    def _vertex_labels(self, t: int) -> np.ndarray:
        """Component label of every chamber in the graph of panels through type t."""
        if t not in self._components:
            n = len(self.words)
            rows, cols = [], []
            for p in vertex_panels(t):
                nb = self.adj[:, p, :]
                r = np.repeat(np.arange(n), nb.shape[1])
                c = nb.ravel()
                keep = c >= 0
                rows.append(r[keep])
                cols.append(c[keep])
            r, c = np.concatenate(rows), np.concatenate(cols)
            graph = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(n, n))
            _, labels = connected_components(graph, directed=False)
            self._components[t] = labels
        return self._components[t]

    def residue(self, c: int, t: int) -> tuple[int, ...]:
        """Chamber indices at the type-t vertex of chamber c (sorted).

        Raises :class:`BallError` when the residue touches the outer sphere,
        where adjacency is truncated.
        """
        key = (c, t % 3)
        if key in self._residue_cache:
            return self._residue_cache[key]
        seen = {c}
        dq = deque([c])
        while dq:
            x = dq.popleft()
            if self.dist[x] >= self.radius:
                raise BallError(f"residue of chamber {self.format(c)} at type {t} truncated")
            for p in vertex_panels(t):
                for y in self.adj[x, p]:
                    y = int(y)
                    if y not in seen:
                        seen.add(y)
                        dq.append(y)
        res = tuple(sorted(seen))
        self._residue_cache[key] = res
        return res

    def vertex_of(self, c: int, t: int) -> Vertex:
        res = self.residue(c, t)
        return Vertex(t % 3, self.words[res[0]])

    def chambers_at(self, v: Vertex) -> tuple[int, ...]:
        return self.residue(self.index[v.key], v.vtype)

    def vertex_link(self, v: Vertex) -> LinkGraph:
        cham = self.chambers_at(v)
        t = v.vtype
        p_pts, p_lines = vertex_panels(t)
        pt_id, ln_id = {}, {}
        for c in cham:
            for p, ids in ((p_pts, pt_id), (p_lines, ln_id)):
                if c in ids:
                    continue
                cls = [c] + [int(x) for x in self.adj[c, p]]
                k = len(set(ids.values()))
                for x in cls:
                    ids[x] = k
        n_pts = len(set(pt_id.values()))
        edges = [(pt_id[c], n_pts + ln_id[c]) for c in cham]
        return LinkGraph(v, n_pts, len(set(ln_id.values())), edges)

    def interior_vertices(self):
        """All vertices whose full residue lies strictly inside the ball."""
        out = []
        inner = self.dist < self.radius
        for t in range(3):
            labels = self._vertex_labels(t)
            bad = np.zeros(labels.max() + 1, dtype=bool)
            bad[labels[~inner]] = True
            first = {}
            for c in np.flatnonzero(~bad[labels]):
                lab = labels[c]
                if lab not in first:
                    first[lab] = int(c)
            out.extend(Vertex(t, self.words[c]) for c in first.values())
        return sorted(out)

    # --- consistency --------------------------------------------------

    def check_residues(self):
        """Every panel residue inside the ball is a clique of size q+1."""
        q = self.q
        for c in np.flatnonzero(self.dist < self.radius):
            for p in range(3):
                cls = {int(c)} | {int(x) for x in self.adj[c, p]}
                if len(cls) != q + 1 or -1 in cls:
                    raise BallError(f"panel residue of {self.format(int(c))} has {len(cls)} members")
                for x in cls:
                    if self.dist[x] < self.radius and {x} | set(self.adj[x, p].tolist()) != cls:
                        raise BallError(f"residue clique violation at {self.format(x)}")

    def format(self, c: int) -> str:
        return self.group.format(self.words[c])

    def lookup(self, w: str) -> int:
        try:
            return self.index[w]
        except KeyError:
            raise BallError(f"chamber {self.group.format(w)} outside ball") from None


def build_chamber_ball(group: Group, radius: int) -> ChamberBall:
    """Breadth-first ball of gallery radius ``radius`` around the identity."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    rs = group.rs
    mult = [[h for h in P if h] for P in group.panel_subgroups]
    maxlen = max(len(h) for hs in mult for h in hs)
    rs.check_length(radius * maxlen)

    dist = {"": 0}
    frontier = [""]
    for r in range(1, radius + 1):
        nxt = []
        for g in frontier:
            for hs in mult:
                for h in hs:
                    x = rs.reduce(h, prefix=g)
                    if x not in dist:
                        dist[x] = r
                        nxt.append(x)
        frontier = nxt

    words = sorted(dist, key=shortlex_key)
    index = {w: k for k, w in enumerate(words)}
    q = group.q
    adj = np.full((len(words), 3, q), -1, dtype=np.int32)
    for k, g in enumerate(words):
        for p, hs in enumerate(mult):
            row = sorted(
                (index.get(rs.reduce(h, prefix=g), -1) for h in hs),
                key=lambda i: (i < 0, i),
            )
            adj[k, p, :] = row
    ball = ChamberBall(group, words, [dist[w] for w in words], adj, radius)
    ball.check_residues()
    return ball
