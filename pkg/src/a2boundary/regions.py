"""
Flat regions of an apartment and their embeddings into a chamber ball.

Model lattice: vertex ``(k, l)`` has type ``(t + k - l) % 3`` for base
type t.  Cell ``(i, j)`` holds a lower chamber
``{v_ij, v_i+1,j, v_i,j+1}`` and an upper chamber
``{v_i+1,j, v_i,j+1, v_i+1,j+1}``; a model chamber is the triple
``(i, j, upper)``.  Scan order is row-major by ``(j, i)`` with the lower
chamber first.

An embedding sends model chambers to ball chambers so that chambers sharing
an edge of type pair (p, p+1) go to distinct chambers of one p-residue, and
the chambers around every model vertex trace a simple walk (a 6-cycle for
interior vertices) in the link of the image vertex.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .building import BallError, ChamberBall

__all__ = [
    "ModelRegion",
    "EmbeddedRegion",
    "Hexagon",
    "parallelogram",
    "tile",
    "hexagon",
    "hexagon_pair",
    "single_chamber",
    "enumerate_flat",
    "hexagons_with_up",
    "canonical_orbit_key",
    "translate",
]

Cell = tuple[int, int, int]


def chamber_vertices(c: Cell):
    i, j, u = c
    if u:
        return ((i + 1, j), (i, j + 1), (i + 1, j + 1))
    return ((i, j), (i + 1, j), (i, j + 1))


def chambers_around(v) -> list[Cell]:
    """The six lattice chambers at vertex v, in cyclic order."""
    k, l = v
    return [
        (k, l, 0),
        (k - 1, l, 1),
        (k - 1, l, 0),
        (k - 1, l - 1, 1),
        (k, l - 1, 0),
        (k, l - 1, 1),
    ]


def _scan_key(c: Cell):
    return (c[1], c[0], c[2])


@dataclass(frozen=True)
class ModelRegion:
    """A finite set of lattice chambers with a base type and an initial chamber."""

    chambers: tuple[Cell, ...]
    base_type: int
    initial: Cell
    kind: str = "region"
    shape: tuple[int, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "chambers", tuple(sorted(self.chambers, key=_scan_key)))
        if self.initial not in self.chambers:
            raise ValueError("initial chamber not in region")

    def vtype(self, v) -> int:
        return (self.base_type + v[0] - v[1]) % 3

    @cached_property
    def position(self) -> dict[Cell, int]:
        return {c: k for k, c in enumerate(self.chambers)}

    def panel(self, a: Cell, b: Cell) -> int | None:
        """Panel index of the edge shared by a and b, or None."""
        common = set(chamber_vertices(a)) & set(chamber_vertices(b))
        if len(common) != 2:
            return None
        x, y = (self.vtype(v) for v in common)
        return x if (x + 1) % 3 == y else y

    @cached_property
    def adjacency(self) -> list[list[tuple[int, int]]]:
        """For every chamber position, the (position, panel) of region neighbours."""
        pos = self.position
        out = []
        for c in self.chambers:
            nbrs = []
            for d in pos:
                if d != c:
                    p = self.panel(c, d)
                    if p is not None:
                        nbrs.append((pos[d], p))
            out.append(sorted(nbrs))
        return out

    @cached_property
    def vertices(self) -> tuple:
        vs = {v for c in self.chambers for v in chamber_vertices(c)}
        return tuple(sorted(vs, key=lambda v: (v[1], v[0])))

    @cached_property
    def stars(self) -> dict:
        """Vertex -> (cyclic list of region positions or None, is_interior)."""
        pos = self.position
        out = {}
        for v in self.vertices:
            ring = [pos.get(c) for c in chambers_around(v)]
            out[v] = (ring, all(x is not None for x in ring))
        return out

    def interior_vertices(self):
        return [v for v, (_, full) in self.stars.items() if full]

    def offset(self, di: int, dj: int) -> "ModelRegion":
        ch = tuple((i + di, j + dj, u) for i, j, u in self.chambers)
        i0, j0, u0 = self.initial
        return ModelRegion(ch, (self.base_type - di + dj) % 3, (i0 + di, j0 + dj, u0),
                           self.kind, self.shape)


def parallelogram(m: int, n: int, base_type: int) -> ModelRegion:
    cells = [(i, j, u) for j in range(n) for i in range(m) for u in (0, 1)]
    return ModelRegion(tuple(cells), base_type % 3, (0, 0, 0), "parallelogram", (m, n))


def tile(base_type: int) -> ModelRegion:
    return parallelogram(2, 2, base_type)


def single_chamber(base_type: int = 0) -> ModelRegion:
    return ModelRegion(((0, 0, 0),), base_type % 3, (0, 0, 0), "chamber", None)


def _hex_cells(k: int, l: int):
    return [c for c in chambers_around((k, l))]


def hexagon(vtype: int) -> ModelRegion:
    """Reduced tile of type ``vtype``: six chambers around v11, up chamber lower(1,1)."""
    return ModelRegion(tuple(_hex_cells(1, 1)), vtype % 3, (1, 1, 0), "hexagon", None)


def hexagon_pair(vtype: int, j: int) -> ModelRegion:
    """Hexagon at v11 together with the next hexagon in direction j (1 or 2).

    Direction 1 adds the hexagon at v21, direction 2 the one at v12; the two
    hexagons share exactly two chambers.
    """
    other = (2, 1) if j == 1 else (1, 2)
    cells = set(_hex_cells(1, 1)) | set(_hex_cells(*other))
    return ModelRegion(tuple(cells), vtype % 3, (1, 1, 0), f"hexagon_pair{j}", None)


def hexagon_labels(center, s: int) -> dict[tuple[str, int], Cell]:
    """Positional labels of the hexagon at ``center`` whose central vertex has type s."""
    k, l = center
    return {
        ("xi", s % 3): (k, l, 0),
        ("xibar", s % 3): (k - 1, l - 1, 1),
        ("xi", (s + 1) % 3): (k, l - 1, 0),
        ("xibar", (s + 1) % 3): (k - 1, l, 1),
        ("xi", (s + 2) % 3): (k - 1, l, 0),
        ("xibar", (s + 2) % 3): (k, l - 1, 1),
    }


@dataclass(frozen=True)
class EmbeddedRegion:
    """Image of a model region; ``images`` are chamber words in model scan order."""

    model: ModelRegion
    images: tuple[str, ...]

    def image(self, c: Cell) -> str:
        return self.images[self.model.position[c]]

    def restrict(self, sub: ModelRegion) -> "EmbeddedRegion":
        return EmbeddedRegion(sub, tuple(self.image(c) for c in sub.chambers))

    def subregion(self, sub: ModelRegion, di: int = 0, dj: int = 0) -> "EmbeddedRegion":
        """Restriction to ``sub`` placed at offset (di, dj), re-based to sub's own coordinates."""
        shifted = sub.offset(di, dj)
        return EmbeddedRegion(sub, tuple(self.image(c) for c in shifted.chambers))


class Hexagon(EmbeddedRegion):
    @property
    def vtype(self) -> int:
        return self.model.base_type

    def xi(self, k: int) -> str:
        return self.image(hexagon_labels((1, 1), self.vtype)[("xi", k % 3)])

    def xibar(self, k: int) -> str:
        return self.image(hexagon_labels((1, 1), self.vtype)[("xibar", k % 3)])


def translate(group, r: EmbeddedRegion, gamma: str) -> EmbeddedRegion:
    return EmbeddedRegion(r.model, tuple(group.multiply(gamma, w) for w in r.images))


def canonical_orbit_key(group, r: EmbeddedRegion) -> tuple[str, ...]:
    """Left-translate so the initial chamber becomes the identity."""
    g0 = r.image(r.model.initial)
    if not g0:
        return r.images
    inv = group.invert(g0)
    return tuple(group.multiply(inv, w) for w in r.images)


def enumerate_flat(
    ball: ChamberBall,
    model: ModelRegion,
    anchor: dict[Cell, int | str],
    margin: int = 2,
) -> list[EmbeddedRegion]:
    """All embeddings of ``model`` extending ``anchor`` (model chamber -> ball chamber).

    Regions are grown in breadth-first order from the anchored chambers.
    Raises :class:`BallError` if any placement comes within ``margin``
    steps of the ball's outer sphere.
    """
    if not anchor:
        raise ValueError("anchor must pin at least one chamber")
    pos = model.position
    adjacency = model.adjacency
    limit = ball.radius - margin
    n = len(model.chambers)

    fixed = {}
    for c, b in anchor.items():
        fixed[pos[c]] = ball.lookup(b) if isinstance(b, str) else int(b)

    order = sorted(fixed)
    seen = set(order)
    head = 0
    while head < len(order):
        x = order[head]
        head += 1
        for y, _ in adjacency[x]:
            if y not in seen:
                seen.add(y)
                order.append(y)
    if len(order) != n:
        raise ValueError("model region is not connected to the anchor")
    rank = {x: k for k, x in enumerate(order)}

    # vertices touched by each position, with their stars
    stars_of = [[] for _ in range(n)]
    for v, (ring, full) in model.stars.items():
        for x in ring:
            if x is not None:
                stars_of[x].append((ring, full))

    img = [-1] * n
    used = set()
    adj = ball.adj

    def star_ok(x: int) -> bool:
        for ring, full in stars_of[x]:
            placed = [img[y] if y is not None else None for y in ring]
            seen_here = [c for c in placed if c is not None and c >= 0]
            if len(seen_here) != len(set(seen_here)):
                return False
            for k in range(6):
                a, b = ring[k], ring[(k + 1) % 6]
                if a is None or b is None or img[a] < 0 or img[b] < 0:
                    continue
                p = model.panel(model.chambers[a], model.chambers[b])
                if img[b] not in adj[img[a], p]:
                    return False
        return True

    for x, b in fixed.items():
        if ball.dist[b] > limit:
            raise BallError(f"anchor {ball.format(b)} within margin of the ball boundary")
        if b in used:
            return []
        img[x] = b
        used.add(b)
    for x in fixed:
        for y, p in adjacency[x]:
            if y in fixed and fixed[y] not in adj[fixed[x], p]:
                return []
        if not star_ok(x):
            return []

    todo = [x for x in order if x not in fixed]
    results = []

    def grow(k: int):
        if k == len(todo):
            results.append(tuple(img))
            return
        x = todo[k]
        cands = None
        for y, p in adjacency[x]:
            if img[y] >= 0:
                s = {int(c) for c in adj[img[y], p]}
                cands = s if cands is None else cands & s
        for c in sorted(cands):
            if c in used:
                continue
            if c < 0 or ball.dist[c] > limit:
                raise BallError(
                    f"region {model.kind} reaches the ball boundary (radius {ball.radius})"
                )
            img[x] = c
            if star_ok(x):
                used.add(c)
                grow(k + 1)
                used.discard(c)
            img[x] = -1

    grow(0)
    words = ball.words
    out = [EmbeddedRegion(model, tuple(words[c] for c in r)) for r in results]
    out.sort(key=lambda r: [(len(w), w) for w in r.images])
    return out


def hexagons_with_up(ball: ChamberBall, c: int | str, i: int, margin: int = 2) -> list[Hexagon]:
    """All reduced tiles of type i whose up chamber is c."""
    model = hexagon(i)
    regions = enumerate_flat(ball, model, {model.initial: c}, margin=margin)
    return [Hexagon(r.model, r.images) for r in regions]
