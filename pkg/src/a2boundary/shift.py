"""
Tile and hexagon alphabets, transition matrices, and the checks on them.

Letters are orbit keys of regions whose initial chamber is the identity, so
every key is also a representative region sitting in the ball.  Matrices
are dense ``int8`` arrays indexed ``X[b, a]`` with ``a`` the column letter
and ``b`` the letter reached from it.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .building import ChamberBall
from .group import shortlex_key
from .regions import (
    EmbeddedRegion,
    Hexagon,
    canonical_orbit_key,
    enumerate_flat,
    hexagon,
    hexagon_labels,
    hexagon_pair,
    parallelogram,
    tile,
)

__all__ = [
    "ShiftError",
    "Alphabet",
    "CheckReport",
    "Word2D",
    "build_tile_alphabet",
    "build_hexagon_alphabet",
    "build_transition_M",
    "build_transition_N",
    "verify_H1",
    "verify_H2",
    "verify_H3",
    "complete_word",
    "enumerate_words",
    "word_count_crosscheck",
    "n_adjacency_characterization",
    "block_structure_ok",
    "line_sums",
    "decorating_set",
]


class ShiftError(RuntimeError):
    """A counting statement failed while building alphabets or matrices."""


@dataclass
class CheckReport:
    name: str
    status: str  # "pass", "fail" or "inconclusive"
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass
class Alphabet:
    kind: str  # "tile" or "hexagon"
    keys: list[tuple[str, ...]]
    blocks: list[int]
    q: int

    def __post_init__(self):
        self.index = {k: n for n, k in enumerate(self.keys)}

    def __len__(self):
        return len(self.keys)

    def block_sizes(self) -> list[int]:
        return [self.blocks.count(i) for i in range(3)]

    def block_indices(self, i: int) -> list[int]:
        return [n for n, b in enumerate(self.blocks) if b == i]

    def model(self, n: int):
        return tile(self.blocks[n]) if self.kind == "tile" else hexagon(self.blocks[n])

    def representative(self, n: int) -> EmbeddedRegion:
        m = self.model(n)
        if self.kind == "hexagon":
            return Hexagon(m, self.keys[n])
        return EmbeddedRegion(m, self.keys[n])

    @classmethod
    def from_keys(cls, kind, keyed: dict, q: int) -> "Alphabet":
        """``keyed`` maps key -> block; letters are sorted by (block, shortlex words)."""
        items = sorted(keyed.items(), key=lambda kv: (kv[1], [shortlex_key(w) for w in kv[0]]))
        return cls(kind, [k for k, _ in items], [b for _, b in items], q)


def _build_alphabet(ball: ChamberBall, kind: str, expected: int) -> Alphabet:
    group = ball.group
    keyed = {}
    for t in range(3):
        model = tile(t) if kind == "tile" else hexagon(t)
        regions = enumerate_flat(ball, model, {model.initial: ""})
        keys = {canonical_orbit_key(group, r) for r in regions}
        if len(keys) != expected:
            raise ShiftError(f"{kind} block {t}: {len(keys)} letters, expected {expected}")
        for k in keys:
            if k in keyed:
                raise ShiftError(f"{kind} key shared by blocks {keyed[k]} and {t}")
            keyed[k] = t
    return Alphabet.from_keys(kind, keyed, ball.q)


def build_tile_alphabet(ball: ChamberBall) -> Alphabet:
    return _build_alphabet(ball, "tile", ball.q ** 5)


def build_hexagon_alphabet(ball: ChamberBall) -> Alphabet:
    return _build_alphabet(ball, "hexagon", ball.q ** 3)


def line_sums(X: np.ndarray):
    return X.sum(axis=1), X.sum(axis=0)


def _check_sums(X, q, name):
    rows, cols = line_sums(X)
    bad = [int(k) for k in np.flatnonzero((rows != q * q) | (cols != q * q))]
    if bad:
        raise ShiftError(f"{name}: line sums differ from q^2 at letters {bad[:5]}")


def _offset(j: int):
    if j not in (1, 2):
        raise ValueError("direction must be 1 or 2")
    return (1, 0) if j == 1 else (0, 1)


def build_transition_M(j: int, ball: ChamberBall, A: Alphabet, check: bool = True) -> np.ndarray:
    """Tile transitions through parallelograms of shape (3,2) (j=1) or (2,3) (j=2)."""
    di, dj = _offset(j)
    group = ball.group
    n = len(A)
    X = np.zeros((n, n), dtype=np.int8)
    for a in range(n):
        t = A.blocks[a]
        rep = A.representative(a)
        big = parallelogram(2 + di, 2 + dj, t)
        anchor = {c: rep.image(c) for c in rep.model.chambers}
        for region in enumerate_flat(ball, big, anchor):
            term = region.subregion(tile(t + j), di, dj)
            key = canonical_orbit_key(group, term)
            if key not in A.index:
                raise ShiftError(f"terminal tile of letter {a} is not a letter")
            X[A.index[key], a] = 1
    if check:
        _check_sums(X, ball.q, f"M{j}")
    return X


def build_transition_N(j: int, ball: ChamberBall, L: Alphabet, check: bool = True) -> np.ndarray:
    """Hexagon transitions through two hexagons sharing two chambers."""
    di, dj = _offset(j)
    group = ball.group
    n = len(L)
    X = np.zeros((n, n), dtype=np.int8)
    for a in range(n):
        t = L.blocks[a]
        rep = L.representative(a)
        anchor = {c: rep.image(c) for c in rep.model.chambers}
        for region in enumerate_flat(ball, hexagon_pair(t, j), anchor):
            other = region.subregion(hexagon(t + j), di, dj)
            key = canonical_orbit_key(group, other)
            if key not in L.index:
                raise ShiftError(f"second hexagon of letter {a} is not a letter")
            X[L.index[key], a] = 1
    if check:
        _check_sums(X, ball.q, f"N{j}")
    return X


def block_structure_ok(X: np.ndarray, blocks, shift: int) -> bool:
    """Column letters of block i only reach row letters of block i + shift."""
    blocks = np.asarray(blocks)
    rows, cols = np.nonzero(X)
    return bool(np.all(blocks[rows] == (blocks[cols] + shift) % 3))


def n_adjacency_characterization(ball: ChamberBall, L: Alphabet, N: np.ndarray, j: int) -> CheckReport:
    """Compare N_j with the chamber-matching description of its support.

    For j=1: eta of type i+1 with eta_i = xi_i and etabar_{i+1} = xibar_{i+2}.
    For j=2: zeta of type i+2 with zeta_i = xi_i and zetabar_{i+2} = xibar_{i+1}.
    """
    group = ball.group
    mismatches = []
    for a in range(len(L)):
        i = L.blocks[a]
        xi = L.representative(a)
        s = (i + j) % 3
        labels = hexagon_labels((1, 1), s)
        if j == 1:
            pins = {labels["xi", i]: xi.xi(i), labels["xibar", (i + 1) % 3]: xi.xibar(i + 2)}
        else:
            pins = {labels["xi", i]: xi.xi(i), labels["xibar", (i + 2) % 3]: xi.xibar(i + 1)}
        found = {
            L.index[canonical_orbit_key(group, r)]
            for r in enumerate_flat(ball, hexagon(s), pins)
        }
        support = set(np.flatnonzero(N[:, a]).tolist())
        if found != support:
            mismatches.append(a)
    status = "pass" if not mismatches else "fail"
    return CheckReport(f"N{j} characterization", status, {"mismatched_columns": mismatches[:10]})


def verify_H1(M1: np.ndarray, M2: np.ndarray) -> CheckReport:
    A = M1.astype(np.int64)
    B = M2.astype(np.int64)
    P, Q = A @ B, B @ A
    details = {}
    commute = bool(np.array_equal(P, Q))
    zero_one = bool(np.all((P == 0) | (P == 1)))
    if not commute:
        b, a = map(int, np.argwhere(P != Q)[0])
        details["first_noncommuting"] = (b, a, int(P[b, a]), int(Q[b, a]))
    if not zero_one:
        b, a = map(int, np.argwhere((P != 0) & (P != 1))[0])
        details["first_non01"] = (b, a, int(P[b, a]))
    details.update(commute=commute, zero_one=zero_one)
    return CheckReport("H1", "pass" if commute and zero_one else "fail", details)


def verify_H2(M1: np.ndarray, M2: np.ndarray) -> CheckReport:
    """Irreducibility of the coloured graph, plus positivity of (M1 + M2)^3."""
    G = ((M1 + M2) > 0).astype(np.int64)
    n = G.shape[0]
    ncomp, _ = connected_components(csr_matrix(G.T), directed=True, connection="strong")
    details = {"strong_components": int(ncomp)}
    if ncomp != 1:
        # a -> b edge is G[b, a]; find a pair with no path
        for a in range(n):
            reach = np.zeros(n, dtype=bool)
            reach[a] = True
            frontier = reach.copy()
            while frontier.any():
                nxt = (G[:, frontier].sum(axis=1) > 0) & ~reach
                reach |= nxt
                frontier = nxt
            if not reach.all():
                details["unreachable"] = (a, int(np.flatnonzero(~reach)[0]))
                break
    cube = np.linalg.matrix_power(G, 3) > 0
    details["cube_positive"] = bool(cube.all())
    ok = ncomp == 1 and details["cube_positive"]
    return CheckReport("H2", "pass" if ok else "fail", details)


@dataclass(frozen=True)
class Word2D:
    """Grid ``w[i][j]`` of letter indices, 0 <= i <= m, 0 <= j <= n."""

    grid: tuple[tuple[int, ...], ...]

    @property
    def shape(self):
        return len(self.grid) - 1, len(self.grid[0]) - 1

    def __getitem__(self, ij):
        return self.grid[ij[0]][ij[1]]

    def is_valid(self, M1, M2) -> bool:
        m, n = self.shape
        for i in range(m + 1):
            for j in range(n + 1):
                if i < m and not M1[self.grid[i + 1][j], self.grid[i][j]]:
                    return False
                if j < n and not M2[self.grid[i][j + 1], self.grid[i][j]]:
                    return False
        return True


def complete_word(M1, M2, bottom, right) -> Word2D | None:
    """Fill a word from its bottom row and right column.

    Each square is closed leftwards: from w[i][j], w[i+1][j], w[i+1][j+1]
    the letter w[i][j+1] must be the unique c with M2(c, w[i][j]) = 1 and
    M1(w[i+1][j+1], c) = 1.  Returns None when some square has no unique
    completion.
    """
    m, n = len(bottom) - 1, len(right) - 1
    if bottom[m] != right[0]:
        raise ValueError("bottom row and right column must meet")
    w = [[-1] * (n + 1) for _ in range(m + 1)]
    for i, x in enumerate(bottom):
        w[i][0] = x
    for j, x in enumerate(right):
        w[m][j] = x
    for i in range(m - 1, -1, -1):
        for j in range(n):
            a, d = w[i][j], w[i + 1][j + 1]
            cs = np.flatnonzero(M2[:, a] & M1[d, :])
            if len(cs) != 1:
                return None
            w[i][j + 1] = int(cs[0])
    return Word2D(tuple(tuple(col) for col in w))


def _random_path(M, start, length, rng):
    path = [start]
    for _ in range(length):
        nxt = np.flatnonzero(M[:, path[-1]])
        if len(nxt) == 0:
            return None
        path.append(int(rng.choice(nxt)))
    return path


def verify_H3(M1, M2, window: int = 2, cap: int = 6, tries: int = 200, seed: int = 0) -> CheckReport:
    """Shift-mismatch aperiodicity witnesses for every offset in the window.

    For each (p1, p2) != (0, 0) with |p1|, |p2| <= window, search words of
    shape up to (cap, cap) for a position with w[i][j] != w[i+p1][j+p2].
    Offsets without a witness make the report inconclusive.
    """
    rng = random.Random(seed)
    n_letters = M1.shape[0]
    witnesses, missing = {}, []
    for p1, p2 in itertools.product(range(-window, window + 1), repeat=2):
        if (p1, p2) == (0, 0):
            continue
        found = None
        for m, n in ((abs(p1), abs(p2)),) + tuple((s, s) for s in range(max(abs(p1), abs(p2)), cap + 1)):
            for _ in range(tries):
                a = rng.randrange(n_letters)
                bottom = _random_path(M1, a, m, rng)
                right = bottom and _random_path(M2, bottom[-1], n, rng)
                if not right:
                    continue
                w = complete_word(M1, M2, bottom, right)
                if w is None:
                    continue
                for i in range(max(0, -p1), min(m, m - p1) + 1):
                    for j in range(max(0, -p2), min(n, n - p2) + 1):
                        if w[i, j] != w[i + p1, j + p2]:
                            found = (w, (i, j))
                            break
                    if found:
                        break
                if found:
                    break
            if found:
                break
        if found and found[0].is_valid(M1, M2):
            witnesses[(p1, p2)] = found
        else:
            missing.append((p1, p2))
    status = "pass" if not missing else "inconclusive"
    return CheckReport(
        "H3 (shift-mismatch form)",
        status,
        {"witnesses": witnesses, "missing": missing, "window": window},
    )


def enumerate_words(M1, M2, m: int, n: int):
    """All words of shape (m, n) by brute-force backtracking over the grid."""
    N = M1.shape[0]
    succ1 = [set(np.flatnonzero(M1[:, a]).tolist()) for a in range(N)]
    succ2 = [set(np.flatnonzero(M2[:, a]).tolist()) for a in range(N)]
    cells = [(i, j) for j in range(n + 1) for i in range(m + 1)]
    grid = {}

    def rec(k):
        if k == len(cells):
            yield Word2D(tuple(tuple(grid[i, j] for j in range(n + 1)) for i in range(m + 1)))
            return
        i, j = cells[k]
        cands = set(range(N))
        if i > 0:
            cands &= succ1[grid[i - 1, j]]
        if j > 0:
            cands &= succ2[grid[i, j - 1]]
        for c in sorted(cands):
            grid[i, j] = c
            yield from rec(k + 1)
        grid.pop((i, j), None)

    yield from rec(0)


def word_count_crosscheck(shape, ball: ChamberBall, A: Alphabet, M1, M2) -> CheckReport:
    """Words of shape (m, n) against orbits of (m+2, n+2) parallelograms."""
    m, n = shape
    group = ball.group
    words = set(enumerate_words(M1, M2, m, n))
    orbits, read = set(), set()
    for t in range(3):
        model = parallelogram(m + 2, n + 2, t)
        for region in enumerate_flat(ball, model, {model.initial: ""}):
            orbits.add(canonical_orbit_key(group, region))
            grid = tuple(
                tuple(
                    A.index[canonical_orbit_key(group, region.subregion(tile(t + i - j), i, j))]
                    for j in range(n + 1)
                )
                for i in range(m + 1)
            )
            read.add(Word2D(grid))
    ok = len(words) == len(orbits) == len(read) and read == words
    return CheckReport(
        f"word count {shape}",
        "pass" if ok else "fail",
        {"words": len(words), "parallelogram_orbits": len(orbits), "words_read": len(read)},
    )


def decorating_set(ball: ChamberBall, A: Alphabet, base: int | str = "", vtype: int = 0):
    """Tiles based at the type-``vtype`` vertex of chamber ``base``, split by initial chamber.

    Returns ``(D, report)`` where ``D[c]`` lists the letters of the tiles
    whose initial chamber is c, for each of the k chambers at the vertex.
    The report checks that each part maps bijectively onto the block A_vtype.
    """
    group = ball.group
    b = ball.lookup(base) if isinstance(base, str) else int(base)
    chambers = ball.residue(b, vtype)
    model = tile(vtype)
    block = set(A.block_indices(vtype))
    D, bad = {}, []
    for c in chambers:
        letters = [A.index[canonical_orbit_key(group, r)]
                   for r in enumerate_flat(ball, model, {model.initial: int(c)})]
        D[ball.words[c]] = letters
        if len(letters) != len(set(letters)) or set(letters) != block:
            bad.append(ball.format(c))
    details = {
        "k": len(chambers),
        "per_chamber": sorted({len(v) for v in D.values()}),
        "total": sum(len(v) for v in D.values()),
        "non_bijective": bad[:5],
    }
    return D, CheckReport("decorations", "pass" if not bad else "fail", details)
