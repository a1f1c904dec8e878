"""
Versioned text exports and the ball cache.

Alphabet file (``*.alphabet.txt``)::

    # a2boundary alphabet v1
    # kind: tile
    # q: 2
    # blocks: 32 32 32
    <index> <block> : <word> | <word> | ...     (one line per letter)
    # sha256: <hex digest of the lines above>

Words are region images in scan order, written as space separated symbols
with ``1`` for the identity.  Matrix files carry the same header plus a
``# matrix: M1`` line and then sorted ``<row> <col> 1`` triplets (letter
indices, row = letter reached).
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from . import __version__
from .building import ChamberBall
from .group import Group
from .shift import Alphabet

__all__ = [
    "FORMAT_VERSION",
    "ExportError",
    "alphabet_text",
    "matrix_text",
    "write_alphabet",
    "write_matrix",
    "read_alphabet",
    "read_matrix",
    "ball_cache_key",
    "save_ball",
    "load_ball",
]

FORMAT_VERSION = 1


class ExportError(ValueError):
    """Malformed or corrupted export file."""


def _seal(lines: list[str]) -> str:
    body = "".join(line + "\n" for line in lines)
    digest = hashlib.sha256(body.encode()).hexdigest()
    return body + f"# sha256: {digest}\n"


def _unseal(text: str) -> list[str]:
    lines = text.splitlines()
    if not lines or not lines[-1].startswith("# sha256: "):
        raise ExportError("missing checksum line")
    body = "".join(line + "\n" for line in lines[:-1])
    if hashlib.sha256(body.encode()).hexdigest() != lines[-1].split(": ", 1)[1].strip():
        raise ExportError("checksum mismatch")
    return lines[:-1]


def _header(kind: str, A: Alphabet, what: str) -> list[str]:
    return [
        f"# a2boundary {what} v{FORMAT_VERSION}",
        f"# kind: {kind}",
        f"# q: {A.q}",
        "# blocks: " + " ".join(str(s) for s in A.block_sizes()),
    ]


def _parse_header(lines: list[str], what: str) -> tuple[dict, list[str]]:
    if not lines or lines[0] != f"# a2boundary {what} v{FORMAT_VERSION}":
        raise ExportError(f"not a v{FORMAT_VERSION} {what} file")
    meta, k = {}, 1
    while k < len(lines) and lines[k].startswith("# "):
        key, _, val = lines[k][2:].partition(": ")
        meta[key] = val
        k += 1
    return meta, lines[k:]


def alphabet_text(group: Group, A: Alphabet) -> str:
    lines = _header(A.kind, A, "alphabet")
    for n, (key, b) in enumerate(zip(A.keys, A.blocks)):
        lines.append(f"{n} {b} : " + " | ".join(group.format(w) for w in key))
    return _seal(lines)


def matrix_text(A: Alphabet, X: np.ndarray, name: str) -> str:
    lines = _header(A.kind, A, "matrix") + [f"# matrix: {name}", f"# letters: {len(A)}"]
    rows, cols = np.nonzero(X)
    for r, c in sorted(zip(rows.tolist(), cols.tolist())):
        lines.append(f"{r} {c} 1")
    return _seal(lines)


def write_alphabet(path, group: Group, A: Alphabet) -> Path:
    path = Path(path)
    path.write_text(alphabet_text(group, A))
    return path


def write_matrix(path, A: Alphabet, X: np.ndarray, name: str) -> Path:
    path = Path(path)
    path.write_text(matrix_text(A, X, name))
    return path


def _parse_word(group: Group, text: str) -> str:
    text = text.strip()
    return "" if text == "1" else group.normal_form(group.parse(text))


def read_alphabet(path, group: Group) -> Alphabet:
    meta, body = _parse_header(_unseal(Path(path).read_text()), "alphabet")
    keys, blocks = [], []
    for n, line in enumerate(body):
        head, _, words = line.partition(" : ")
        idx, b = head.split()
        if int(idx) != n:
            raise ExportError(f"letter {idx} out of order")
        keys.append(tuple(_parse_word(group, w) for w in words.split("|")))
        blocks.append(int(b))
    A = Alphabet(meta["kind"], keys, blocks, int(meta["q"]))
    if " ".join(str(s) for s in A.block_sizes()) != meta["blocks"] and keys:
        raise ExportError("block sizes disagree with header")
    return A


def read_matrix(path) -> tuple[str, np.ndarray]:
    meta, body = _parse_header(_unseal(Path(path).read_text()), "matrix")
    n = int(meta["letters"])
    X = np.zeros((n, n), dtype=np.int8)
    for line in body:
        r, c, v = map(int, line.split())
        if v != 1:
            raise ExportError(f"non-unit entry {line!r}")
        X[r, c] = 1
    return meta["matrix"], X


# --- ball cache ------------------------------------------------------------

def ball_cache_key(group: Group, radius: int) -> str:
    payload = json.dumps(
        {"datum": group.datum.to_dict(), "radius": radius, "version": __version__},
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()[:20]


def save_ball(cache_dir, ball: ChamberBall) -> Path:
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = cache_dir / f"ball-{ball_cache_key(ball.group, ball.radius)}.npz"
    tmp = path.with_suffix(".tmp.npz")
    np.savez_compressed(
        tmp,
        words=np.array(ball.words, dtype=object).astype(str),
        dist=ball.dist,
        adj=ball.adj,
        radius=np.int64(ball.radius),
        version=np.array(FORMAT_VERSION),
    )
    tmp.replace(path)
    return path


def load_ball(cache_dir, group: Group, radius: int) -> ChamberBall | None:
    """Cached ball for (datum, radius, code version), or None if absent."""
    path = Path(cache_dir) / f"ball-{ball_cache_key(group, radius)}.npz"
    if not path.is_file():
        return None
    with np.load(path, allow_pickle=False) as z:
        if int(z["version"]) != FORMAT_VERSION or int(z["radius"]) != radius:
            return None
        words = [str(w) for w in z["words"]]
        return ChamberBall(group, words, z["dist"], z["adj"], radius)
